"""Bimodules with explicit action matrices and relative tensor powers.

Actions are on column vectors. For the right action ``right_action[k]`` is
the matrix of ``v -> v . b_k``, so ``R(yz) = R(z) R(y)``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import Algebra, SubalgebraEmbedding
from .exactlin import (
    Mat, Vec, block_diag, echelon_of_rows, inverse, vec_axpy,
)


class BimoduleError(ValueError):
    pass


def _combine(F, mats: Sequence[Mat], x: Vec, n: int) -> Mat:
    out: Dict[int, Vec] = {}
    for k, c in x.items():
        for i, row in mats[k].data.items():
            acc = out.setdefault(i, {})
            vec_axpy(F, acc, c, row)
            if not acc:
                del out[i]
    return Mat(n, n, F, out)


@dataclass
class Bimodule:
    left_algebra: Algebra
    right_algebra: Algebra
    dim: int
    left_action: List[Mat]
    right_action: List[Mat]
    name: str = ""
    # grading hint per basis vector (see Algebra.weights)
    weights: Optional[List[tuple]] = None
    _cache: dict = dc_field(default_factory=dict, repr=False, compare=False)

    @property
    def field(self):
        return self.left_algebra.field

    def act_left(self, x: Vec) -> Mat:
        return _combine(self.field, self.left_action, x, self.dim)

    def act_right(self, y: Vec) -> Mat:
        return _combine(self.field, self.right_action, y, self.dim)

    def left_generator_actions(self) -> List[Mat]:
        key = "lgen"
        if key not in self._cache:
            self._cache[key] = [self.act_left(g) for g in self.left_algebra.generators()]
        return self._cache[key]

    def right_generator_actions(self) -> List[Mat]:
        key = "rgen"
        if key not in self._cache:
            self._cache[key] = [self.act_right(g) for g in self.right_algebra.generators()]
        return self._cache[key]

    def _types(self, side: str) -> Optional[List[int]]:
        """Idempotent label of each basis vector, when the vertex
        idempotents of the acting algebra act diagonally by 0/1."""
        key = "types" + side
        if key in self._cache:
            return self._cache[key]
        alg = self.left_algebra if side == "l" else self.right_algebra
        out = None
        if alg.vertex_idempotents is not None:
            act = self.act_left if side == "l" else self.act_right
            labels = [-1] * self.dim
            ok = True
            for a, e in enumerate(alg.vertex_idempotents):
                m = act(e)
                for i, row in m.data.items():
                    if len(row) != 1 or row.get(i) != 1:
                        ok = False
                        break
                    labels[i] = a
                if not ok:
                    break
            if ok and all(t >= 0 for t in labels):
                out = labels
        self._cache[key] = out
        return out

    def left_types(self):
        return self._types("l")

    def right_types(self):
        return self._types("r")

    def verify(self) -> None:
        """Exhaustive check of the bimodule axioms; raises BimoduleError."""
        F = self.field
        I = Mat.identity(self.dim, F)
        X, Y = self.left_algebra, self.right_algebra
        if self.act_left(X.unit) != I or self.act_right(Y.unit) != I:
            raise BimoduleError("unit does not act as the identity")
        L, R = self.left_action, self.right_action
        for i in range(X.dim):
            for j in range(X.dim):
                if self.act_left(X.mul_basis(i, j)) != L[i] @ L[j]:
                    raise BimoduleError("left action is not multiplicative")
        for i in range(Y.dim):
            for j in range(Y.dim):
                if self.act_right(Y.mul_basis(i, j)) != R[j] @ R[i]:
                    raise BimoduleError("right action is not multiplicative")
        for l in L:
            for r in R:
                if l @ r != r @ l:
                    raise BimoduleError("left and right actions do not commute")

    def __repr__(self):
        return f"Bimodule({self.name or '?'}, dim={self.dim})"


def regular_bimodule(a: Algebra) -> Bimodule:
    L = [a.left_mult({k: a.field.one}) for k in range(a.dim)]
    R = [a.right_mult({k: a.field.one}) for k in range(a.dim)]
    return Bimodule(a, a, a.dim, L, R, name="A",
                    weights=list(a.weights) if a.weights is not None else None)


def restrict(m: Bimodule, side: str, e: SubalgebraEmbedding) -> Bimodule:
    """Restrict the left, right or both actions along ``e``."""
    if side not in ("left", "right", "both"):
        raise BimoduleError(f"bad side {side!r}")
    left, right = m.left_action, m.right_action
    la, ra = m.left_algebra, m.right_algebra
    if side in ("left", "both"):
        if e.ambient is not la:
            raise BimoduleError("embedding ambient is not the left algebra")
        left = [m.act_left(c) for c in e.image_basis()]
        la = e.sub
    if side in ("right", "both"):
        if e.ambient is not ra:
            raise BimoduleError("embedding ambient is not the right algebra")
        right = [m.act_right(c) for c in e.image_basis()]
        ra = e.sub
    return Bimodule(la, ra, m.dim, left, right, name=f"{m.name}|{side}", weights=m.weights)


def direct_sum(ms: Sequence[Bimodule]) -> Bimodule:
    if not ms:
        raise BimoduleError("empty direct sum")
    la, ra = ms[0].left_algebra, ms[0].right_algebra
    for m in ms[1:]:
        if m.left_algebra is not la or m.right_algebra is not ra:
            raise BimoduleError("direct summands over different algebras")
    F = la.field
    left = [block_diag([m.left_action[k] for m in ms], F) for k in range(la.dim)]
    right = [block_diag([m.right_action[k] for m in ms], F) for k in range(ra.dim)]
    weights = None
    if all(m.weights is not None for m in ms):
        weights = [w for m in ms for w in m.weights]
    return Bimodule(la, ra, sum(m.dim for m in ms), left, right,
                    name="+".join(m.name or "?" for m in ms), weights=weights)


def conjugate(m: Bimodule, P: Mat) -> Bimodule:
    """The isomorphic bimodule with actions P X P^-1 (basis change by P)."""
    Pi = inverse(P)
    return Bimodule(m.left_algebra, m.right_algebra, m.dim,
                    [P @ X @ Pi for X in m.left_action], [P @ X @ Pi for X in m.right_action],
                    name=f"{m.name}^P")


def multiple(m: Bimodule, q: int) -> Bimodule:
    return direct_sum([m] * q)


@dataclass
class TensorProduct:
    module: Bimodule
    projection: Mat   # quotient.dim x (dm*dn)
    section: Mat      # (dm*dn) x quotient.dim, picks one pure tensor per basis vector
    pairs: List[Tuple[int, int]]   # basis vector k is the class of x_s (x) y_t


def _wadd(u: tuple, v: tuple) -> tuple:
    if len(u) != len(v):
        return (sum(u) + sum(v),)
    return tuple(a + b for a, b in zip(u, v))


def tensor_over(m: Bimodule, n: Bimodule) -> TensorProduct:
    """``m (x)_B n`` for B = right algebra of m = left algebra of n.

    The underlying space is the quotient of ``m (x)_K n`` by the relations
    ``x.b (x) y - x (x) b.y`` over algebra generators b of B; its basis is
    the non-pivot coordinates of the relation RREF.
    """
    B = m.right_algebra
    if n.left_algebra is not B:
        raise BimoduleError("tensor factors are not over a common algebra")
    F = m.field
    dm, dn = m.dim, n.dim
    N = dm * dn
    rels: List[Vec] = []
    for R, L in zip(m.right_generator_actions(), n.left_generator_actions()):
        Rc = R.columns()
        Lc = L.columns()
        for s in range(dm):
            xs = Rc[s]
            for t in range(dn):
                rel: Vec = {}
                for s2, v in xs.items():
                    rel[s2 * dn + t] = v
                for t2, v in Lc[t].items():
                    k = s * dn + t2
                    w = rel.get(k, 0) - v
                    if F.p:
                        w %= F.p
                    if w:
                        rel[k] = w
                    else:
                        rel.pop(k, None)
                if rel:
                    rels.append(rel)
    eb = echelon_of_rows(F, N, rels)
    keep = [c for c in range(N) if c not in eb.rows]
    pos = {c: k for k, c in enumerate(keep)}
    q = len(keep)

    proj_cols: List[Vec] = []
    for c in range(N):
        row = eb.rows.get(c)
        if row is None:
            proj_cols.append({pos[c]: F.one})
        else:
            proj_cols.append({pos[j]: F.neg(x) for j, x in row.items() if j != c})

    def project(v: Vec) -> Vec:
        out: Vec = {}
        for c, x in v.items():
            vec_axpy(F, out, x, proj_cols[c])
        return out

    pairs = [divmod(c, dn) for c in keep]
    left = []
    for L in m.left_action:
        Lc = L.columns()
        cols = []
        for s, t in pairs:
            cols.append(project({s2 * dn + t: v for s2, v in Lc[s].items()}))
        left.append(Mat.from_columns(cols, q, F))
    right = []
    for R in n.right_action:
        Rc = R.columns()
        cols = []
        for s, t in pairs:
            cols.append(project({s * dn + t2: v for t2, v in Rc[t].items()}))
        right.append(Mat.from_columns(cols, q, F))
    weights = None
    if m.weights is not None and n.weights is not None:
        weights = [_wadd(m.weights[s], n.weights[t]) for s, t in pairs]
    module = Bimodule(m.left_algebra, n.right_algebra, q, left, right,
                      name=f"({m.name})x({n.name})", weights=weights)
    proj = Mat.from_columns(proj_cols, q, F)
    section = Mat.from_columns([{c: F.one} for c in keep], N, F)
    return TensorProduct(module, proj, section, pairs)


def tensor_over_B(m: Bimodule, n: Bimodule) -> Tuple[Bimodule, Mat, Mat]:
    tp = tensor_over(m, n)
    return tp.module, tp.projection, tp.section


class TensorChain:
    """Cached tensor powers C_n(A, B), built left-associated.

    Levels are computed once under a lock and never mutated afterwards.
    """

    def __init__(self, e: SubalgebraEmbedding):
        self.embedding = e
        self.A = e.ambient
        self.B = e.sub
        self._levels: Dict[int, TensorProduct] = {}
        self._restricted: Dict[Tuple[int, str], Bimodule] = {}
        self._lock = threading.RLock()
        self._regular = regular_bimodule(self.A)
        self._BA = restrict(self._regular, "left", e)

    def c(self, n: int) -> Bimodule:
        """C_n as an A-A-bimodule (n >= 1)."""
        if n < 1:
            raise BimoduleError("C_0 = B is only a B-B-bimodule; use level(0, 'BB')")
        if n == 1:
            return self._regular
        with self._lock:
            if n not in self._levels:
                prev = restrict(self.c(n - 1), "right", self.embedding)
                tp = tensor_over(prev, self._BA)
                tp.module.name = f"C{n}"
                self._levels[n] = tp
            return self._levels[n].module

    def tensor_level(self, n: int) -> TensorProduct:
        self.c(n)
        return self._levels[n]

    def level(self, n: int, kind: str = "AA") -> Bimodule:
        """C_n with the bimodule structure ``kind`` in {AA, AB, BA, BB}."""
        if kind not in ("AA", "AB", "BA", "BB"):
            raise BimoduleError(f"bad bimodule kind {kind!r}")
        if n == 0:
            if kind != "BB":
                raise BimoduleError("C_0 = B is only a B-B-bimodule")
            key = (0, "BB")
            with self._lock:
                if key not in self._restricted:
                    m = regular_bimodule(self.B)
                    m.name = "C0"
                    self._restricted[key] = m
                return self._restricted[key]
        if kind == "AA":
            return self.c(n)
        key = (n, kind)
        with self._lock:
            if key not in self._restricted:
                side = {"AB": "right", "BA": "left", "BB": "both"}[kind]
                m = restrict(self.c(n), side, self.embedding)
                m.name = f"C{n}[{kind}]"
                self._restricted[key] = m
            return self._restricted[key]

    def dim(self, n: int) -> int:
        return self.B.dim if n == 0 else self.c(n).dim


def c_n(chain: TensorChain, n: int) -> Bimodule:
    return chain.c(n)


@dataclass
class Corner:
    basis: List[Vec]

    @property
    def dim(self):
        return len(self.basis)


def corner(m: Bimodule, ei: Vec, ej: Vec) -> Corner:
    """Image of the projector v -> ei . v . ej."""
    X, Y = m.left_algebra, m.right_algebra
    if X.mul(ei, ei) != ei or Y.mul(ej, ej) != ej:
        raise BimoduleError("corner needs idempotents")
    P = m.act_left(ei) @ m.act_right(ej)
    return Corner(echelon_of_rows(m.field, m.dim, P.columns()).basis())
