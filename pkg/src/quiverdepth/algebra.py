"""Finite-dimensional algebras given by structure constants."""

from __future__ import annotations

import json
import re
from fractions import Fraction
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from .exactlin import (
    QQ, EchelonBasis, FieldSpec, Mat, Vec, echelon_of_rows, kernel_basis,
    vec_axpy, vec_lincomb,
)
from .quiver import CyclicQuiverError, Quiver, enumerate_paths, validate

FORMAT_VERSION = "quiverdepth.algebra/1"


class AlgebraError(ValueError):
    pass


@dataclass
class Algebra:
    """Associative unital algebra on basis ``0..dim-1``.

    ``table[i]`` maps ``j`` to the (nonzero) product vector of basis elements
    ``i`` and ``j``; missing entries are zero products.
    """

    field: FieldSpec
    labels: List[str]
    table: List[Dict[int, Vec]]
    unit: Vec
    vertex_idempotents: Optional[List[Vec]] = None
    # path length of each basis element, when the basis is homogeneous
    degrees: Optional[List[int]] = None
    # finer grading: one int tuple per basis element (arrow counts for path
    # algebras); only a hint, consumers check homogeneity before using it
    weights: Optional[List[Tuple[int, ...]]] = None
    # basis of the arrow ideal (image of it, after quotients)
    radical_basis: Optional[List[Vec]] = None
    # idempotents e1, e2 of a direct product or triangular ring
    block_idempotents: Optional[List[Vec]] = None
    # set for path algebras
    paths: Optional[list] = dc_field(default=None, repr=False)
    quiver: Optional[Quiver] = dc_field(default=None, repr=False)
    # algebra generators; None means "compute on demand"
    _generators: Optional[List[Vec]] = dc_field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def basis_vector(self, i) -> Vec:
        return {i: self.field.one}

    def mul_basis(self, i, j) -> Vec:
        return self.table[i].get(j, {})

    def mul(self, x: Vec, y: Vec) -> Vec:
        F = self.field
        out: Vec = {}
        for i, a in x.items():
            row = self.table[i]
            if not row:
                continue
            for j, b in y.items():
                v = row.get(j)
                if v:
                    vec_axpy(F, out, a * b, v)
        return out

    def left_mult(self, x: Vec) -> Mat:
        """Matrix of y -> x*y."""
        cols = [self.mul(x, {j: self.field.one}) for j in range(self.dim)]
        return Mat.from_columns(cols, self.dim, self.field)

    def right_mult(self, x: Vec) -> Mat:
        """Matrix of y -> y*x."""
        cols = [self.mul({j: self.field.one}, x) for j in range(self.dim)]
        return Mat.from_columns(cols, self.dim, self.field)

    def vector(self, coeffs: Dict[str, object]) -> Vec:
        idx = {l: i for i, l in enumerate(self.labels)}
        out: Vec = {}
        for lab, c in coeffs.items():
            vec_axpy(self.field, out, self.field(c), {idx[lab]: self.field.one})
        return out

    def index(self, label) -> int:
        return self.labels.index(label)

    def format_vector(self, v: Vec) -> str:
        if not v:
            return "0"
        parts = []
        for i in sorted(v):
            c = v[i]
            parts.append(self.labels[i] if c == 1 else f"{self.field.to_json(c)}*{self.labels[i]}")
        return " + ".join(parts)

    def generators(self) -> List[Vec]:
        """A generating set as a unital algebra (unit excluded)."""
        if self._generators is None:
            self._generators = greedy_generators(self)
        return self._generators

    def is_semisimple_split_by_idempotents(self) -> bool:
        return self.vertex_idempotents is not None

    def verify(self) -> None:
        """Exhaustive associativity and unit checks; raises AlgebraError."""
        F = self.field
        n = self.dim
        for i in range(n):
            e = {i: F.one}
            if self.mul(self.unit, e) != e or self.mul(e, self.unit) != e:
                raise AlgebraError(f"unit fails on basis element {self.labels[i]}")
        for i in range(n):
            for j in range(n):
                ij = self.mul_basis(i, j)
                for k in range(n):
                    lhs = self.mul(ij, {k: F.one})
                    rhs = self.mul({i: F.one}, self.mul_basis(j, k))
                    if lhs != rhs:
                        raise AlgebraError(
                            f"associativity fails on ({self.labels[i]},{self.labels[j]},{self.labels[k]})")
        if self.vertex_idempotents is not None:
            idem = self.vertex_idempotents
            total: Vec = {}
            for a, e in enumerate(idem):
                vec_axpy(F, total, F.one, e)
                for b, f in enumerate(idem):
                    prod = self.mul(e, f)
                    if prod != (e if a == b else {}):
                        raise AlgebraError("vertex idempotents are not orthogonal idempotents")
            if total != self.unit:
                raise AlgebraError("vertex idempotents do not sum to the unit")

    # --- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        F = self.field
        enc = lambda v: {str(k): F.to_json(x) for k, x in sorted(v.items())}
        mult = []
        for i, row in enumerate(self.table):
            for j in sorted(row):
                mult.append([i, j, enc(row[j])])
        out = {
            "format": FORMAT_VERSION,
            "field": str(F),
            "labels": list(self.labels),
            "mult": mult,
            "unit": enc(self.unit),
        }
        if self.vertex_idempotents is not None:
            out["idempotents"] = [enc(e) for e in self.vertex_idempotents]
        if self.degrees is not None:
            out["degrees"] = list(self.degrees)
        if self.weights is not None:
            out["weights"] = [list(w) for w in self.weights]
        if self.radical_basis is not None:
            out["radical"] = [enc(v) for v in self.radical_basis]
        if self.block_idempotents is not None:
            out["blocks"] = [enc(e) for e in self.block_idempotents]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Algebra":
        if data.get("format") != FORMAT_VERSION:
            raise AlgebraError(f"unsupported algebra format {data.get('format')!r}")
        F = FieldSpec.parse(data["field"])
        dec = lambda d: {int(k): F(x) for k, x in d.items() if F(x)}
        n = len(data["labels"])
        table: List[Dict[int, Vec]] = [dict() for _ in range(n)]
        for i, j, v in data["mult"]:
            v = dec(v)
            if v:
                table[i][j] = v
        return cls(
            F, list(data["labels"]), table, dec(data["unit"]),
            vertex_idempotents=[dec(e) for e in data["idempotents"]] if "idempotents" in data else None,
            degrees=data.get("degrees"),
            weights=[tuple(w) for w in data["weights"]] if "weights" in data else None,
            radical_basis=[dec(v) for v in data["radical"]] if "radical" in data else None,
            block_idempotents=[dec(e) for e in data["blocks"]] if "blocks" in data else None,
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


_TERM = re.compile(r"([+-]?)\s*(?:(\d+(?:/\d+)?)\s*\*\s*)?([A-Za-z_][\w.]*)\s*")


def parse_vector(a: Algebra, text: str) -> Vec:
    """Parse a sum like ``1*e1 - 2*a1 + 1/2*a2.a1``; a missing coefficient means 1."""
    F = a.field
    idx = {l: i for i, l in enumerate(a.labels)}
    s = text.strip()
    if not s:
        raise AlgebraError("empty vector")
    out: Vec = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (pos > 0 and not m.group(1)):
            raise AlgebraError(f"cannot parse {s[pos:]!r}")
        sign, coeff, label = m.groups()
        if label not in idx:
            raise AlgebraError(f"unknown basis label {label!r}")
        c = F(Fraction(coeff or 1))
        if sign == "-":
            c = F.neg(c)
        vec_axpy(F, out, c, {idx[label]: F.one})
        pos = m.end()
    return out


def greedy_generators(a: Algebra) -> List[Vec]:
    """Basis elements, in order, that are not in the subalgebra generated so far."""
    F = a.field
    gens: List[Vec] = []
    span = _closure(a, [a.unit])
    for i in range(a.dim):
        e = {i: F.one}
        if not span.contains(e):
            gens.append(e)
            span = _closure(a, [a.unit] + gens)
            if span.rank == a.dim:
                break
    return gens


def _closure(a: Algebra, gens: Sequence[Vec]) -> EchelonBasis:
    """Echelon basis of the unital subalgebra generated by ``gens``."""
    eb = EchelonBasis(a.field, a.dim)
    new = [g for g in list(gens) + [a.unit] if eb.add(g)]
    while new:
        fresh = []
        current = eb.basis()
        for x in new:
            for y in current:
                for prod in (a.mul(x, y), a.mul(y, x)):
                    if prod and eb.add(prod):
                        fresh.append(prod)
        new = fresh
    return eb


# --- path algebras ---------------------------------------------------------

def path_algebra(q: Quiver, field: FieldSpec = QQ) -> Algebra:
    if not validate(q).acyclic:
        raise CyclicQuiverError("path algebra of a quiver with cycles is infinite-dimensional")
    paths = enumerate_paths(q)
    index = {(p.source, p.target, p.arrows): i for i, p in enumerate(paths)}
    one = field.one
    table: List[Dict[int, Vec]] = [dict() for _ in paths]
    for i, p in enumerate(paths):
        for j, r in enumerate(paths):
            if p.target != r.source:
                continue
            k = index[(p.source, r.target, p.arrows + r.arrows)]
            table[i][j] = {k: one}
    n = q.n_vertices
    idem = [{i: one} for i in range(n)]
    unit = {i: one for i in range(n)}
    gens = idem[:-1] + [{index[(a.source, a.target, (a.label,))]: one} for a in q.arrows]
    apos = {a.label: k for k, a in enumerate(q.arrows)}
    weights = []
    for p in paths:
        w = [0] * len(q.arrows)
        for lab in p.arrows:
            w[apos[lab]] += 1
        weights.append(tuple(w))
    alg = Algebra(
        field, [p.label for p in paths], table, unit,
        vertex_idempotents=idem,
        degrees=[p.length for p in paths],
        weights=weights,
        radical_basis=[{i: one} for i, p in enumerate(paths) if p.length >= 1],
        paths=paths,
        quiver=q,
        _generators=gens,
    )
    return alg


# --- subalgebras -----------------------------------------------------------

@dataclass
class SubalgebraEmbedding:
    ambient: Algebra
    sub: Algebra
    inclusion: Mat          # ambient.dim x sub.dim

    def image(self, b: Vec) -> Vec:
        return self.inclusion.apply(b)

    def image_basis(self) -> List[Vec]:
        return self.inclusion.columns()

    def verify(self) -> None:
        A, B, F = self.ambient, self.sub, self.ambient.field
        cols = self.image_basis()
        if echelon_of_rows(F, A.dim, cols).rank != B.dim:
            raise AlgebraError("inclusion is not injective")
        if self.image(B.unit) != A.unit:
            raise AlgebraError("inclusion does not preserve the unit")
        for i in range(B.dim):
            for j in range(B.dim):
                if A.mul(cols[i], cols[j]) != self.image(B.mul_basis(i, j)):
                    raise AlgebraError("inclusion is not multiplicative")


def _sub_label(a: Algebra, v: Vec) -> str:
    if v == a.unit:
        return "1"
    if len(v) == 1:
        (i, c), = v.items()
        if c == 1:
            return a.labels[i]
    return a.format_vector(v).replace(" ", "")


def subalgebra_from_basis(ambient: Algebra, basis: Sequence[Vec], labels=None) -> SubalgebraEmbedding:
    """Embedding for a subspace already known to be a unital subalgebra.

    ``basis`` must be an echelon basis (as produced by EchelonBasis) so that
    coordinates can be read off at the pivot columns.
    """
    F = ambient.field
    eb = EchelonBasis(F, ambient.dim)
    for v in basis:
        eb.add(v)
    rows = eb.basis()
    pivots = eb.pivots()
    pos = {c: k for k, c in enumerate(pivots)}

    def coords(v: Vec) -> Vec:
        if eb.reduce(v):
            raise AlgebraError("span is not closed under multiplication")
        return {pos[c]: v[c] for c in pivots if c in v}

    n = len(rows)
    table: List[Dict[int, Vec]] = [dict() for _ in range(n)]
    for i in range(n):
        for j in range(n):
            prod = ambient.mul(rows[i], rows[j])
            if prod:
                table[i][j] = coords(prod)
    unit = coords(ambient.unit)
    idem = None
    if ambient.vertex_idempotents is not None and all(eb.contains(e) for e in ambient.vertex_idempotents):
        idem = [coords(e) for e in ambient.vertex_idempotents]
    degrees = None
    if ambient.degrees is not None and all(len(r) == 1 for r in rows):
        degrees = [ambient.degrees[next(iter(r))] for r in rows]
    sub = Algebra(F, labels or [_sub_label(ambient, r) for r in rows], table, unit,
                  vertex_idempotents=idem, degrees=degrees, weights=_sub_weights(ambient, rows))
    return SubalgebraEmbedding(ambient, sub, Mat.from_columns(rows, ambient.dim, F))


def _sub_weights(ambient: Algebra, rows: Sequence[Vec]):
    """Weights of a basis of homogeneous vectors; falls back to the
    total degree, then to None."""
    if ambient.weights is None:
        return None
    for phi in (lambda w: tuple(w), lambda w: (sum(w),)):
        out = []
        for r in rows:
            ws = {phi(ambient.weights[k]) for k in r}
            if len(ws) != 1:
                break
            out.append(ws.pop())
        else:
            return out
    return None


def subalgebra_closure(ambient: Algebra, generators: Sequence[Vec]) -> SubalgebraEmbedding:
    eb = _closure(ambient, generators)
    return subalgebra_from_basis(ambient, eb.basis())


def identity_embedding(a: Algebra) -> SubalgebraEmbedding:
    return SubalgebraEmbedding(a, a, Mat.identity(a.dim, a.field))


# --- ideals and quotients --------------------------------------------------

@dataclass
class Ideal:
    ambient: Algebra
    basis: List[Vec]

    @property
    def dim(self):
        return echelon_of_rows(self.ambient.field, self.ambient.dim, self.basis).rank

    def is_ideal(self) -> bool:
        A = self.ambient
        eb = echelon_of_rows(A.field, A.dim, self.basis)
        for v in eb.basis():
            for k in range(A.dim):
                e = {k: A.field.one}
                if not eb.contains(A.mul(e, v)) or not eb.contains(A.mul(v, e)):
                    return False
        return True


def ideal_generated(a: Algebra, gens: Sequence[Vec]) -> Ideal:
    """Two-sided ideal generated by ``gens``."""
    F = a.field
    eb = EchelonBasis(F, a.dim)
    todo = [g for g in gens if eb.add(g)]
    while todo:
        fresh = []
        for v in todo:
            for k in range(a.dim):
                e = {k: F.one}
                for w in (a.mul(e, v), a.mul(v, e)):
                    if w and eb.add(w):
                        fresh.append(w)
        todo = fresh
    return Ideal(a, eb.basis())


def ideal_product(x: Ideal, y: Ideal) -> Ideal:
    a = x.ambient
    prods = [a.mul(u, v) for u in x.basis for v in y.basis]
    return ideal_generated(a, [p for p in prods if p])


def ideal_power(i: Ideal, k: int) -> Ideal:
    out = i
    for _ in range(k - 1):
        out = ideal_product(out, i)
    return out


def quotient(ambient: Algebra, ideal: Ideal) -> Tuple[Algebra, Mat]:
    """Quotient algebra on the non-pivot coordinates of the ideal's RREF."""
    if not ideal.is_ideal():
        raise AlgebraError("subspace is not a two-sided ideal")
    F = ambient.field
    eb = echelon_of_rows(F, ambient.dim, ideal.basis)
    keep = [j for j in range(ambient.dim) if j not in eb.rows]
    pos = {c: k for k, c in enumerate(keep)}

    def project(v: Vec) -> Vec:
        r = eb.reduce(v)
        return {pos[c]: x for c, x in r.items()}

    cols = [project({j: F.one}) for j in range(ambient.dim)]
    proj = Mat.from_columns(cols, len(keep), F)
    table: List[Dict[int, Vec]] = [dict() for _ in keep]
    for s, i in enumerate(keep):
        for t, j in enumerate(keep):
            v = project(ambient.mul_basis(i, j))
            if v:
                table[s][t] = v
    idem = None
    if ambient.vertex_idempotents is not None:
        idem = [project(e) for e in ambient.vertex_idempotents]
    rad = None
    if ambient.radical_basis is not None:
        rad_eb = echelon_of_rows(F, len(keep), [project(v) for v in ambient.radical_basis])
        rad = rad_eb.basis()
    q = Algebra(
        F, [ambient.labels[j] for j in keep], table, project(ambient.unit),
        vertex_idempotents=idem,
        degrees=[ambient.degrees[j] for j in keep] if ambient.degrees is not None else None,
        weights=[ambient.weights[j] for j in keep] if ambient.weights is not None else None,
        radical_basis=rad,
    )
    return q, proj


def quotient_embedding(e: SubalgebraEmbedding, ideal: Ideal) -> Tuple[SubalgebraEmbedding, Algebra, Mat]:
    """Induced extension B/I in A/I for an A-ideal I contained in B."""
    A = e.ambient
    F = A.field
    img = echelon_of_rows(F, A.dim, e.image_basis())
    if not all(img.contains(v) for v in ideal.basis):
        raise AlgebraError("ideal is not contained in the subalgebra")
    qa, proj = quotient(A, ideal)
    images = [proj.apply(v) for v in e.image_basis()]
    sub_eb = echelon_of_rows(F, qa.dim, images)
    return subalgebra_from_basis(qa, sub_eb.basis()), qa, proj


# --- products and triangular rings ----------------------------------------

def _shift(v: Vec, off: int) -> Vec:
    return {k + off: x for k, x in v.items()}


def direct_product(a1: Algebra, a2: Algebra) -> Algebra:
    if a1.field != a2.field:
        raise AlgebraError("field mismatch")
    F = a1.field
    n1 = a1.dim
    table = [{j: dict(v) for j, v in row.items()} for row in a1.table]
    table += [{j + n1: _shift(v, n1) for j, v in row.items()} for row in a2.table]
    e1 = dict(a1.unit)
    e2 = _shift(a2.unit, n1)
    idem = None
    if a1.vertex_idempotents is not None and a2.vertex_idempotents is not None:
        idem = [dict(e) for e in a1.vertex_idempotents] + [_shift(e, n1) for e in a2.vertex_idempotents]
    degrees = a1.degrees + a2.degrees if a1.degrees is not None and a2.degrees is not None else None
    weights = None
    if a1.weights is not None and a2.weights is not None:
        z1 = (0,) * len(a1.weights[0]) if a1.weights else ()
        z2 = (0,) * len(a2.weights[0]) if a2.weights else ()
        weights = [tuple(w) + z2 for w in a1.weights] + [z1 + tuple(w) for w in a2.weights]
    rad = None
    if a1.radical_basis is not None and a2.radical_basis is not None:
        rad = [dict(v) for v in a1.radical_basis] + [_shift(v, n1) for v in a2.radical_basis]
    return Algebra(
        F, [f"1:{l}" for l in a1.labels] + [f"2:{l}" for l in a2.labels], table,
        vec_lincomb(F, [(F.one, e1), (F.one, e2)]),
        vertex_idempotents=idem, degrees=degrees, weights=weights, radical_basis=rad,
        block_idempotents=[e1, e2],
    )


def direct_product_embedding(e1: SubalgebraEmbedding, e2: SubalgebraEmbedding) -> SubalgebraEmbedding:
    """R' x S' inside R x S."""
    A = direct_product(e1.ambient, e2.ambient)
    n1 = e1.ambient.dim
    cols = e1.image_basis() + [_shift(c, n1) for c in e2.image_basis()]
    return subalgebra_from_basis(A, echelon_of_rows(A.field, A.dim, cols).basis())


def triangular_ring(r: Algebra, s: Algebra, m) -> Algebra:
    """Lower triangular ring [[R, 0], [M, S]] for an (S, R)-bimodule M.

    Basis order: R, then M, then S. ``m`` is a Bimodule with
    ``left_algebra`` S and ``right_algebra`` R.
    """
    F = r.field
    nr, nm, ns = r.dim, m.dim, s.dim
    om, os_ = nr, nr + nm
    n = nr + nm + ns
    table: List[Dict[int, Vec]] = [dict() for _ in range(n)]
    for i, row in enumerate(r.table):
        for j, v in row.items():
            table[i][j] = dict(v)
    for i, row in enumerate(s.table):
        for j, v in row.items():
            table[os_ + i][os_ + j] = _shift(v, os_)
    # m * r' uses the right R-action, s * m' the left S-action
    for k in range(nm):
        for j in range(nr):
            col = m.right_action[j].column(k)
            if col:
                table[om + k][j] = _shift(col, om)
        for i in range(ns):
            col = m.left_action[i].column(k)
            if col:
                table[os_ + i][om + k] = _shift(col, om)
    e1 = dict(r.unit)
    e2 = _shift(s.unit, os_)
    idem = None
    if r.vertex_idempotents is not None and s.vertex_idempotents is not None:
        idem = [dict(e) for e in r.vertex_idempotents] + [_shift(e, os_) for e in s.vertex_idempotents]
    degrees = rad = None
    weights = None
    if r.degrees is not None and s.degrees is not None:
        degrees = list(r.degrees) + [1] * nm + list(s.degrees)
    if r.weights is not None and s.weights is not None:
        lr = len(r.weights[0]) if r.weights else 0
        ls = len(s.weights[0]) if s.weights else 0
        zm = (0,) * nm
        weights = [tuple(w) + zm + (0,) * ls for w in r.weights]
        weights += [(0,) * lr + tuple(int(j == k) for j in range(nm)) + (0,) * ls for k in range(nm)]
        weights += [(0,) * lr + zm + tuple(w) for w in s.weights]
    if r.radical_basis is not None and s.radical_basis is not None:
        rad = [dict(v) for v in r.radical_basis] + [{om + k: F.one} for k in range(nm)] \
            + [_shift(v, os_) for v in s.radical_basis]
    labels = [f"R:{l}" for l in r.labels] + [f"M{k + 1}" for k in range(nm)] + [f"S:{l}" for l in s.labels]
    return Algebra(F, labels, table, vec_lincomb(F, [(F.one, e1), (F.one, e2)]),
                   vertex_idempotents=idem, degrees=degrees, weights=weights, radical_basis=rad,
                   block_idempotents=[e1, e2])


# --- radicals and locality -------------------------------------------------

def graded_radical(a: Algebra) -> Ideal:
    """The arrow ideal (paths of length >= 1), or its image in a quotient."""
    if a.radical_basis is None:
        raise AlgebraError("algebra has no path grading; use dickson_radical")
    return Ideal(a, [dict(v) for v in a.radical_basis])


def dickson_radical(a: Algebra) -> Ideal:
    """Jacobson radical as {x : tr(L_{xy}) = 0 for all y}; characteristic zero only."""
    F = a.field
    if F.p:
        raise AlgebraError("trace-form radical requires characteristic zero")
    n = a.dim
    # trace of left multiplication by each basis element
    tr = [sum((a.table[k].get(l, {}).get(l, 0) for l in range(n)), F.zero) for k in range(n)]
    rows = []
    for i in range(n):
        row = {}
        for j in range(n):
            v = a.table[i].get(j)
            if v:
                t = sum((c * tr[k] for k, c in v.items()), F.zero)
                if t:
                    row[j] = t
        rows.append(row)
    gram = Mat.from_rows(rows, n, F)
    return Ideal(a, kernel_basis(gram.transpose()))


def is_local(a: Algebra) -> bool:
    return a.dim - len(dickson_radical(a).basis) == 1


def structure_from_matrices(field: FieldSpec, mats: Sequence[Mat], labels=None) -> Algebra:
    """Algebra spanned by linearly independent square matrices closed under product.

    The basis is the given list; the identity must lie in the span.
    """
    F = field
    vecs = [m.vectorize() for m in mats]
    n = len(mats)
    size = mats[0].nrows if mats else 0
    eb = EchelonBasis(F, size * size)
    # express vectors via the echelon basis built from the given ones
    for v in vecs:
        if not eb.add(v):
            raise AlgebraError("matrices are linearly dependent")
    # change of basis from echelon rows back to the given matrices
    pivots = eb.pivots()
    coord_mat = Mat.from_rows([{k: v.get(c, F.zero) for k, c in enumerate(pivots) if v.get(c)} for v in vecs], n, F)
    # coords_in_given = solve(coord_mat^T x = pivot coords)
    inv_rows = _invert(coord_mat)

    def coords(v: Vec) -> Vec:
        if eb.reduce(v):
            raise AlgebraError("matrix span is not closed under multiplication")
        pv = {k: v[c] for k, c in enumerate(pivots) if c in v}
        # x^T coord_mat = pv^T  =>  x = pv^T coord_mat^{-1}
        out: Vec = {}
        for k, x in pv.items():
            vec_axpy(F, out, x, inv_rows.get(k, {}))
        return out

    table: List[Dict[int, Vec]] = [dict() for _ in range(n)]
    for i in range(n):
        for j in range(n):
            prod = (mats[i] @ mats[j]).vectorize()
            if prod:
                table[i][j] = coords(prod)
    unit = coords(Mat.identity(size, F).vectorize())
    return Algebra(F, labels or [f"f{i}" for i in range(n)], table, unit)


def _invert(m: Mat) -> Dict[int, Vec]:
    """Rows of the inverse of a square invertible matrix."""
    F = m.field
    n = m.nrows
    aug = []
    for i in range(n):
        r = dict(m.row(i))
        r[n + i] = F.one
        aug.append(r)
    eb = echelon_of_rows(F, 2 * n, aug)
    if any(c >= n for c in eb.rows) or eb.rank != n:
        raise AlgebraError("matrix is singular")
    return {c: {j - n: x for j, x in row.items() if j >= n} for c, row in eb.rows.items()}
