"""Bimodule homomorphisms, endomorphism algebras and divisibility.

``in_add(m, n)`` decides whether m is a direct summand of some multiple qN.
That holds iff the identity of m is a sum of composites m -> n -> m, i.e. iff
id_m lies in the span T of {g o f : f in Hom(m, n), g in Hom(n, m)} (the span
of pairwise composites of basis elements is already all finite sums, by
bilinearity). Both answers are certified exactly, after the injective map
psi(X) = (X v_1, ..., X v_s) for a bimodule generating tuple v:

* True: psi(id_m) is found in the span S of some psi(g o f), S inside psi(T).
* False: a linear functional vanishes on every psi(g_j o f_i) but not on
  psi(id_m).

Random composites are used only to grow S quickly; they never decide the
answer on their own.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import Algebra, structure_from_matrices
from .bimodule import Bimodule
import flint

from .exactlin import (
    MODULUS, EchelonBasis, Mat, Vec, dense_pivots, echelon_of_rows, exact_from_rows,
    kernel_from_echelon, nmod_from_rows, residue,
)


class HomError(ValueError):
    pass


@dataclass
class HomSpace:
    source: Bimodule
    target: Bimodule
    basis: List[Mat]   # each target.dim x source.dim
    # degree of each basis map for a grading shared by source and target
    degrees: Optional[List[tuple]] = None
    # the weights (source, target) that grading uses
    grading: Optional[Tuple[List[tuple], List[tuple]]] = None

    @property
    def dim(self):
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def is_intertwiner(self, f: Mat) -> bool:
        m, n = self.source, self.target
        for k in range(m.left_algebra.dim):
            if f @ m.left_action[k] != n.left_action[k] @ f:
                return False
        for k in range(m.right_algebra.dim):
            if f @ m.right_action[k] != n.right_action[k] @ f:
                return False
        return True


def _check_pair(m: Bimodule, n: Bimodule):
    if m.left_algebra is not n.left_algebra or m.right_algebra is not n.right_algebra:
        raise HomError("bimodules are over different algebra pairs")


def _sub(u: tuple, v: tuple) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def _homogeneous_degree(X: Mat, wr: List[tuple], wc: List[tuple]):
    """Degree of X for row/column weights, "zero" for X = 0, None if mixed."""
    deg = "zero"
    for r, row in X.data.items():
        for c in row:
            d = _sub(wr[r], wc[c])
            if deg == "zero":
                deg = d
            elif d != deg:
                return None
    return deg


def _grading(m: Bimodule, n: Bimodule, pairs) -> Optional[Tuple[List[tuple], List[tuple]]]:
    """Weights for m and n under which every acting generator is homogeneous
    of the same degree on both modules: the arrow-count grading if possible,
    else the total degree."""
    if m.weights is None or n.weights is None:
        return None
    lens = {len(w) for w in m.weights} | {len(w) for w in n.weights}
    phis = [lambda w: (sum(w),)]
    if len(lens) == 1:
        phis.insert(0, tuple)
    for phi in phis:
        wm = [phi(w) for w in m.weights]
        wn = [phi(w) for w in n.weights]
        ok = True
        for Xm, Xn in pairs:
            dm_ = _homogeneous_degree(Xm, wm, wm)
            dn_ = _homogeneous_degree(Xn, wn, wn)
            if dm_ is None or dn_ is None or (dm_ != "zero" and dn_ != "zero" and dm_ != dn_):
                ok = False
                break
        if ok:
            return wm, wn
    return None


def hom_space(m: Bimodule, n: Bimodule, use_generators: bool = True) -> HomSpace:
    """Basis of Hom(m, n) as bimodules.

    With ``use_generators`` the linear system uses algebra generators only,
    and vertex idempotents acting diagonally on both modules are imposed by
    zeroing the unknowns that join different idempotent types.
    """
    _check_pair(m, n)
    F = m.field
    dm, dn = m.dim, n.dim
    if dm == 0 or dn == 0:
        return HomSpace(m, n, [])

    allowed = None
    if use_generators:
        lt_m, lt_n = m.left_types(), n.left_types()
        rt_m, rt_n = m.right_types(), n.right_types()
        use_l = lt_m is not None and lt_n is not None
        use_r = rt_m is not None and rt_n is not None
        if use_l or use_r:
            allowed = []
            for r in range(dn):
                for c in range(dm):
                    if use_l and lt_n[r] != lt_m[c]:
                        continue
                    if use_r and rt_n[r] != rt_m[c]:
                        continue
                    allowed.append((r, c))
        lgens = m.left_algebra.generators()
        rgens = m.right_algebra.generators()
        if use_l and m.left_algebra.vertex_idempotents is not None:
            idem = m.left_algebra.vertex_idempotents
            lgens = [g for g in lgens if g not in idem]
        if use_r and m.right_algebra.vertex_idempotents is not None:
            idem = m.right_algebra.vertex_idempotents
            rgens = [g for g in rgens if g not in idem]
        pairs = [(m.act_left(g), n.act_left(g)) for g in lgens]
        pairs += [(m.act_right(g), n.act_right(g)) for g in rgens]
    else:
        pairs = list(zip(m.left_action, n.left_action)) + list(zip(m.right_action, n.right_action))

    if allowed is None:
        allowed = [(r, c) for r in range(dn) for c in range(dm)]
    idx = {rc: k for k, rc in enumerate(allowed)}
    nunk = len(allowed)

    # Equation (r, c) of  F.Xm - Xn.F = 0  for each action pair (Xm, Xn).
    rows: List[Vec] = []
    for Xm, Xn in pairs:
        eqs: Dict[tuple, Vec] = {}
        xm_rows = Xm.data
        xn_cols: Dict[int, Vec] = {}
        for i, row in Xn.data.items():
            for j, x in row.items():
                xn_cols.setdefault(j, {})[i] = x
        for (r, k), u in idx.items():
            # F[r, k] * Xm[k, c] contributes to (r, c)
            for c, x in xm_rows.get(k, {}).items():
                eq = eqs.setdefault((r, c), {})
                t = eq.get(u, 0) + x
                if F.p:
                    t %= F.p
                if t:
                    eq[u] = t
                else:
                    eq.pop(u, None)
            # -Xn[r', r] * F[r, k] contributes to (r', k)
            for r2, x in xn_cols.get(r, {}).items():
                eq = eqs.setdefault((r2, k), {})
                t = eq.get(u, 0) - x
                if F.p:
                    t %= F.p
                if t:
                    eq[u] = t
                else:
                    eq.pop(u, None)
        rows.extend(e for e in eqs.values() if e)

    eb = echelon_of_rows(F, nunk, rows)
    basis = []
    for v in kernel_from_echelon(eb):
        data: Dict[int, Vec] = {}
        for u, x in v.items():
            r, c = allowed[u]
            data.setdefault(r, {})[c] = x
        basis.append(Mat(dn, dm, F, data))
    degrees = None
    gr = _grading(m, n, pairs) if use_generators else None
    if gr is not None:
        # the system is block diagonal by degree, so kernel vectors are homogeneous
        wm, wn = gr
        degrees = [_homogeneous_degree(f, wn, wm) for f in basis]
        assert all(d not in (None, "zero") for d in degrees)
    return HomSpace(m, n, basis, degrees, gr)


def end_algebra(m: Bimodule) -> Algebra:
    """End(m) with composition as product; basis = hom_space(m, m).basis."""
    H = hom_space(m, m)
    return structure_from_matrices(m.field, H.basis, labels=[f"f{k}" for k in range(H.dim)])


def bimodule_generators(m: Bimodule) -> List[Vec]:
    """A generating set of m as a bimodule, greedily from the standard basis."""
    F = m.field
    L = [m.act_left(x) for x in _spanning(m.left_algebra)]
    R = [m.act_right(y) for y in _spanning(m.right_algebra)]
    sub = EchelonBasis(F, m.dim)
    gens: List[Vec] = []
    for k in range(m.dim):
        v = {k: F.one}
        if sub.contains(v):
            continue
        gens.append(v)
        for r in R:
            w = r.apply(v)
            for l in L:
                sub.add(l.apply(w))
        if sub.rank == m.dim:
            break
    return gens


def _spanning(a: Algebra) -> List[Vec]:
    return [{k: a.field.one} for k in range(a.dim)]


_PRIMES = (MODULUS, 2 ** 61 - 31, 2 ** 60 - 93)


def _flat(F, rows: Sequence[Mat]) -> List[Vec]:
    """Row-major flattening of equally shaped matrices."""
    out = []
    for X in rows:
        v: Vec = {}
        for a, row in X.data.items():
            for b, x in row.items():
                v[a * X.ncols + b] = x
        out.append(v)
    return out


class _Composites:
    """psi(g o f) = g f V, flattened, for random or basis pairs of a block.

    A record (block, rg, rf) stands for g = sum rg[j] g_j, f = sum rf[i] f_i
    over the block's basis maps, so a row can be rebuilt exactly.
    """

    def __init__(self, F, blocks, gs, fs, V, P, coords):
        self.F, self.blocks, self.P, self.coords = F, blocks, P, coords
        self.dm, self.dn, self.s = V.nrows, gs[0].ncols, V.ncols
        self.G = [_flat(F, [gs[j] for j in gi]) for gi, _ in blocks]
        self.Fm = [_flat(F, [fs[i] for i in fi]) for _, fi in blocks]
        self.Vrows = [V.data.get(a, {}) for a in range(V.nrows)]
        self._mod = {}
        self._exact = {}

    def _mats(self, b, exact):
        cache = self._exact if exact else self._mod
        if b not in cache:
            dm, dn, F = self.dm, self.dn, self.F
            mk = (lambda rows, nc: exact_from_rows(F, rows, nc)) if exact else \
                (lambda rows, nc: nmod_from_rows(F, rows, nc, self.P))
            cache[b] = (mk(self.G[b], dm * dn), mk(self.Fm[b], dn * dm), mk(self.Vrows, self.s))
        return cache[b]

    def rows(self, recs, exact=False):
        """Flattened composites for records, as lists of flint scalars."""
        out = []
        by_block: Dict[int, List[int]] = {}
        for k, (b, _, _) in enumerate(recs):
            by_block.setdefault(b, []).append(k)
        res = [None] * len(recs)
        dm, dn = self.dm, self.dn
        for b, ks in by_block.items():
            G, Fb, V = self._mats(b, exact)
            conv = exact_from_rows if exact else (lambda F, r, n: nmod_from_rows(F, r, n, self.P))
            Rg = conv(self.F, [{j: x for j, x in enumerate(recs[k][1]) if x} for k in ks], G.nrows())
            Rf = conv(self.F, [{i: x for i, x in enumerate(recs[k][2]) if x} for k in ks], Fb.nrows())
            gk = (Rg * G).tolist()
            fk = (Rf * Fb).tolist()
            for t, k in enumerate(ks):
                g = type(V)(dm, dn, gk[t], *self._mod_arg(exact))
                f = type(V)(dn, dm, fk[t], *self._mod_arg(exact))
                ent = (g * (f * V)).entries()
                res[k] = [ent[c] for c in self.coords]
        out.extend(res)
        return out

    def _mod_arg(self, exact):
        if exact and not self.F.p:
            return ()
        return (self.P,)


def in_add(m: Bimodule, n: Bimodule, seed: int = 0) -> bool:
    """True iff m divides q.n for some q (exact).

    A bimodule map X of m is determined by its values on a bimodule
    generating tuple (v_1..v_s), so the test runs in m^s instead of
    End_K(m): psi(X) = X V is injective on End(m). With graded hom spaces
    only composites of total degree 0 are needed, since projecting T onto
    degree 0 fixes id_m.

    The span is explored modulo a large prime; the answer is then certified
    over the ground field: True by an exact solution of
    sum c_k psi(g_k f_k) = psi(id), False by an exact functional that kills
    psi(g_j f_i) for every pair of basis maps but not psi(id).
    """
    _check_pair(m, n)
    F = m.field
    if m.dim == 0:
        return True
    H1 = hom_space(m, n)
    if not H1.basis:
        return False
    H2 = hom_space(n, m)
    if not H2.basis:
        return False
    fs, gs = H1.basis, H2.basis
    # blocks of (g indices, f indices) whose composites may reach id_m
    if H1.degrees is not None and H2.degrees is not None:
        fdeg: Dict[tuple, List[int]] = {}
        gdeg: Dict[tuple, List[int]] = {}
        for i, d in enumerate(H1.degrees):
            fdeg.setdefault(d, []).append(i)
        for j, d in enumerate(H2.degrees):
            gdeg.setdefault(tuple(-x for x in d), []).append(j)
        blocks = [(gdeg[d], fdeg[d]) for d in sorted(fdeg) if d in gdeg]
        if not blocks:
            return False
    else:
        blocks = [(list(range(len(gs))), list(range(len(fs))))]

    vs = bimodule_generators(m)
    V = Mat.from_columns(vs, m.dim, F)
    # Composites commute with the vertex idempotents and, inside a degree
    # block, have degree 0; the generators are basis vectors, so X v_i can
    # only be supported on basis vectors of the class of v_i.
    lt, rt = m.left_types(), m.right_types()
    wts = H1.grading[0] if H1.degrees is not None and H2.degrees is not None else None

    def cls(a):
        return (lt[a] if lt else None, rt[a] if rt else None, wts[a] if wts else None)

    gen_idx = [next(iter(v)) for v in vs]
    s = len(vs)
    coords = [a * s + i for a in range(m.dim) for i in range(s) if cls(a) == cls(gen_idx[i])]
    for P in ([F.p] if F.p else _PRIMES):
        out = _in_add_mod(F, blocks, gs, fs, V, P, seed, coords)
        if out is not None:
            return out
    raise ArithmeticError("in_add: no certificate found")  # pragma: no cover


def _in_add_mod(F, blocks, gs, fs, V, P, seed, coords):
    rng = random.Random(seed)
    comp = _Composites(F, blocks, gs, fs, V, P, coords)
    dm, s = V.nrows, V.ncols
    N = len(coords)
    pos = {c: k for k, c in enumerate(coords)}
    target = [0] * N
    for a, row in V.data.items():
        for i, x in row.items():
            target[pos[a * s + i]] = x

    pool = range(P) if F.p else range(-3, 4)

    def rand_coeffs(k):
        return rng.choices(pool, k=k)

    recs: List[tuple] = []
    rows: List[list] = []

    def add(new_recs):
        recs.extend(new_recs)
        rows.extend(comp.rows(new_recs))

    def mod_matrix(rs):
        return flint.nmod_mat(len(rs), N, [x for r in rs for x in r], P)

    # grow the span with random composites until a batch is dependent
    rank, batch, k = 0, 8, 0
    while True:
        new = []
        for _ in range(batch):
            b = k % len(blocks)
            k += 1
            gi, fi = blocks[b]
            new.append((b, rand_coeffs(len(gi)), rand_coeffs(len(fi))))
        add(new)
        r = mod_matrix(rows).rank()
        grew = r - rank
        rank = r
        if grew < batch or rank == N:
            break
        batch = max(batch, rank // 4)

    t_mod = flint.nmod_mat(1, N, [residue(F, x, P) for x in target], P)
    t_ex = exact_from_rows(F, [{j: x for j, x in enumerate(target) if x}], N)
    while True:
        M = mod_matrix(rows)
        RT, r = M.transpose().rref()
        sel = dense_pivots(RT)
        Rsel, _ = mod_matrix([rows[k] for k in sel] + [list(t_mod.entries())]).rref()
        piv = dense_pivots(Rsel)
        # the target row adds one pivot, at the leading column of its
        # residual, exactly when it is outside the span
        if len(piv) > len(sel):
            Rsel2, _ = mod_matrix([rows[k] for k in sel]).rref()
            pc = dense_pivots(Rsel2)
            nz = sorted(set(piv) - set(pc))
        else:
            pc, nz = piv, []

        Ex = comp.rows([recs[k] for k in sel], exact=True)   # r rows of length N
        A = _dense(F, P, [[row[q] for q in pc] for row in Ex])   # r x r, rows = composites
        if not nz:
            try:
                c = A.transpose().solve(_dense(F, P, [[t_ex[0, q]] for q in pc]), **_dixon(F))
            except ZeroDivisionError:
                return None
            Et = _dense(F, P, [list(col) for col in zip(*Ex)])   # N x r
            if Et * c == t_ex.transpose():
                return True
            return None
        c0 = nz[0]
        try:
            x = A.solve(_dense(F, P, [[-row[c0]] for row in Ex]), **_dixon(F))
        except ZeroDivisionError:
            return None
        lam = [0] * N
        lam[c0] = 1
        for q_i, q in enumerate(pc):
            lam[q] = x[q_i, 0]
        if sum((lam[j] * t_ex[0, j] for j in range(N) if lam[j] != 0), 0) == 0:
            return None
        full = [0] * (dm * s)
        for k, c in enumerate(coords):
            full[c] = lam[k]
        bad = _exact_violations(F, P, comp, blocks, gs, fs, V, full, limit=64)
        if not bad:
            return False
        add(bad)


def _dixon(F):
    return {} if F.p else {"algorithm": "dixon"}


def _dense(F, P, table):
    nr = len(table)
    nc = len(table[0]) if table else 0
    flat = [x for row in table for x in row]
    if F.p:
        return flint.nmod_mat(nr, nc, [int(x) for x in flat], P)
    return flint.fmpq_mat(nr, nc, flat)


def _exact_violations(F, P, comp, blocks, gs, fs, V, lam, limit):
    """Basis pairs (as records) on which the functional lam o psi is nonzero."""
    dm, s = V.nrows, V.ncols
    dn = gs[0].ncols
    Lm = _dense(F, P, [[lam[a * s + i] for i in range(s)] for a in range(dm)])
    Vt = exact_from_rows(F, [V.data.get(a, {}) for a in range(dm)], s).transpose()
    Lam = Lm * Vt   # dm x dm: lam(psi(X)) = sum Lam[a, b] X[a, b]
    out = []
    for b, (gi, fi) in enumerate(blocks):
        G, Fb, _ = comp._mats(b, exact=True)
        cols = []
        fl = Fb.tolist()
        for row in fl:
            ft = _dense(F, P, [[row[x * dm + c] for x in range(dn)] for c in range(dm)])   # f^T
            cols.append((Lam * ft).entries())   # row-major a * dn + x
        W = _dense(F, P, [list(r) for r in zip(*cols)])
        vals = (G * W).tolist()
        for j, vrow in enumerate(vals):
            for i, v in enumerate(vrow):
                if v != 0:
                    gv = [0] * len(gi)
                    fv = [0] * len(fi)
                    gv[j] = 1
                    fv[i] = 1
                    out.append((b, gv, fv))
                    if len(out) >= limit:
                        return out
    return out


def h_equivalent(m: Bimodule, n: Bimodule) -> bool:
    return in_add(m, n) and in_add(n, m)
