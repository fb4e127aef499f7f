"""Reproduction suite: each item recomputes one published value or law.

Items are grouped by topic:

* ``props``: algebra invariants and randomized property checks,
* ``sec3``: direct products, triangular corners, quotients,
* ``sec4``: top subalgebras and tensor-square corner counts,
* ``sec5``: arrow subalgebras, the tensor-square decomposition, indecomposability,
* ``sec6``: the T_n tables and the Jordan cases.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .algebra import (
    Algebra, direct_product_embedding, dickson_radical, graded_radical, identity_embedding,
    ideal_power, is_local, path_algebra,
)
from .bimodule import (
    Bimodule, TensorChain, conjugate, corner, direct_sum, multiple, regular_bimodule,
)
from .depth import DepthConfig, DepthEngine, DepthInvariantError, LowerBound, quotient_depth_check
from .exactlin import QQ, FieldSpec, Mat, echelon_of_rows
from .families import (
    arrow_subalgebra, augmentations, diagonal_subalgebra, jordan_subalgebra, pullback,
    simple_bimodule, t_n, top_subalgebra,
)
from .homdiv import end_algebra, h_equivalent, in_add
from .quiver import Quiver, branched_tree_quiver, kronecker_quiver, linear_quiver, path_counts

SECTIONS = ("props", "sec3", "sec4", "sec5", "sec6")


@dataclass
class Item:
    key: str
    section: str
    title: str
    run: Callable[[], Tuple[bool, str]]
    # wall-clock budget in seconds, None for no limit
    limit: Optional[float] = None


@dataclass
class Outcome:
    key: str
    section: str
    title: str
    passed: Optional[bool]      # None: skipped
    detail: str
    seconds: float

    def line(self) -> str:
        tag = "SKIP" if self.passed is None else ("PASS" if self.passed else "FAIL")
        return f"{tag} {self.key} [{self.section}] {self.title}: {self.detail} ({self.seconds:.1f}s)"


def _timed_depth(e, cutoff=6, **kw):
    t = time.perf_counter()
    r = DepthEngine(e, DepthConfig(cutoff=cutoff, **kw)).report(with_h_depth=False)
    return r, time.perf_counter() - t


def suite_quivers() -> Dict[str, Quiver]:
    return {
        "T2": linear_quiver(2), "T3": linear_quiver(3), "T4": linear_quiver(4),
        "kronecker": kronecker_quiver(), "tree": branched_tree_quiver(),
    }


# --- A0: algebra invariants ------------------------------------------------

def algebra_invariants() -> Tuple[bool, str]:
    """Associativity, unit and idempotent checks on every algebra used below."""
    algs = [path_algebra(q) for q in suite_quivers().values()]
    algs += [t_n(5), jordan_subalgebra(3).sub]
    for a in algs:
        try:
            a.verify()
        except Exception as exc:  # any structural failure counts
            return False, f"{a.dim}-dim algebra: {exc}"
    return True, f"{len(algs)} algebras verified"


# --- section 4 -------------------------------------------------------------

def c1_top_depth() -> Tuple[bool, str]:
    parts, ok = [], True
    for name, q in suite_quivers().items():
        r, dt = _timed_depth(top_subalgebra(path_algebra(q)))
        good = r.min_depth == 3 and dt < 10
        ok &= good
        parts.append(f"{name}={r.min_depth}")
    return ok, " ".join(parts)


def c6_tensor_square_corners() -> Tuple[bool, str]:
    ok, parts = True, []
    for name, q in suite_quivers().items():
        a = path_algebra(q)
        c2 = TensorChain(top_subalgebra(a)).c(2)
        npaths = path_counts(q)
        V = list(q.vertices)
        bad = 0
        for i in V:
            for j in V:
                m_ij = sum(npaths.get((i, k), 0) * npaths.get((k, j), 0) for k in V)
                d = corner(c2, a.vertex_idempotents[i - 1], a.vertex_idempotents[j - 1]).dim
                bad += d != m_ij
        ok &= bad == 0
        parts.append(f"{name}:{bad} mismatches")
    return ok, ", ".join(parts)


# --- section 5 -------------------------------------------------------------

def c2_arrow_depth() -> Tuple[bool, str]:
    ok, parts = True, []
    for name in ("T2", "T3", "kronecker"):
        q = suite_quivers()[name]
        t = time.perf_counter()
        eng = DepthEngine(arrow_subalgebra(path_algebra(q)))
        d = eng.min_depth()
        bb1 = eng.flag(1, "BB")
        ab2, ba2 = eng.flag(2, "AB"), eng.flag(2, "BA")
        dt = time.perf_counter() - t
        good = d == 4 and not bb1 and ab2 and ba2 and dt < 60
        ok &= good
        parts.append(f"{name}: d={d} BB1={bb1} AB2={ab2} BA2={ba2}")
    return ok, "; ".join(parts)


def c5_tensor_square_decomposition() -> Tuple[bool, str]:
    ok, parts = True, []
    for n in (2, 3):
        a = t_n(n)
        e = arrow_subalgebra(a)
        ch = TensorChain(e)
        c2 = ch.level(2, "BB")
        dim_ok = c2.dim == a.dim + n * (n - 1)
        eps = pullback(augmentations(a)[0], e)
        k_eps = simple_bimodule(e.sub, eps, eps)
        rhs = direct_sum([ch.level(1, "BB")] + [k_eps] * (n * (n - 1)))
        heq = h_equivalent(c2, rhs)
        ok &= dim_ok and heq
        parts.append(f"T{n}: dim {c2.dim}, h-equivalent={heq}")
    return ok, "; ".join(parts)


def c10_indecomposable() -> Tuple[bool, str]:
    ok, parts = True, []
    for n in (2, 3, 4):
        a = t_n(n)
        arr = is_local(end_algebra(TensorChain(arrow_subalgebra(a)).level(1, "BB")))
        dia = is_local(end_algebra(TensorChain(diagonal_subalgebra(a)).level(1, "BB")))
        ok &= arr and not dia
        parts.append(f"T{n}: arrow local={arr}, diagonal local={dia}")
    return ok, "; ".join(parts)


# --- section 6 -------------------------------------------------------------

def c3_table() -> Tuple[bool, str]:
    t = time.perf_counter()
    diag = {n: _timed_depth(diagonal_subalgebra(t_n(n)))[0].min_depth for n in (2, 3, 4, 5)}
    arr = {n: _timed_depth(arrow_subalgebra(t_n(n)))[0].min_depth for n in (2, 3, 4)}
    dt = time.perf_counter() - t
    ok = set(diag.values()) == {3} and set(arr.values()) == {4} and dt < 300
    return ok, f"diagonal {diag}, arrow {arr}"


def c4_jordan() -> Tuple[bool, str]:
    r2, _ = _timed_depth(jordan_subalgebra(2))
    r3, _ = _timed_depth(jordan_subalgebra(3), cutoff=5)
    ch = TensorChain(jordan_subalgebra(3))
    cube = in_add(ch.level(3, "BB"), ch.level(2, "BB"))
    ok = r2.min_depth == 4 and r3.min_depth == LowerBound(6) and cube is False
    return ok, (f"J2={r2.min_depth} (want 4); J3 cutoff 5 -> {r3.min_depth} (want >= 6); "
                f"C3 in add(C2) as B-B: {cube} (want False)")


# --- section 3 -------------------------------------------------------------

def c7_direct_product() -> Tuple[bool, str]:
    e = direct_product_embedding(top_subalgebra(t_n(2)), arrow_subalgebra(t_n(3)))
    r, dt = _timed_depth(e)
    return r.min_depth == 4 and dt < 300, f"d = {r.min_depth} (want max(3, 4) = 4)"


def kronecker_triangular() -> Algebra:
    from .algebra import triangular_ring
    k = t_n(1)
    return triangular_ring(k, k, multiple(regular_bimodule(k), 2))


def c8_triangular_corners() -> Tuple[bool, str]:
    k = t_n(1)
    m_dim = 2
    a = kronecker_triangular()
    ch = TensorChain(diagonal_subalgebra(a))
    kk = TensorChain(identity_embedding(k))
    e1, e2 = a.block_idempotents
    ok, parts = True, []
    for n in (1, 2, 3):
        cn = ch.c(n)
        got = (corner(cn, e1, e1).dim, corner(cn, e1, e2).dim, corner(cn, e2, e2).dim, corner(cn, e2, e1).dim)
        # R = R' = S = S' = K, so the tensor factors over R', S' just multiply dimensions
        want21 = sum(kk.dim(r) * m_dim * kk.dim(n - 1 - r) for r in range(n))
        want = (kk.dim(n), 0, kk.dim(n), want21)
        ok &= got == want
        parts.append(f"n={n}: {got}")
    return ok, "; ".join(parts)


def c9_quotients() -> Tuple[bool, str]:
    ok, parts = True, []
    for n, k in ((3, 2), (4, 3)):
        a = t_n(n)
        e = arrow_subalgebra(a)
        qc = quotient_depth_check(e, ideal_power(graded_radical(a), k), cutoff=6)
        ok &= qc.monotone is True
        parts.append(f"T{n}/rad^{k}: {qc.d_quotient} <= {qc.d_original}")
    return ok, "; ".join(parts)


# --- section: properties ---------------------------------------------------

def bimodule_pool(field: FieldSpec = QQ) -> List[Bimodule]:
    """Pairwise non-isomorphic indecomposable T_2-bimodules."""
    a = t_n(2, field)
    return [regular_bimodule(a)] + [simple_bimodule(a, i, j) for i in (1, 2) for j in (1, 2)]


def random_change_of_basis(n: int, field: FieldSpec, rng: random.Random) -> Mat:
    """Product of random unit triangular matrices with a permutation."""
    F = field
    L = Mat.identity(n, F)
    U = Mat.identity(n, F)
    for i in range(n):
        for j in range(i):
            L.data.setdefault(i, {})[j] = F(rng.randint(-2, 2)) if rng.random() < 0.5 else F.zero
            U.data.setdefault(j, {})[i] = F(rng.randint(-2, 2)) if rng.random() < 0.5 else F.zero
    for M in (L, U):
        for i in list(M.data):
            M.data[i] = {j: x for j, x in M.data[i].items() if x}
    perm = list(range(n))
    rng.shuffle(perm)
    Pm = Mat.from_rows([{perm[i]: F.one} for i in range(n)], n, F)
    return Pm @ L @ U


def random_bimodule(pool: Sequence[Bimodule], counts: Sequence[int], rng: random.Random) -> Bimodule:
    parts = [m for m, c in zip(pool, counts) for _ in range(c)]
    rng.shuffle(parts)
    s = direct_sum(parts)
    return conjugate(s, random_change_of_basis(s.dim, s.field, rng))


def add_oracle(cx: Sequence[int], cy: Sequence[int]) -> bool:
    """Krull-Schmidt answer for sums of pairwise distinct indecomposables."""
    return all(b > 0 for a, b in zip(cx, cy) if a > 0)


def in_add_properties(count: int = 50, seed: int = 1) -> Tuple[int, int]:
    """(checks, failures) for reflexivity, transitivity, additivity and the
    Krull-Schmidt oracle on ``count`` random bimodules."""
    rng = random.Random(seed)
    pool = bimodule_pool()
    specs = []
    while len(specs) < count:
        c = [rng.choice((0, 0, 1, 2)) for _ in pool]
        if any(c):
            specs.append(c)
    mods = [random_bimodule(pool, c, rng) for c in specs]
    checks = fails = 0

    def check(cond):
        nonlocal checks, fails
        checks += 1
        fails += not cond

    for k, x in enumerate(mods):
        check(in_add(x, x))
        y, z = mods[(k + 1) % count], mods[(k + 2) % count]
        cx, cy, cz = specs[k], specs[(k + 1) % count], specs[(k + 2) % count]
        xy, yz, xz = in_add(x, y), in_add(y, z), in_add(x, z)
        check(xy == add_oracle(cx, cy))
        check(xz == add_oracle(cx, cz))
        if xy and yz:
            check(xz)
        if xz and in_add(y, z):
            check(in_add(direct_sum([x, y]), z))
    return checks, fails


def family_pairs():
    qs = suite_quivers()
    out = []
    for name in ("T2", "T3", "kronecker", "tree"):
        a = path_algebra(qs[name])
        out += [(f"{name}/top", top_subalgebra(a)), (f"{name}/arrow", arrow_subalgebra(a))]
    out += [("T2/diagonal", diagonal_subalgebra(t_n(2))), ("J2", jordan_subalgebra(2)),
            ("J3", jordan_subalgebra(3))]
    return out


def engine_properties() -> Tuple[int, List[str]]:
    """Evaluate every n = 1 flag (with the obstruction cross-checked) and
    the n = 2 flags; the engine raises on any invariant violation."""
    errors, runs = [], 0
    for name, e in family_pairs():
        eng = DepthEngine(e, DepthConfig(cross_check=True))
        try:
            for kind in ("BB", "AB", "BA"):
                eng.flag(1, kind)
            if e.ambient.dim <= 6:
                for kind in ("BB", "AB", "BA"):
                    eng.flag(2, kind)
            ob = eng.obstruction()
            if ob is not None:
                if not ob.right_ok and eng.flag(1, "AB"):
                    errors.append(f"{name}: right obstruction vs AB(1)")
                if not ob.left_ok and eng.flag(1, "BA"):
                    errors.append(f"{name}: left obstruction vs BA(1)")
            eng.report(with_h_depth=False)
            runs += 1
        except DepthInvariantError as exc:
            errors.append(f"{name}: {exc}")
    return runs, errors


def small_path_algebras(max_dim: int = 15, seed: int = 3) -> List[Algebra]:
    qs = [linear_quiver(n) for n in range(1, 6)] + [kronecker_quiver(), branched_tree_quiver()]
    rng = random.Random(seed)
    while len(qs) < 20:
        n = rng.randint(2, 5)
        edges = []
        for k in range(rng.randint(1, 5)):
            s, t = rng.sample(range(1, n + 1), 2)
            if s < t:
                s, t = t, s
            edges.append((f"x{k}", s, t))
        qs.append(Quiver.from_edges(n, edges))
    out = []
    for q in qs:
        a = path_algebra(q)
        if a.dim <= max_dim:
            out.append(a)
    return out


def radical_agreement() -> Tuple[int, int]:
    algs = small_path_algebras()
    bad = 0
    for a in algs:
        g = echelon_of_rows(a.field, a.dim, graded_radical(a).basis)
        d = echelon_of_rows(a.field, a.dim, dickson_radical(a).basis)
        bad += g.rank != d.rank or not all(g.contains(v) for v in d.basis())
    return len(algs), bad


def c11_properties() -> Tuple[bool, str]:
    checks, fails = in_add_properties()
    runs, errors = engine_properties()
    nalg, bad = radical_agreement()
    ok = fails == 0 and not errors and bad == 0
    return ok, (f"in_add {checks - fails}/{checks}; engine runs {runs} with "
                f"{len(errors)} violations; radicals {nalg - bad}/{nalg}")


# --- driver ----------------------------------------------------------------

def items() -> List[Item]:
    return [
        Item("A0", "props", "algebra invariants", algebra_invariants),
        Item("C1", "sec4", "top subalgebra depth 3", c1_top_depth),
        Item("C2", "sec5", "arrow subalgebra depth 4", c2_arrow_depth),
        Item("C3", "sec6", "diagonal 3 and arrow 4 for T_n", c3_table, 300),
        Item("C4", "sec6", "Jordan subalgebras", c4_jordan, 600),
        Item("C5", "sec5", "tensor square of the arrow subalgebra", c5_tensor_square_decomposition),
        Item("C6", "sec4", "tensor-square corner counts", c6_tensor_square_corners),
        Item("C7", "sec3", "depth of a direct product", c7_direct_product, 300),
        Item("C8", "sec3", "triangular corners of C_n", c8_triangular_corners),
        Item("C9", "sec3", "quotient monotonicity", c9_quotients, 600),
        Item("C10", "sec5", "A indecomposable over the arrow subalgebra", c10_indecomposable),
        Item("C11", "props", "property suites", c11_properties),
    ]


def select(only: Optional[Iterable[str]] = None) -> List[Item]:
    its = items()
    if not only:
        return its
    wanted = set(only)
    unknown = wanted - set(SECTIONS) - {i.key for i in its}
    if unknown:
        raise ValueError(f"unknown section or item: {', '.join(sorted(unknown))}")
    return [i for i in its if i.section in wanted or i.key in wanted]


def run(only: Optional[Iterable[str]] = None, echo: Optional[Callable[[str], None]] = None) -> List[Outcome]:
    """Run the selected items in order; a failed A0 skips the rest."""
    out: List[Outcome] = []
    blocked = False
    for it in select(only):
        if blocked:
            res = Outcome(it.key, it.section, it.title, None, "skipped: algebra invariants failed", 0.0)
        else:
            t = time.perf_counter()
            try:
                ok, detail = it.run()
            except Exception as exc:  # report, keep going
                ok, detail = False, f"error: {type(exc).__name__}: {exc}"
            dt = time.perf_counter() - t
            if it.limit is not None and dt > it.limit:
                ok, detail = False, f"{detail}; over the {it.limit:.0f}s budget"
            res = Outcome(it.key, it.section, it.title, ok, detail, dt)
            blocked = it.key == "A0" and not ok
        out.append(res)
        if echo:
            echo(res.line())
    return out
