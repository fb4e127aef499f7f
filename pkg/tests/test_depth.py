import json

import pytest

from quiverdepth.algebra import (
    AlgebraError, Ideal, direct_product_embedding, graded_radical, identity_embedding, ideal_power,
    path_algebra, subalgebra_closure, triangular_ring,
)
from quiverdepth.bimodule import Bimodule, multiple, regular_bimodule
from quiverdepth.depth import (
    DepthConfig, DepthEngine, DepthInvariantError, DepthReport, LowerBound, depth2_obstruction,
    depth_flags, h_depth, min_depth, odd_depth, quotient_chain, quotient_depth_check,
)
from quiverdepth.exactlin import Mat
from quiverdepth.families import (
    arrow_subalgebra, augmentations, diagonal_subalgebra, jordan_subalgebra, t_n, top_subalgebra,
)
from quiverdepth.quiver import Quiver, branched_tree_quiver, kronecker_quiver, linear_quiver


def report_with(d):
    return DepthReport(6, "q", False, False, [], d)


# --- flags -----------------------------------------------------------------

def test_trivial_extension_flags():
    e = identity_embedding(t_n(2))
    assert depth_flags(e, 1) == {"AA": True, "AB": True, "BA": True, "BB": True}


def test_diagonal_t2_flags():
    f = depth_flags(top_subalgebra(t_n(2)), 1)
    assert f["BB"] and not f["AB"] and not f["BA"]


def test_arrow_t2_bb_fails_at_one():
    assert not depth_flags(arrow_subalgebra(t_n(2)), 1)["BB"]


def test_flags_need_positive_level():
    with pytest.raises(ValueError):
        DepthEngine(top_subalgebra(t_n(2))).flag(0, "BB")


def test_flags_monotone_and_restriction_implications():
    for e in (top_subalgebra(t_n(2)), arrow_subalgebra(t_n(2)), jordan_subalgebra(2)):
        eng = DepthEngine(e, DepthConfig(use_obstruction=False))
        table = {n: {k: eng.flag(n, k) for k in ("AA", "AB", "BA", "BB")} for n in (1, 2, 3)}
        for k in ("AA", "AB", "BA", "BB"):
            vals = [table[n][k] for n in (1, 2, 3)]
            assert vals == sorted(vals)
        for row in table.values():
            assert not (row["AB"] or row["BA"]) or row["BB"]
            assert not row["AA"] or (row["AB"] and row["BA"])


def test_invariant_violation_is_raised():
    eng = DepthEngine(top_subalgebra(t_n(2)))
    lf = eng.level_flags(1)
    lf.values.update(AB=True, BB=False)
    with pytest.raises(DepthInvariantError):
        eng._check(1)
    eng2 = DepthEngine(top_subalgebra(t_n(2)))
    eng2.level_flags(1).values["BB"] = True
    eng2.level_flags(2).values["BB"] = False
    with pytest.raises(DepthInvariantError):
        eng2._check(2)


# --- depths ----------------------------------------------------------------

def test_min_depth_trivial():
    r = min_depth(identity_embedding(t_n(3)))
    assert r.min_depth == 1 and r.depth1


@pytest.mark.parametrize("n", [2, 3])
def test_min_depth_arrow(n):
    assert min_depth(arrow_subalgebra(t_n(n))).min_depth == 4


@pytest.mark.parametrize("n", [2, 3, 4])
def test_min_depth_diagonal(n):
    assert min_depth(diagonal_subalgebra(t_n(n))).min_depth == 3


@pytest.mark.parametrize("q", [kronecker_quiver(), branched_tree_quiver()])
def test_min_depth_top_other_quivers(q):
    assert min_depth(top_subalgebra(path_algebra(q))).min_depth == 3


def test_jordan_two():
    assert min_depth(jordan_subalgebra(2)).min_depth == 4


def test_jordan_three_has_depth_five():
    # C3 lies in add(C2) as J3-bimodules; the exact certificate in in_add
    # settles it, so the cutoff-5 run resolves instead of bounding
    r = min_depth(jordan_subalgebra(3), cutoff=5)
    assert r.min_depth == 5
    assert r.flag(2, "BB") is True and r.flag(2, "AB") is False and r.flag(2, "BA") is False


def test_cutoff_gives_lower_bounds():
    e = arrow_subalgebra(t_n(2))
    assert min_depth(e, cutoff=3).min_depth == LowerBound(4)
    assert min_depth(e, cutoff=2).min_depth == LowerBound(3)
    assert min_depth(e, cutoff=4).min_depth == 4


def test_odd_depth_rule():
    assert odd_depth(report_with(3)) == 3
    assert odd_depth(report_with(4)) == 5
    assert odd_depth(report_with(1)) == 1
    assert odd_depth(report_with(LowerBound(7))) is None


def test_h_depth_trivial():
    assert h_depth(identity_embedding(t_n(2))) == 1


def test_h_depth_diagonal_t2_is_five():
    # As A-bimodules C_n is a sum of projectives Ae_i (x) e_j A over the pairs
    # (i, j) joined by a chain of n - 1 nonzero corners e_i A e_j: C2 has
    # (1,1), (2,2); C3 adds (2,1); C4 adds nothing. So AA(2) fails, AA(3) holds.
    e = top_subalgebra(t_n(2))
    eng = DepthEngine(e)
    assert [eng.flag(n, "AA") for n in (1, 2, 3)] == [False, False, True]
    assert eng.h_depth() == 5


def test_h_depth_arrow_t2():
    e = arrow_subalgebra(t_n(2))
    assert h_depth(e, cutoff=4) == LowerBound(5)
    assert h_depth(e, cutoff=6) == 5


def test_h_depth_bounds_min_depth():
    for e in (top_subalgebra(t_n(2)), arrow_subalgebra(t_n(2))):
        r = DepthEngine(e).report()
        assert r.min_depth <= r.h_depth + 1


# --- obstruction -----------------------------------------------------------

def test_obstruction_trivial():
    ob = depth2_obstruction(identity_embedding(t_n(3)))
    assert ob.left_ok and ob.right_ok and not ob.witnesses


@pytest.mark.parametrize("q", [linear_quiver(2), linear_quiver(3), kronecker_quiver(), branched_tree_quiver()])
def test_obstruction_fails_for_top_of_connected(q):
    ob = depth2_obstruction(top_subalgebra(path_algebra(q)))
    assert not ob.left_ok and not ob.right_ok
    assert {side for _, side, _ in ob.witnesses} == {"left", "right"}


def test_obstruction_holds_for_disconnected_top():
    ob = depth2_obstruction(top_subalgebra(path_algebra(Quiver(2))))
    assert ob.left_ok and ob.right_ok


@pytest.mark.parametrize("make", [
    lambda: top_subalgebra(t_n(2)), lambda: top_subalgebra(path_algebra(kronecker_quiver())),
    lambda: arrow_subalgebra(t_n(3)), lambda: jordan_subalgebra(3),
])
def test_obstruction_agrees_with_tensor_flags(make):
    eng = DepthEngine(make(), DepthConfig(cross_check=True))
    ob = eng.obstruction()
    ab, ba = eng.flag(1, "AB"), eng.flag(1, "BA")
    assert ob.right_ok or not ab
    assert ob.left_ok or not ba


def test_obstruction_marks_derived_flags():
    eng = DepthEngine(top_subalgebra(t_n(3)))
    assert eng.flag(1, "AB") is False
    assert eng.level_flags(1).derived["AB"] == "obstruction"


# --- products, triangular rings, quotients ---------------------------------

def test_direct_product_is_max():
    e = direct_product_embedding(top_subalgebra(t_n(2)), arrow_subalgebra(t_n(3)))
    assert min_depth(e).min_depth == 4
    e = direct_product_embedding(top_subalgebra(t_n(2)), top_subalgebra(t_n(3)))
    assert min_depth(e).min_depth == 3
    e = direct_product_embedding(identity_embedding(t_n(2)), jordan_subalgebra(2))
    assert min_depth(e).min_depth == 4


def _k_t2_bimodule(i):
    """K as a (K, T2)-bimodule, T2 acting on the right through rho_i."""
    k, r = t_n(1), t_n(2)
    rho = augmentations(r)[i - 1]
    right = [Mat(1, 1, r.field, {0: {0: rho.functional[j]}} if rho.functional.get(j) else {})
             for j in range(r.dim)]
    return Bimodule(k, r, 1, [Mat.identity(1)], right)


def _block_embedding(a, er, es):
    n1 = er.ambient.dim
    gens = er.image_basis() + [{k + n1: x for k, x in v.items()} for v in es.image_basis()]
    return subalgebra_closure(a, gens)


@pytest.mark.parametrize("i", [1, 2])
def test_triangular_bound(i):
    k, r = t_n(1), t_n(2)
    m = _k_t2_bimodule(i)
    m.verify()
    a = triangular_ring(r, k, m)
    a.verify()
    # R' = R, S' = S: bound d_odd(R,R) + d_odd(S,S) + 1 = 3
    d = min_depth(diagonal_subalgebra(a)).min_depth
    assert d <= odd_depth(report_with(d)) <= 3
    # R' = D2: bound d_odd(D2, T2) + 1 + 1 = 5
    e = _block_embedding(a, top_subalgebra(r), identity_embedding(k))
    d = min_depth(e).min_depth
    assert d <= odd_depth(report_with(d)) <= 5


def test_triangular_kronecker_bound_is_sharp():
    a = triangular_ring(t_n(1), t_n(1), multiple(regular_bimodule(t_n(1)), 2))
    assert min_depth(diagonal_subalgebra(a)).min_depth == 3


def test_quotient_by_zero_ideal():
    e = arrow_subalgebra(t_n(3))
    qc = quotient_depth_check(e, Ideal(e.ambient, []))
    assert qc.d_original == qc.d_quotient == 4 and qc.monotone


def test_quotient_t3_rad_squared():
    a = t_n(3)
    qc = quotient_depth_check(arrow_subalgebra(a), ideal_power(graded_radical(a), 2))
    assert qc.monotone is True and qc.d_quotient <= qc.d_original


def test_quotient_chain_non_decreasing():
    a = t_n(3)
    rad = graded_radical(a)
    ds = quotient_chain(arrow_subalgebra(a), [ideal_power(rad, 2), ideal_power(rad, 3)])
    assert ds == sorted(ds)
    assert ideal_power(rad, 3).dim == 0


def test_quotient_rejects_bad_ideals():
    a = t_n(3)
    with pytest.raises(AlgebraError):
        quotient_depth_check(top_subalgebra(a), ideal_power(graded_radical(a), 2))
    with pytest.raises(AlgebraError):
        quotient_depth_check(identity_embedding(a), Ideal(a, [a.vertex_idempotents[0]]))


# --- report ----------------------------------------------------------------

def test_report_json_shape_and_determinism():
    e = arrow_subalgebra(t_n(2))
    s1 = DepthEngine(e, DepthConfig(cutoff=3)).report(with_h_depth=False).dumps()
    s2 = DepthEngine(arrow_subalgebra(t_n(2)), DepthConfig(cutoff=3)).report(with_h_depth=False).dumps()
    assert s1 == s2
    d = json.loads(s1)
    assert list(d) == ["min_depth", "odd_depth", "h_depth", "depth1", "depth1_reverse",
                       "flags", "cutoff", "field"]
    assert d["min_depth"] == {"at_least": 4} and d["odd_depth"] is None
    assert d["flags"][0] == {"n": 1, "AA": None, "AB": False, "BA": False, "BB": False}


def test_config_validates_cutoff():
    with pytest.raises(ValueError):
        DepthConfig(cutoff=0)
