import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quiverdepth.algebra import is_local
from quiverdepth.bimodule import TensorChain, direct_sum, multiple, regular_bimodule, restrict
from quiverdepth.exactlin import FieldSpec, echelon_of_rows
from quiverdepth.families import (
    arrow_subalgebra, augmentations, pullback, simple_bimodule, t_n, top_subalgebra,
)
from quiverdepth.homdiv import HomError, end_algebra, h_equivalent, hom_space, in_add
from quiverdepth.paper_suite import add_oracle, bimodule_pool, random_bimodule


def sub_simple(e, i, j):
    rhos = augmentations(e.ambient)
    return simple_bimodule(e.sub, pullback(rhos[i - 1], e), pullback(rhos[j - 1], e))


def same_hom_span(h1, h2):
    F = h1.source.field
    n = h1.source.dim * h1.target.dim
    a = echelon_of_rows(F, n, [f.vectorize() for f in h1.basis])
    b = echelon_of_rows(F, n, [f.vectorize() for f in h2.basis])
    return a.rank == b.rank and all(a.contains(v) for v in b.basis())


# --- hom spaces ------------------------------------------------------------

def test_hom_of_simple_is_scalars():
    e = arrow_subalgebra(t_n(3))
    k = sub_simple(e, 1, 1)
    assert hom_space(k, k).dim == 1


def test_hom_between_distinct_simples_vanishes():
    e = top_subalgebra(t_n(2))
    assert hom_space(sub_simple(e, 1, 2), sub_simple(e, 2, 1)).dim == 0


def test_hom_mismatched_pair():
    with pytest.raises(HomError):
        hom_space(regular_bimodule(t_n(2)), regular_bimodule(t_n(3)))


def test_hom_basis_intertwines():
    ch = TensorChain(arrow_subalgebra(t_n(3)))
    h = hom_space(ch.level(2, "BB"), ch.level(1, "BB"))
    assert h.dim > 0
    assert all(h.is_intertwiner(f) for f in h.basis)


@pytest.mark.parametrize("kind", ["AA", "AB", "BB"])
def test_generators_and_full_basis_agree(kind):
    ch = TensorChain(arrow_subalgebra(t_n(3)))
    m, n = ch.level(2, kind), ch.level(1, kind)
    assert same_hom_span(hom_space(m, n), hom_space(m, n, use_generators=False))


def test_end_of_one_dimensional_is_field():
    k = regular_bimodule(t_n(1))
    assert end_algebra(k).dim == 1


@pytest.mark.parametrize("n", [2, 3, 4])
def test_end_of_a_over_arrow_subalgebra_is_local(n):
    m = TensorChain(arrow_subalgebra(t_n(n))).level(1, "BB")
    E = end_algebra(m)
    E.verify()
    assert is_local(E)


def test_end_of_a_over_diagonal_is_not_local():
    m = TensorChain(top_subalgebra(t_n(2))).level(1, "BB")
    E = end_algebra(m)
    # A = K11 + K22 + K21 as D2-bimodules: three pairwise distinct simples
    assert E.dim == 3 and not is_local(E)


# --- add membership --------------------------------------------------------

def test_in_add_examples():
    a = t_n(2)
    m = regular_bimodule(a)
    x = simple_bimodule(a, 2, 1)
    assert in_add(m, m)
    assert in_add(m, direct_sum([m, x]))
    assert not in_add(direct_sum([m, x]), m)


def test_tensor_square_over_u2_not_in_add_a():
    ch = TensorChain(arrow_subalgebra(t_n(2)))
    assert not in_add(ch.level(2, "BB"), ch.level(1, "BB"))


def test_h_equivalence_examples():
    a = t_n(2)
    m = direct_sum([regular_bimodule(a), simple_bimodule(a, 1, 2)])
    assert h_equivalent(m, m)
    assert h_equivalent(m, multiple(m, 3))
    ch = TensorChain(top_subalgebra(a))
    assert h_equivalent(ch.level(2, "BB"), ch.level(1, "BB"))


@pytest.mark.parametrize("p", [2, 3, 7])
def test_prime_fields_agree_with_rationals(p):
    F = FieldSpec(p)
    chq = TensorChain(arrow_subalgebra(t_n(3)))
    chp = TensorChain(arrow_subalgebra(t_n(3, F)))
    for kind in ("AB", "BB"):
        want = in_add(chq.level(2, kind), chq.level(1, kind))
        assert in_add(chp.level(2, kind), chp.level(1, kind)) == want


def test_restriction_preserves_add():
    e = top_subalgebra(t_n(2))
    ch = TensorChain(e)
    m, n = ch.c(4), ch.c(3)
    assert in_add(m, n)
    assert in_add(restrict(m, "both", e), restrict(n, "both", e))
    assert in_add(restrict(m, "right", e), restrict(n, "right", e))


def test_seed_does_not_change_answers():
    ch = TensorChain(arrow_subalgebra(t_n(3)))
    m, n = ch.level(3, "BB"), ch.level(2, "BB")
    assert {in_add(m, n, seed=s) for s in (0, 7)} == {True}


# --- properties against the Krull-Schmidt oracle ---------------------------

POOL = bimodule_pool()
counts = st.lists(st.integers(0, 2), min_size=len(POOL), max_size=len(POOL)).filter(any)


@given(counts, counts, st.integers(0, 2**16))
@settings(max_examples=40, deadline=None)
def test_in_add_matches_oracle(cx, cy, seed):
    rng = random.Random(seed)
    x, y = random_bimodule(POOL, cx, rng), random_bimodule(POOL, cy, rng)
    assert in_add(x, x)
    assert in_add(x, y) == add_oracle(cx, cy)


@given(counts, counts, counts, st.integers(0, 2**16))
@settings(max_examples=25, deadline=None)
def test_in_add_transitive_and_additive(cx, cy, cz, seed):
    rng = random.Random(seed)
    x, y, z = (random_bimodule(POOL, c, rng) for c in (cx, cy, cz))
    xz, yz = in_add(x, z), in_add(y, z)
    if in_add(x, y) and yz:
        assert xz
    assert in_add(direct_sum([x, y]), z) == (xz and yz)


@given(counts, st.integers(0, 2**16))
@settings(max_examples=20, deadline=None)
def test_h_equivalence_of_multiples(cx, seed):
    rng = random.Random(seed)
    x = random_bimodule(POOL, cx, rng)
    y = random_bimodule(POOL, [2 * c for c in cx], rng)
    assert h_equivalent(x, y)


def test_locality_of_ends_for_multiplicity_free_sums():
    # H-equivalent, multiplicity free: same indecomposables, same locality
    rng = random.Random(5)
    for c in ([1, 0, 0, 0, 0], [0, 1, 0, 0, 1], [1, 1, 0, 0, 0]):
        x, y = random_bimodule(POOL, c, rng), random_bimodule(POOL, c, rng)
        assert h_equivalent(x, y)
        assert is_local(end_algebra(x)) == is_local(end_algebra(y))


def test_locality_is_not_an_h_invariant_with_multiplicities():
    # m ~ 2m, yet End(m) = K is local and End(2m) = M_2(K) is not
    m = POOL[0]
    assert h_equivalent(m, multiple(m, 2))
    assert is_local(end_algebra(m)) and not is_local(end_algebra(multiple(m, 2)))
