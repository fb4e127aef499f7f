import threading

import flint
import pytest

from quiverdepth.algebra import direct_product_embedding, identity_embedding, path_algebra
from quiverdepth.bimodule import (
    Bimodule, BimoduleError, TensorChain, c_n, corner, direct_sum, regular_bimodule, restrict,
    tensor_over_B,
)
from quiverdepth.exactlin import QQ, Mat
from quiverdepth.families import (
    arrow_subalgebra, diagonal_subalgebra, jordan_subalgebra, simple_bimodule, t_n, top_subalgebra,
)
from quiverdepth.paper_suite import kronecker_triangular
from quiverdepth.quiver import kronecker_quiver, linear_quiver, path_counts


def tensor_dim_oracle(m: Bimodule, n: Bimodule) -> int:
    """dim(m (x)_B n) from the relations over the whole basis of B, ranked by FLINT."""
    B = m.right_algebra
    dm, dn = m.dim, n.dim
    rows = []
    for k in range(B.dim):
        R = m.right_action[k].to_dense()
        L = n.left_action[k].to_dense()
        for s in range(dm):
            for t in range(dn):
                row = [0] * (dm * dn)
                for s2 in range(dm):
                    row[s2 * dn + t] += int(R[s2][s])
                for t2 in range(dn):
                    row[s * dn + t2] -= int(L[t2][t])
                rows.append(row)
    if not rows:
        return dm * dn
    return dm * dn - flint.fmpq_mat(rows).rank()


def test_regular_bimodules():
    k = t_n(1)
    m = regular_bimodule(k)
    assert m.dim == 1 and m.left_action[0] == Mat.identity(1)
    for a in (t_n(2), path_algebra(kronecker_quiver())):
        r = regular_bimodule(a)
        r.verify()
        assert r.dim == a.dim


def test_restrict_along_identity():
    a = t_n(2)
    m = regular_bimodule(a)
    r = restrict(m, "both", identity_embedding(a))
    assert r.left_action == m.left_action and r.right_action == m.right_action


def test_restrict_to_top_has_diagonal_right_action():
    a = t_n(2)
    e = top_subalgebra(a)
    r = restrict(regular_bimodule(a), "right", e)
    r.verify()
    assert r.right_algebra is e.sub and r.left_algebra is a
    for X in r.right_action:
        assert all(i == j for i, row in X.data.items() for j in row)


def test_restrict_mismatch():
    with pytest.raises(BimoduleError):
        restrict(regular_bimodule(t_n(2)), "left", top_subalgebra(t_n(3)))


def test_tensor_over_field():
    k = t_n(1)
    m, _, _ = tensor_over_B(regular_bimodule(k), regular_bimodule(k))
    assert m.dim == 1


@pytest.mark.parametrize("q", [linear_quiver(2), linear_quiver(3), linear_quiver(4), kronecker_quiver()])
def test_top_tensor_square_dimension(q):
    a = path_algebra(q)
    n = path_counts(q)
    V = list(q.vertices)
    m = sum(n.get((i, k), 0) * n.get((k, j), 0) for i in V for j in V for k in V)
    assert TensorChain(top_subalgebra(a)).dim(2) == m


def test_top_t2_and_t3_examples():
    assert TensorChain(top_subalgebra(t_n(2))).dim(2) == 4
    assert TensorChain(top_subalgebra(t_n(3))).dim(2) == 10


@pytest.mark.parametrize("n", [2, 3, 4])
def test_arrow_tensor_square_and_cube(n):
    a = t_n(n)
    ch = TensorChain(arrow_subalgebra(a))
    assert ch.dim(2) == a.dim + n * (n - 1)
    if n <= 3:
        assert ch.dim(3) == a.dim + n * (n * n - 1)


@pytest.mark.parametrize("make", [
    lambda: top_subalgebra(t_n(3)), lambda: arrow_subalgebra(t_n(3)),
    lambda: jordan_subalgebra(3), lambda: arrow_subalgebra(path_algebra(kronecker_quiver())),
])
def test_tensor_dims_against_full_basis_oracle(make):
    e = make()
    ch = TensorChain(e)
    for n in (1, 2):
        left = restrict(ch.c(n), "right", e)
        right = restrict(regular_bimodule(e.ambient), "left", e)
        assert ch.dim(n + 1) == tensor_dim_oracle(left, right)


def test_chain_levels_are_bimodules():
    e = arrow_subalgebra(t_n(3))
    ch = TensorChain(e)
    ch.c(2).verify()
    for kind in ("AB", "BA", "BB"):
        ch.level(2, kind).verify()
    assert ch.level(0, "BB").dim == e.sub.dim
    assert c_n(ch, 1).dim == e.ambient.dim
    with pytest.raises(BimoduleError):
        ch.level(0, "AA")
    with pytest.raises(BimoduleError):
        ch.c(0)


def test_projection_after_section_is_identity():
    ch = TensorChain(top_subalgebra(t_n(3)))
    tp = ch.tensor_level(3)
    assert tp.projection @ tp.section == Mat.identity(tp.module.dim)


def test_dims_bounded_by_product():
    for e in (top_subalgebra(t_n(3)), jordan_subalgebra(3)):
        ch = TensorChain(e)
        for n in (1, 2, 3):
            assert ch.dim(n + 1) <= ch.dim(n) * e.ambient.dim


def test_chain_is_safe_under_concurrent_requests():
    ch = TensorChain(arrow_subalgebra(t_n(3)))
    got = []
    ts = [threading.Thread(target=lambda: got.append(ch.c(3))) for _ in range(4)]
    for t in ts:
        t.start()
    for t in ts:
        t.join()
    assert len({id(m) for m in got}) == 1


def test_direct_sum_examples():
    a = t_n(2)
    k12, k21 = simple_bimodule(a, 1, 2), simple_bimodule(a, 2, 1)
    assert direct_sum([k12]).dim == 1
    s = direct_sum([k12, k21])
    s.verify()
    assert s.dim == 2
    with pytest.raises(BimoduleError):
        direct_sum([k12, regular_bimodule(t_n(3))])


def test_corners_identity_and_errors():
    a = t_n(3)
    m = regular_bimodule(a)
    assert corner(m, a.unit, a.unit).dim == a.dim
    with pytest.raises(BimoduleError):
        corner(m, {0: QQ(2)}, a.unit)


def test_top_corners_vanish_with_paths():
    a = t_n(3)
    c2 = TensorChain(top_subalgebra(a)).c(2)
    n = path_counts(linear_quiver(3))
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            if n.get((i, j), 0) == 0:
                assert corner(c2, a.vertex_idempotents[i - 1], a.vertex_idempotents[j - 1]).dim == 0


def test_triangular_corners():
    a = kronecker_triangular()
    ch = TensorChain(diagonal_subalgebra(a))
    e1, e2 = a.block_idempotents
    for n in (1, 2, 3):
        cn = ch.c(n)
        assert corner(cn, e1, e2).dim == 0
        assert corner(cn, e1, e1).dim == 1 and corner(cn, e2, e2).dim == 1
        assert corner(cn, e2, e1).dim == 2 * n


def test_direct_product_corners():
    e1, e2 = top_subalgebra(t_n(2)), arrow_subalgebra(t_n(3))
    e = direct_product_embedding(e1, e2)
    f1, f2 = e.ambient.block_idempotents
    ch, c1, c2 = TensorChain(e), TensorChain(e1), TensorChain(e2)
    for n in (1, 2, 3):
        cn = ch.c(n)
        assert corner(cn, f1, f1).dim == c1.dim(n)
        assert corner(cn, f2, f2).dim == c2.dim(n)
        assert corner(cn, f1, f2).dim == corner(cn, f2, f1).dim == 0
