"""Named algebras and subalgebras: T_n, D_n, U_n, J_n, augmentations, simples."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Union

from .algebra import (
    Algebra, AlgebraError, SubalgebraEmbedding, path_algebra,
    subalgebra_closure, subalgebra_from_basis,
)
from .bimodule import Bimodule
from .exactlin import QQ, FieldSpec, Mat, Vec, echelon_of_rows, kernel_basis, solve
from .quiver import linear_quiver


def t_n(n: int, field: FieldSpec = QQ) -> Algebra:
    """Lower triangular n x n matrices, as the path algebra of n -> ... -> 1.

    The path from i to j plays the role of the matrix unit e_ij (i >= j).
    """
    if n < 1:
        raise ValueError("n >= 1 required")
    return path_algebra(linear_quiver(n), field)


def matrix_unit(a: Algebra, i: int, j: int) -> Vec:
    """e_ij in t_n(n): the unique path from vertex i to vertex j."""
    for k, p in enumerate(a.paths):
        if p.source == i and p.target == j:
            return {k: a.field.one}
    raise KeyError((i, j))


def top_subalgebra(a: Algebra) -> SubalgebraEmbedding:
    if a.vertex_idempotents is None:
        raise AlgebraError("top subalgebra needs vertex idempotents")
    return subalgebra_closure(a, a.vertex_idempotents)


def diagonal_subalgebra(a: Algebra) -> SubalgebraEmbedding:
    """Block diagonal e1 A e1 + e2 A e2 of a triangular ring; the top
    subalgebra otherwise (these agree on acyclic path algebras)."""
    if a.block_idempotents is None:
        return top_subalgebra(a)
    gens = []
    for e in a.block_idempotents:
        for k in range(a.dim):
            v = a.mul(a.mul(e, {k: a.field.one}), e)
            if v:
                gens.append(v)
    return subalgebra_closure(a, gens)


def arrow_subalgebra(a: Algebra) -> SubalgebraEmbedding:
    """K.1 + rad A."""
    if a.radical_basis is None:
        raise AlgebraError("arrow subalgebra needs the path grading")
    basis = echelon_of_rows(a.field, a.dim, [a.unit] + list(a.radical_basis)).basis()
    return subalgebra_from_basis(a, basis)


def shift_element(a: Algebra) -> Vec:
    """Sum of all arrows of the linear quiver: the lower shift matrix."""
    F = a.field
    return {k: F.one for k, p in enumerate(a.paths) if p.length == 1}


def jordan_subalgebra(n: int, field: FieldSpec = QQ, ambient: Algebra = None) -> SubalgebraEmbedding:
    """J_n inside T_n: span of 1, s, s^2, ..., s^(n-1) for the shift s."""
    a = ambient if ambient is not None else t_n(n, field)
    s = shift_element(a)
    powers = [a.unit]
    for _ in range(1, n):
        powers.append(a.mul(powers[-1], s))
    labels = ["1"] + ["x" if k == 1 else f"x^{k}" for k in range(1, n)]
    return subalgebra_from_basis(a, powers, labels=labels)


@dataclass
class Augmentation:
    """Algebra map to the ground field, stored as a covector."""

    algebra: Algebra
    index: int
    functional: Vec

    def __call__(self, x: Vec):
        F = self.algebra.field
        s = sum((c * self.functional.get(k, 0) for k, c in x.items()), F.zero)
        return s % F.p if F.p else s

    def is_multiplicative(self) -> bool:
        a = self.algebra
        F = a.field
        if self(a.unit) != F.one:
            return False
        for i in range(a.dim):
            for j in range(a.dim):
                lhs = self(a.mul_basis(i, j))
                rhs = self.functional.get(i, 0) * self.functional.get(j, 0)
                if F.p:
                    rhs %= F.p
                if lhs != rhs:
                    return False
        return True


def augmentations(a: Algebra) -> List[Augmentation]:
    """rho_i with rho_i(eps_j) = delta_ij, vanishing on the radical."""
    if a.vertex_idempotents is None:
        raise AlgebraError("augmentations need vertex idempotents")
    F = a.field
    n = len(a.vertex_idempotents)
    rad = a.radical_basis if a.radical_basis is not None else []
    rows = list(a.vertex_idempotents) + list(rad)
    M = Mat.from_rows(rows, a.dim, F)
    out = []
    for i in range(n):
        lam = solve(M, {i: F.one})
        if lam is None:
            raise AlgebraError("no augmentation for vertex %d" % (i + 1))
        out.append(Augmentation(a, i + 1, lam))
    return out


def pullback(rho: Augmentation, e: SubalgebraEmbedding) -> Augmentation:
    """rho restricted to the subalgebra, in the subalgebra's coordinates."""
    lam = {}
    for k, col in enumerate(e.image_basis()):
        v = rho(col)
        if v:
            lam[k] = v
    return Augmentation(e.sub, rho.index, lam)


def augmentation_ideal(e: SubalgebraEmbedding, rho: Augmentation) -> List[Vec]:
    """Basis (ambient vectors) of B_i^+ = ker rho_i intersected with B."""
    if rho.algebra is not e.ambient:
        raise AlgebraError("augmentation does not belong to the ambient algebra")
    F = e.ambient.field
    cols = e.image_basis()
    row = {k: rho(c) for k, c in enumerate(cols) if rho(c)}
    ker = kernel_basis(Mat.from_rows([row], len(cols), F))
    vecs = [e.image(v) for v in ker]
    return echelon_of_rows(F, e.ambient.dim, vecs).basis()


def simple_bimodule(a: Algebra, i: Union[int, Augmentation], j: Union[int, Augmentation]) -> Bimodule:
    """One-dimensional bimodule K_ij: a . 1 . b = rho_i(a) rho_j(b).

    ``i``/``j`` are vertex numbers of ``a`` or augmentations (possibly of
    other algebras, e.g. the subalgebra's K_eps).
    """
    augs = None
    if isinstance(i, int) or isinstance(j, int):
        augs = augmentations(a)
    left = augs[i - 1] if isinstance(i, int) else i
    right = augs[j - 1] if isinstance(j, int) else j
    F = a.field

    def one_by_one(alg, rho):
        return [Mat(1, 1, F, {0: {0: rho.functional[k]}} if rho.functional.get(k) else {})
                for k in range(alg.dim)]

    w = left.algebra.weights
    weights = [(0,) * len(w[0])] if w else None
    return Bimodule(left.algebra, right.algebra, 1,
                    one_by_one(left.algebra, left), one_by_one(right.algebra, right),
                    name=f"K[{left.index},{right.index}]", weights=weights)
