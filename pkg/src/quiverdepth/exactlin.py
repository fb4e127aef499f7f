"""Exact sparse linear algebra over Q and GF(p).

Vectors are plain ``dict`` objects mapping index -> nonzero scalar. Matrices
are :class:`Mat`, a thin wrapper over a dict of sparse rows. Rationals use
``gmpy2.mpq``; prime-field scalars are Python ints in ``range(p)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from gmpy2 import mpq

Vec = Dict[int, object]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Ground field: the rationals (``p == 0``) or GF(p)."""

    p: int = 0

    def __post_init__(self):
        if self.p and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        text = text.strip().lower()
        if text in ("q", "qq", "rationals"):
            return cls(0)
        if text.startswith("fp:"):
            return cls(int(text[3:]))
        raise ValueError(f"unknown field {text!r}; expected 'q' or 'fp:<p>'")

    @property
    def kind(self) -> str:
        return "PrimeField" if self.p else "Rationals"

    @property
    def characteristic(self) -> int:
        return self.p

    def __str__(self):
        return f"fp:{self.p}" if self.p else "q"

    def __call__(self, x):
        if self.p:
            if isinstance(x, (Fraction,)) or type(x).__name__ == "mpq":
                num, den = int(x.numerator), int(x.denominator)
                return num * pow(den, -1, self.p) % self.p
            return int(x) % self.p
        if isinstance(x, str):
            return mpq(x)
        return mpq(x)

    @property
    def zero(self):
        return 0 if self.p else mpq(0)

    @property
    def one(self):
        return 1 if self.p else mpq(1)

    def inv(self, x):
        if self.p:
            return pow(x, -1, self.p)
        return 1 / mpq(x)

    def neg(self, x):
        return (-x) % self.p if self.p else -x

    def to_json(self, x):
        """Scalar as an int or an 'a/b' string."""
        if self.p:
            return int(x)
        x = mpq(x)
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


QQ = FieldSpec(0)


# --- sparse vector helpers -------------------------------------------------

def vec_axpy(F: FieldSpec, y: Vec, a, x: Vec) -> None:
    """In place ``y += a * x``; drops entries that cancel."""
    p = F.p
    if p:
        for k, v in x.items():
            t = (y.get(k, 0) + a * v) % p
            if t:
                y[k] = t
            else:
                y.pop(k, None)
    else:
        for k, v in x.items():
            t = y.get(k, 0) + a * v
            if t:
                y[k] = t
            else:
                y.pop(k, None)


def vec_scale(F: FieldSpec, a, x: Vec) -> Vec:
    if not a:
        return {}
    if F.p:
        return {k: v * a % F.p for k, v in x.items()}
    return {k: v * a for k, v in x.items()}


def vec_add(F: FieldSpec, x: Vec, y: Vec) -> Vec:
    out = dict(x)
    vec_axpy(F, out, F.one, y)
    return out


def vec_sub(F: FieldSpec, x: Vec, y: Vec) -> Vec:
    out = dict(x)
    vec_axpy(F, out, F.neg(F.one), y)
    return out


def vec_lincomb(F: FieldSpec, terms: Iterable[Tuple[object, Vec]]) -> Vec:
    out: Vec = {}
    for a, x in terms:
        if a:
            vec_axpy(F, out, a, x)
    return out


def vec_from_dense(F: FieldSpec, xs: Sequence) -> Vec:
    out = {}
    for i, x in enumerate(xs):
        x = F(x)
        if x:
            out[i] = x
    return out


def vec_to_dense(F: FieldSpec, v: Vec, n: int) -> list:
    out = [F.zero] * n
    for k, x in v.items():
        out[k] = x
    return out


def vec_dot(F: FieldSpec, x: Vec, y: Vec):
    if len(x) > len(y):
        x, y = y, x
    s = 0
    for k, v in x.items():
        w = y.get(k)
        if w is not None:
            s += v * w
    return s % F.p if F.p else mpq(s)


# --- matrices --------------------------------------------------------------

@dataclass
class Mat:
    """Sparse matrix: ``data[i][j]`` holds the nonzero entry at (i, j)."""

    nrows: int
    ncols: int
    field: FieldSpec = QQ
    data: Dict[int, Vec] = dc_field(default_factory=dict)

    @classmethod
    def zeros(cls, nrows, ncols, field=QQ):
        return cls(nrows, ncols, field, {})

    @classmethod
    def identity(cls, n, field=QQ):
        return cls(n, n, field, {i: {i: field.one} for i in range(n)})

    @classmethod
    def from_dense(cls, rows, field=QQ, ncols=None):
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        data = {}
        for i, r in enumerate(rows):
            if len(r) != ncols:
                raise ValueError("ragged rows")
            v = vec_from_dense(field, r)
            if v:
                data[i] = v
        return cls(len(rows), ncols, field, data)

    @classmethod
    def from_rows(cls, rows: Sequence[Vec], ncols, field=QQ):
        data = {i: dict(r) for i, r in enumerate(rows) if r}
        return cls(len(rows), ncols, field, data)

    @classmethod
    def from_columns(cls, cols: Sequence[Vec], nrows, field=QQ):
        data: Dict[int, Vec] = {}
        for j, c in enumerate(cols):
            for i, x in c.items():
                data.setdefault(i, {})[j] = x
        return cls(nrows, len(cols), field, data)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data.get(i, {}).get(j, self.field.zero)

    def row(self, i) -> Vec:
        return self.data.get(i, {})

    def columns(self) -> List[Vec]:
        cols: List[Vec] = [dict() for _ in range(self.ncols)]
        for i, r in self.data.items():
            for j, x in r.items():
                cols[j][i] = x
        return cols

    def column(self, j) -> Vec:
        return {i: r[j] for i, r in self.data.items() if j in r}

    def nnz(self) -> int:
        return sum(len(r) for r in self.data.values())

    def to_dense(self) -> list:
        return [vec_to_dense(self.field, self.data.get(i, {}), self.ncols)
                for i in range(self.nrows)]

    def transpose(self) -> "Mat":
        out: Dict[int, Vec] = {}
        for i, r in self.data.items():
            for j, x in r.items():
                out.setdefault(j, {})[i] = x
        return Mat(self.ncols, self.nrows, self.field, out)

    T = property(transpose)

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        F = self.field
        out = {}
        od = other.data
        for i, r in self.data.items():
            acc: Vec = {}
            for k, x in r.items():
                rk = od.get(k)
                if rk:
                    vec_axpy(F, acc, x, rk)
            if acc:
                out[i] = acc
        return Mat(self.nrows, other.ncols, F, out)

    def apply(self, v: Vec) -> Vec:
        """Matrix times column vector."""
        F = self.field
        out = {}
        for i, r in self.data.items():
            s = vec_dot(F, r, v)
            if s:
                out[i] = s
        return out

    def __add__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        out = {i: dict(r) for i, r in self.data.items()}
        for i, r in other.data.items():
            row = out.setdefault(i, {})
            vec_axpy(self.field, row, self.field.one, r)
            if not row:
                del out[i]
        return Mat(self.nrows, self.ncols, self.field, out)

    def __sub__(self, other: "Mat") -> "Mat":
        return self + other.scale(self.field.neg(self.field.one))

    def scale(self, a) -> "Mat":
        a = self.field(a)
        if not a:
            return Mat.zeros(self.nrows, self.ncols, self.field)
        return Mat(self.nrows, self.ncols, self.field,
                   {i: vec_scale(self.field, a, r) for i, r in self.data.items()})

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def is_zero(self) -> bool:
        return not self.data

    def vectorize(self) -> Vec:
        """Row-major flattening, index ``i * ncols + j``."""
        n = self.ncols
        return {i * n + j: x for i, r in self.data.items() for j, x in r.items()}

    @classmethod
    def unvectorize(cls, v: Vec, nrows, ncols, field=QQ) -> "Mat":
        data: Dict[int, Vec] = {}
        for k, x in v.items():
            i, j = divmod(k, ncols)
            data.setdefault(i, {})[j] = x
        return cls(nrows, ncols, field, data)

    def __repr__(self):
        return f"Mat({self.nrows}x{self.ncols}, nnz={self.nnz()}, {self.field})"


def block_diag(mats: Sequence[Mat], field=QQ) -> Mat:
    data = {}
    r0 = c0 = 0
    for m in mats:
        for i, row in m.data.items():
            data[r0 + i] = {c0 + j: x for j, x in row.items()}
        r0 += m.nrows
        c0 += m.ncols
    return Mat(r0, c0, field, data)


# --- echelon forms ---------------------------------------------------------

def _row_key(v: Vec):
    size = 0
    for x in v.values():
        if isinstance(x, int):
            size += x.bit_length()
        else:
            size += int(x.numerator).bit_length() + int(x.denominator).bit_length()
    return (len(v), size)


class EchelonBasis:
    """Incrementally maintained reduced row-echelon basis of a subspace.

    Stored rows are kept fully reduced: each pivot column is zero in every
    other row, so reduction of a vector needs a single pass.
    """

    def __init__(self, field: FieldSpec, ncols: int):
        self.field = field
        self.ncols = ncols
        self.rows: Dict[int, Vec] = {}   # pivot column -> row with 1 there

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: Vec) -> Vec:
        F = self.field
        out = dict(v)
        rows = self.rows
        hits = [c for c in out if c in rows]
        for c in hits:
            a = out.get(c)
            if a:
                vec_axpy(F, out, F.neg(a), rows[c])
        return out

    def contains(self, v: Vec) -> bool:
        return not self.reduce(v)

    def add(self, v: Vec) -> bool:
        """Insert ``v``; returns True if the rank grew."""
        r = self.reduce(v)
        if not r:
            return False
        F = self.field
        c = min(r)
        inv = F.inv(r[c])
        if F.p:
            r = {k: x * inv % F.p for k, x in r.items()}
        else:
            r = {k: x * inv for k, x in r.items()}
        for row in self.rows.values():
            a = row.get(c)
            if a:
                vec_axpy(F, row, F.neg(a), r)
        self.rows[c] = r
        return True

    def pivots(self) -> List[int]:
        return sorted(self.rows)

    def basis(self) -> List[Vec]:
        return [self.rows[c] for c in sorted(self.rows)]

    def coordinates(self, v: Vec) -> Optional[Dict[int, object]]:
        """Coefficients (by pivot column) expressing v in the RREF rows."""
        if self.reduce(v):
            return None
        return {c: v[c] for c in self.rows if c in v}


def rref(m: Mat) -> Tuple[Mat, List[int], int]:
    """Reduced row-echelon form, pivot columns and rank."""
    eb = EchelonBasis(m.field, m.ncols)
    for r in sorted(m.data.values(), key=_row_key):
        eb.add(r)
    piv = eb.pivots()
    out = Mat(m.nrows, m.ncols, m.field, {i: eb.rows[c] for i, c in enumerate(piv)})
    return out, piv, len(piv)


def echelon_of_rows(field: FieldSpec, ncols: int, rows: Iterable[Vec]) -> EchelonBasis:
    rows = sorted((r for r in rows if r), key=_row_key)
    eb = EchelonBasis(field, ncols)
    for r in rows:
        eb.add(r)
    return eb


def kernel_from_echelon(eb: EchelonBasis) -> List[Vec]:
    F = eb.field
    pivots = eb.rows
    free = [j for j in range(eb.ncols) if j not in pivots]
    # column view of the nonpivot part
    colview: Dict[int, Vec] = {}
    for c, row in pivots.items():
        for j, x in row.items():
            if j != c:
                colview.setdefault(j, {})[c] = x
    out = []
    for f in free:
        v = {f: F.one}
        for c, x in colview.get(f, {}).items():
            v[c] = F.neg(x)
        out.append(v)
    return out


def kernel_basis(m: Mat) -> List[Vec]:
    """Basis of the right null space {x : m x = 0}."""
    eb = echelon_of_rows(m.field, m.ncols, m.data.values())
    return kernel_from_echelon(eb)


def rank(m: Mat) -> int:
    return echelon_of_rows(m.field, m.ncols, m.data.values()).rank


def in_span(v: Vec, basis: Sequence[Vec], field: FieldSpec = QQ, n: Optional[int] = None) -> bool:
    if not v:
        return True
    if n is None:
        n = 1 + max([max(v)] + [max(b) for b in basis if b])
    eb = echelon_of_rows(field, n, basis)
    return eb.contains(v)


def solve(m: Mat, b: Vec) -> Optional[Vec]:
    """One solution x of ``m x = b`` or None when inconsistent."""
    F = m.field
    n = m.ncols
    aug = []
    for i in range(m.nrows):
        r = dict(m.data.get(i, {}))
        if i in b:
            r[n] = b[i]
        if r:
            aug.append(r)
    eb = echelon_of_rows(F, n + 1, aug)
    if n in eb.rows:
        return None
    x = {}
    for c, row in eb.rows.items():
        t = row.get(n)
        if t:
            x[c] = t
    return x


def inverse(m: Mat) -> Mat:
    """Inverse of a square matrix; ValueError if singular."""
    F, n = m.field, m.nrows
    if m.ncols != n:
        raise ValueError("inverse of a non-square matrix")
    aug = []
    for i in range(n):
        r = dict(m.row(i))
        r[n + i] = F.one
        aug.append(r)
    eb = echelon_of_rows(F, 2 * n, aug)
    if eb.rank != n or any(c >= n for c in eb.rows):
        raise ValueError("matrix is singular")
    rows = [{j - n: x for j, x in eb.rows[c].items() if j >= n} for c in range(n)]
    return Mat.from_rows(rows, n, F)


def span_basis(field: FieldSpec, ncols: int, vectors: Iterable[Vec]) -> List[Vec]:
    """RREF basis of the span, ordered by pivot column."""
    return echelon_of_rows(field, ncols, vectors).basis()


# --- dense backend (FLINT) -------------------------------------------------
#
# Large dense systems go through python-flint: nmod_mat for arithmetic modulo
# a word-size prime, fmpq_mat/fmpz_mat for exact rational work. Over GF(p)
# the "modular" and the exact matrices coincide.

import flint  # noqa: E402

MODULUS = 2 ** 61 - 1


def modulus_for(F: FieldSpec) -> int:
    return F.p if F.p else MODULUS


def residue(F: FieldSpec, x, P: int) -> int:
    if F.p:
        return int(x) % P
    x = mpq(x)
    return int(x.numerator) * pow(int(x.denominator), -1, P) % P


def nmod_from_rows(F: FieldSpec, rows: Sequence[Vec], ncols: int, P: int):
    data = [0] * (len(rows) * ncols)
    for i, r in enumerate(rows):
        base = i * ncols
        for j, x in r.items():
            data[base + j] = residue(F, x, P)
    return flint.nmod_mat(len(rows), ncols, data, P)


def exact_from_rows(F: FieldSpec, rows: Sequence[Vec], ncols: int):
    """fmpq_mat over Q, nmod_mat(p) over GF(p)."""
    if F.p:
        return nmod_from_rows(F, rows, ncols, F.p)
    data = [0] * (len(rows) * ncols)
    for i, r in enumerate(rows):
        base = i * ncols
        for j, x in r.items():
            x = mpq(x)
            data[base + j] = flint.fmpq(int(x.numerator), int(x.denominator))
    return flint.fmpq_mat(len(rows), ncols, data)


def exact_to_scalar(F: FieldSpec, x):
    if F.p:
        return int(x)
    return mpq(int(x.p), int(x.q))


def dense_pivots(m) -> List[int]:
    """Pivot columns of an RREF flint matrix."""
    out = []
    rows = m.tolist()
    for row in rows:
        for j, x in enumerate(row):
            if x != 0:
                out.append(j)
                break
    return out
