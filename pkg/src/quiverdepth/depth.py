"""Depth of a subalgebra B in A from the tensor powers C_n = A (x)_B ... (x)_B A.

For n >= 1 the level-n flags say C_{n+1} lies in add(C_n) as

* BB: B-B-bimodules (depth 2n+1),
* AB: A-B-bimodules (right depth 2n),
* BA: B-A-bimodules (left depth 2n),
* AA: A-A-bimodules, checked both ways (H-depth 2n-1).

``cutoff`` is the largest depth value that is tested; anything beyond it is
reported as a lower bound.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .algebra import AlgebraError, Ideal, SubalgebraEmbedding, quotient_embedding
from .bimodule import TensorChain
from .exactlin import EchelonBasis, Vec, echelon_of_rows
from .families import augmentation_ideal, augmentations
from .homdiv import in_add

log = logging.getLogger(__name__)

KINDS = ("AA", "AB", "BA", "BB")


class DepthInvariantError(AssertionError):
    """Computed flags contradict a theorem; always a bug."""


@dataclass(frozen=True)
class LowerBound:
    at_least: int

    def to_json(self):
        return {"at_least": self.at_least}

    def __str__(self):
        return f">= {self.at_least}"


Depth = Union[int, LowerBound]


def _depth_json(d: Optional[Depth]):
    if d is None or isinstance(d, int):
        return d
    return d.to_json()


@dataclass
class DepthConfig:
    cutoff: int = 6
    # use the augmentation-ideal test to settle AB(1)/BA(1) when it fails
    use_obstruction: bool = True
    # also run the tensor computation where the obstruction decided
    cross_check: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.cutoff < 1:
            raise ValueError("cutoff must be >= 1")


@dataclass
class LevelFlags:
    n: int
    values: Dict[str, Optional[bool]] = field(default_factory=lambda: dict.fromkeys(KINDS))
    # flags filled in by implication or by the obstruction test
    derived: Dict[str, str] = field(default_factory=dict)

    def __getitem__(self, kind):
        return self.values[kind]

    def to_json(self):
        out = {"n": self.n}
        out.update({k: self.values[k] for k in KINDS})
        return out


@dataclass
class DepthReport:
    cutoff: int
    field: str
    depth1: bool
    depth1_reverse: Optional[bool]
    flags: List[LevelFlags]
    min_depth: Depth
    h_depth: Optional[Depth] = None

    @property
    def resolved(self) -> bool:
        return isinstance(self.min_depth, int)

    @property
    def odd_depth(self) -> Optional[int]:
        return odd_depth(self)

    def flag(self, n: int, kind: str) -> Optional[bool]:
        for f in self.flags:
            if f.n == n:
                return f.values[kind]
        return None

    def to_json(self) -> dict:
        return {
            "min_depth": _depth_json(self.min_depth),
            "odd_depth": self.odd_depth,
            "h_depth": _depth_json(self.h_depth),
            "depth1": self.depth1,
            "depth1_reverse": self.depth1_reverse,
            "flags": [f.to_json() for f in self.flags],
            "cutoff": self.cutoff,
            "field": self.field,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=False)


def odd_depth(r: DepthReport) -> Optional[int]:
    """Smallest odd number >= min_depth; None while unresolved."""
    d = r.min_depth
    if not isinstance(d, int):
        return None
    return d if d % 2 else d + 1


# --- depth-2 obstruction ---------------------------------------------------

@dataclass
class Obstruction:
    left_ok: bool
    right_ok: bool
    # (vertex i, side, vector) with side "right": in A B_i^+ but not B_i^+ A
    witnesses: List[Tuple[int, str, Vec]]


def _span_products(a, left: Sequence[Vec], right: Sequence[Vec]) -> EchelonBasis:
    eb = EchelonBasis(a.field, a.dim)
    for x in left:
        for y in right:
            p = a.mul(x, y)
            if p:
                eb.add(p)
    return eb


def depth2_obstruction(e: SubalgebraEmbedding) -> Obstruction:
    """Check A B_i^+ = B_i^+ A for every augmentation rho_i of A.

    A B_i^+ inside B_i^+ A is necessary for right depth 2 (the AB flag at
    n = 1), the reverse inclusion for left depth 2.
    """
    A = e.ambient
    F = A.field
    basis = [{k: F.one} for k in range(A.dim)]
    left_ok = right_ok = True
    wit = []
    for rho in augmentations(A):
        bplus = augmentation_ideal(e, rho)
        ab = _span_products(A, basis, bplus)
        ba = _span_products(A, bplus, basis)
        for v in ab.basis():
            if not ba.contains(v):
                right_ok = False
                wit.append((rho.index, "right", v))
                break
        for v in ba.basis():
            if not ab.contains(v):
                left_ok = False
                wit.append((rho.index, "left", v))
                break
    return Obstruction(left_ok, right_ok, wit)


# --- the engine ------------------------------------------------------------

class DepthEngine:
    """Evaluates and caches depth flags for one extension B in A."""

    def __init__(self, e: SubalgebraEmbedding, config: Optional[DepthConfig] = None):
        self.e = e
        self.config = config or DepthConfig()
        self.chain = TensorChain(e)
        self._flags: Dict[int, LevelFlags] = {}
        self._depth1: Optional[Tuple[bool, bool]] = None
        self._obstruction: Optional[Obstruction] = None

    # flags

    def level_flags(self, n: int) -> LevelFlags:
        if n not in self._flags:
            self._flags[n] = LevelFlags(n)
        return self._flags[n]

    def obstruction(self) -> Optional[Obstruction]:
        if self._obstruction is None:
            try:
                self._obstruction = depth2_obstruction(self.e)
            except AlgebraError:
                return None
        return self._obstruction

    def flag(self, n: int, kind: str) -> bool:
        """C_{n+1} in add(C_n) for the bimodule structure ``kind``."""
        if n < 1:
            raise ValueError("flags are defined for n >= 1")
        lf = self.level_flags(n)
        if lf.values[kind] is not None and kind not in lf.derived:
            return lf.values[kind]
        decided = None
        if n == 1 and kind in ("AB", "BA") and self.config.use_obstruction:
            ob = self.obstruction()
            if ob is not None and not (ob.right_ok if kind == "AB" else ob.left_ok):
                decided = False
                if not self.config.cross_check:
                    lf.values[kind] = False
                    lf.derived[kind] = "obstruction"
                    self._check(n)
                    return False
        if lf.values[kind] is not None and kind in lf.derived and decided is None:
            return lf.values[kind]
        val = self._compute(n, kind)
        if decided is not None and val != decided:
            raise DepthInvariantError(f"obstruction refutes {kind}(1) but the tensor test says true")
        lf.values[kind] = val
        lf.derived.pop(kind, None)
        self._check(n)
        return val

    def _compute(self, n: int, kind: str) -> bool:
        hi, lo = self.chain.level(n + 1, kind), self.chain.level(n, kind)
        log.debug("flag %s(%d): dims %d, %d", kind, n, hi.dim, lo.dim)
        seed = self.config.seed
        if kind == "AA":
            return in_add(hi, lo, seed) and in_add(lo, hi, seed)
        return in_add(hi, lo, seed)

    def depth1(self) -> Tuple[bool, bool]:
        """(A in add(B), B in add(A)) as B-B-bimodules."""
        if self._depth1 is None:
            c1, c0 = self.chain.level(1, "BB"), self.chain.level(0, "BB")
            s = self.config.seed
            self._depth1 = (in_add(c1, c0, s), in_add(c0, c1, s))
        return self._depth1

    def _check(self, n: int) -> None:
        """Restriction implications and monotonicity on computed flags."""
        lf = self._flags[n]
        v = lf.values
        for k in ("AB", "BA"):
            if v[k] and v["BB"] is False and "BB" not in lf.derived:
                raise DepthInvariantError(f"{k}({n}) true but BB({n}) false")
        if v["AA"]:
            for k in ("AB", "BA"):
                if v[k] is False and k not in lf.derived:
                    raise DepthInvariantError(f"AA({n}) true but {k}({n}) false")
        for m, other in self._flags.items():
            for k in KINDS:
                a, b = (other.values[k], v[k]) if m < n else (v[k], other.values[k])
                if m != n and a is True and b is False:
                    raise DepthInvariantError(f"{k} not monotone between levels {min(m, n)} and {max(m, n)}")

    def _fill_implied(self) -> None:
        for n, lf in self._flags.items():
            v = lf.values
            if v["AA"]:
                for k in ("AB", "BA"):
                    if v[k] is None:
                        v[k] = True
                        lf.derived[k] = "implied"
            if v["BB"] is None and (v["AB"] or v["BA"]):
                v["BB"] = True
                lf.derived["BB"] = "implied"

    # depths

    def min_depth(self) -> Depth:
        cutoff = self.config.cutoff
        if self.depth1()[0]:
            return 1
        n = 1
        while True:
            if 2 * n > cutoff:
                return LowerBound(2 * n)
            if self.flag(n, "AB") or self.flag(n, "BA"):
                return 2 * n
            if 2 * n + 1 > cutoff:
                return LowerBound(2 * n + 1)
            if self.flag(n, "BB"):
                return 2 * n + 1
            n += 1

    def h_depth(self) -> Depth:
        """Least 2n - 1 <= cutoff with AA(n), else a lower bound."""
        cutoff = self.config.cutoff
        n = 1
        while 2 * n - 1 <= cutoff:
            if self.flag(n, "AA"):
                return 2 * n - 1
            n += 1
        return LowerBound(2 * n - 1)

    def report(self, with_h_depth: bool = True) -> DepthReport:
        d1, d1r = self.depth1()
        md = self.min_depth()
        hd = self.h_depth() if with_h_depth else None
        if isinstance(hd, int) and isinstance(md, int) and md > hd + 1:
            raise DepthInvariantError(f"H-depth {hd} but minimum depth {md}")
        if isinstance(hd, int) and isinstance(md, LowerBound) and md.at_least > hd + 1:
            raise DepthInvariantError(f"H-depth {hd} but minimum depth {md}")
        if d1 and not d1r:
            log.warning("A in add(B) but not B in add(A) as B-B-bimodules")
        self._fill_implied()
        flags = [self._flags[n] for n in sorted(self._flags)]
        return DepthReport(self.config.cutoff, str(self.e.ambient.field), d1, d1r, flags, md, hd)


# --- functional interface --------------------------------------------------

def depth_flags(e: SubalgebraEmbedding, n: int, engine: Optional[DepthEngine] = None) -> Dict[str, bool]:
    eng = engine or DepthEngine(e, DepthConfig(use_obstruction=False))
    return {k: eng.flag(n, k) for k in KINDS}


def min_depth(e: SubalgebraEmbedding, cutoff: int = 6, with_h_depth: bool = False, **kw) -> DepthReport:
    return DepthEngine(e, DepthConfig(cutoff=cutoff, **kw)).report(with_h_depth=with_h_depth)


def h_depth(e: SubalgebraEmbedding, cutoff: int = 6) -> Depth:
    return DepthEngine(e, DepthConfig(cutoff=cutoff)).h_depth()


# --- quotients -------------------------------------------------------------

def _le(a: Depth, b: Depth) -> Optional[bool]:
    """a <= b, or None when the bounds cannot decide."""
    if isinstance(a, int) and isinstance(b, int):
        return a <= b
    if isinstance(a, int):
        return True   # b >= b.at_least > cutoff >= a
    if isinstance(b, int):
        return False  # a > cutoff >= b
    return None


@dataclass
class QuotientCheck:
    d_original: Depth
    d_quotient: Depth
    monotone: Optional[bool]


def _check_ideal(e: SubalgebraEmbedding, ideal: Ideal) -> None:
    if ideal.ambient is not e.ambient:
        raise AlgebraError("ideal lives in another algebra")
    if not ideal.is_ideal():
        raise AlgebraError("not a two-sided ideal of A")
    img = echelon_of_rows(e.ambient.field, e.ambient.dim, e.image_basis())
    if not all(img.contains(v) for v in ideal.basis):
        raise AlgebraError("ideal is not contained in B")


def quotient_depth_check(e: SubalgebraEmbedding, ideal: Ideal, cutoff: int = 6) -> QuotientCheck:
    """d(B/I, A/I) <= d(B, A) for an A-ideal I inside B."""
    _check_ideal(e, ideal)
    d0 = min_depth(e, cutoff).min_depth
    eq, _, _ = quotient_embedding(e, ideal)
    dq = min_depth(eq, cutoff).min_depth
    mono = _le(dq, d0)
    if mono is False:
        raise DepthInvariantError(f"quotient depth {dq} exceeds depth {d0}")
    return QuotientCheck(d0, dq, mono)


def quotient_chain(e: SubalgebraEmbedding, ideals: Sequence[Ideal], cutoff: int = 6) -> List[Depth]:
    """Depths of B/I in A/I along a decreasing chain of ideals, then of B in A.

    The result is non-decreasing; a violation raises DepthInvariantError.
    """
    out = []
    for ideal in ideals:
        _check_ideal(e, ideal)
        if ideal.dim == 0:
            out.append(min_depth(e, cutoff).min_depth)
        else:
            out.append(min_depth(quotient_embedding(e, ideal)[0], cutoff).min_depth)
    out.append(min_depth(e, cutoff).min_depth)
    for a, b in zip(out, out[1:]):
        if _le(a, b) is False:
            raise DepthInvariantError(f"depths along the ideal chain are not monotone: {out}")
    return out
