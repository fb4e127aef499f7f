"""Quivers: data type, text format, validation and path enumeration.

File format (UTF-8, '#' starts a comment)::

    vertices 3
    arrow a 3 2
    arrow b 2 1

Vertices are numbered 1..n. Paths are written source-to-target, so the path
``a.b`` above goes 3 -> 2 -> 1.
"""

from __future__ import annotations

import re
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple


class QuiverError(ValueError):
    pass


class QuiverParseError(QuiverError):
    def __init__(self, msg, lineno=None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {msg}" if lineno is not None else msg)


class CyclicQuiverError(QuiverError):
    pass


_LABEL = re.compile(r"^[A-Za-z_][A-Za-z0-9_']*$")


@dataclass(frozen=True)
class Arrow:
    label: str
    source: int
    target: int


@dataclass(frozen=True)
class Quiver:
    n_vertices: int
    arrows: Tuple[Arrow, ...] = ()

    def __post_init__(self):
        seen = set()
        for a in self.arrows:
            if a.label in seen:
                raise QuiverError(f"duplicate arrow label {a.label!r}")
            seen.add(a.label)
            for v in (a.source, a.target):
                if not 1 <= v <= self.n_vertices:
                    raise QuiverError(f"arrow {a.label!r}: vertex {v} out of range 1..{self.n_vertices}")

    @classmethod
    def from_edges(cls, n, edges):
        """``edges`` is a sequence of (label, source, target)."""
        return cls(n, tuple(Arrow(l, s, t) for l, s, t in edges))

    @property
    def vertices(self):
        return range(1, self.n_vertices + 1)

    def arrow(self, label) -> Arrow:
        for a in self.arrows:
            if a.label == label:
                return a
        raise KeyError(label)


@dataclass(frozen=True)
class Path:
    """A path in a quiver; ``arrows`` empty means the stationary path at source."""

    source: int
    target: int
    arrows: Tuple[str, ...] = ()

    @property
    def length(self):
        return len(self.arrows)

    @property
    def label(self):
        if not self.arrows:
            return f"e{self.source}"
        return ".".join(self.arrows)

    def sort_key(self):
        return (self.length, self.source, self.arrows)

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class ValidationReport:
    acyclic: bool
    connected: bool
    numbering: Optional[Tuple[int, ...]]   # numbering[v-1] = new index of v


# --- text format -----------------------------------------------------------

def parse_quiver(text: str) -> Quiver:
    n = None
    arrows = []
    labels = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] == "vertices":
            if n is not None:
                raise QuiverParseError("'vertices' declared twice", lineno)
            if len(toks) != 2 or not toks[1].isdigit():
                raise QuiverParseError("expected 'vertices <n>'", lineno)
            n = int(toks[1])
        elif toks[0] == "arrow":
            if n is None:
                raise QuiverParseError("'arrow' before 'vertices'", lineno)
            if len(toks) != 4:
                raise QuiverParseError("expected 'arrow <label> <source> <target>'", lineno)
            label, s, t = toks[1:]
            if not _LABEL.match(label) or re.fullmatch(r"e\d+", label):
                raise QuiverParseError(f"bad arrow label {label!r}", lineno)
            if label in labels:
                raise QuiverParseError(f"duplicate arrow label {label!r}", lineno)
            try:
                s, t = int(s), int(t)
            except ValueError:
                raise QuiverParseError("vertex indices must be integers", lineno) from None
            for v in (s, t):
                if not 1 <= v <= n:
                    raise QuiverParseError(f"vertex {v} out of range 1..{n}", lineno)
            labels.add(label)
            arrows.append(Arrow(label, s, t))
        else:
            raise QuiverParseError(f"unknown directive {toks[0]!r}", lineno)
    if n is None:
        raise QuiverParseError("missing 'vertices' line")
    return Quiver(n, tuple(arrows))


def serialize_quiver(q: Quiver) -> str:
    lines = [f"vertices {q.n_vertices}"]
    lines += [f"arrow {a.label} {a.source} {a.target}" for a in q.arrows]
    return "\n".join(lines) + "\n"


# --- validation ------------------------------------------------------------

def _is_acyclic(q: Quiver) -> bool:
    out = defaultdict(list)
    for a in q.arrows:
        out[a.source].append(a.target)
    state = {}

    def visit(v):
        state[v] = 1
        for w in out[v]:
            s = state.get(w, 0)
            if s == 1:
                return False
            if s == 0 and not visit(w):
                return False
        state[v] = 2
        return True

    return all(state.get(v) == 2 or visit(v) for v in q.vertices)


def _is_connected(q: Quiver) -> bool:
    if q.n_vertices <= 1:
        return True
    nbrs = defaultdict(set)
    for a in q.arrows:
        nbrs[a.source].add(a.target)
        nbrs[a.target].add(a.source)
    seen = {1}
    todo = deque([1])
    while todo:
        v = todo.popleft()
        for w in nbrs[v]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return len(seen) == q.n_vertices


def sink_first_numbering(q: Quiver) -> Optional[Tuple[int, ...]]:
    """Renumbering with every arrow going from a larger to a smaller index.

    Repeatedly takes the smallest remaining vertex with no arrows into the
    remaining set, so a quiver already numbered this way keeps its numbering.
    """
    remaining = set(q.vertices)
    out_targets = defaultdict(list)
    for a in q.arrows:
        out_targets[a.source].append(a.target)
    new = {}
    k = 1
    while remaining:
        sinks = [v for v in sorted(remaining)
                 if not any(t in remaining for t in out_targets[v])]
        if not sinks:
            return None
        v = sinks[0]
        new[v] = k
        k += 1
        remaining.remove(v)
    return tuple(new[v] for v in q.vertices)


def validate(q: Quiver) -> ValidationReport:
    acyclic = _is_acyclic(q)
    return ValidationReport(
        acyclic=acyclic,
        connected=_is_connected(q),
        numbering=sink_first_numbering(q) if acyclic else None,
    )


def renumber(q: Quiver, numbering) -> Quiver:
    return Quiver(q.n_vertices, tuple(
        Arrow(a.label, numbering[a.source - 1], numbering[a.target - 1]) for a in q.arrows))


# --- paths -----------------------------------------------------------------

def enumerate_paths(q: Quiver) -> List[Path]:
    """All paths: stationary ones by vertex, then by (length, source, labels)."""
    if not _is_acyclic(q):
        raise CyclicQuiverError("quiver has a directed cycle; its path algebra is infinite-dimensional")
    out_arrows = defaultdict(list)
    for a in q.arrows:
        out_arrows[a.source].append(a)
    paths = [Path(v, v) for v in q.vertices]
    frontier = [Path(a.source, a.target, (a.label,)) for a in q.arrows]
    while frontier:
        frontier.sort(key=Path.sort_key)
        paths.extend(frontier)
        frontier = [Path(p.source, a.target, p.arrows + (a.label,))
                    for p in frontier for a in out_arrows[p.target]]
    return paths


def path_counts(q: Quiver) -> Dict[Tuple[int, int], int]:
    """n_ij = number of paths from i to j (including stationary ones)."""
    counts: Dict[Tuple[int, int], int] = defaultdict(int)
    for p in enumerate_paths(q):
        counts[p.source, p.target] += 1
    return dict(counts)


# --- named quivers ---------------------------------------------------------

def linear_quiver(n: int) -> Quiver:
    """n -> n-1 -> ... -> 1 with arrows a<i>: i+1 -> i."""
    return Quiver.from_edges(n, [(f"a{i}", i + 1, i) for i in range(1, n)])


def kronecker_quiver() -> Quiver:
    return Quiver.from_edges(2, [("alpha", 2, 1), ("beta", 2, 1)])


def branched_tree_quiver() -> Quiver:
    """Four vertices, one branch point: 2 -> 1, 3 -> 2, 4 -> 2."""
    return Quiver.from_edges(4, [("a", 2, 1), ("b", 3, 2), ("c", 4, 2)])
