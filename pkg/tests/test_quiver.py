import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quiverdepth.quiver import (
    CyclicQuiverError, Quiver, QuiverError, QuiverParseError, enumerate_paths, kronecker_quiver,
    linear_quiver, parse_quiver, path_counts, renumber, serialize_quiver, validate,
)


def brute_force_paths(q):
    """Paths by walking arrow sequences of every length up to the arrow count."""
    out = [(v, v, ()) for v in q.vertices]
    for k in range(1, len(q.arrows) + 1):
        for seq in itertools.product(q.arrows, repeat=k):
            if all(a.target == b.source for a, b in zip(seq, seq[1:])):
                out.append((seq[0].source, seq[-1].target, tuple(a.label for a in seq)))
    return out


def test_parse_single_arrow():
    q = parse_quiver("vertices 2\narrow a 2 1")
    assert q.n_vertices == 2 and len(q.arrows) == 1


def test_parse_kronecker():
    q = parse_quiver("vertices 2\narrow a 2 1\narrow b 2 1")
    assert [(a.source, a.target) for a in q.arrows] == [(2, 1), (2, 1)]


def test_loop_rejected_at_validation():
    q = parse_quiver("vertices 1\narrow a 1 1")
    assert not validate(q).acyclic
    with pytest.raises(CyclicQuiverError):
        enumerate_paths(q)


def test_parse_comments_and_blank_lines():
    q = parse_quiver("# header\n\nvertices 3  # three\narrow x 3 2\narrow y 2 1\n")
    assert q == Quiver.from_edges(3, [("x", 3, 2), ("y", 2, 1)])


@pytest.mark.parametrize("text, lineno", [
    ("vertices 2\narrow a 2 3", 2),
    ("vertices 2\narrow a 2 1\narrow a 1 2", 3),
    ("vertices 2\nedge a 2 1", 2),
    ("arrow a 2 1", 1),
    ("vertices 2\narrow a 2", 2),
    ("vertices two", 1),
])
def test_parse_errors_name_the_line(text, lineno):
    with pytest.raises(QuiverParseError) as exc:
        parse_quiver(text)
    assert exc.value.lineno == lineno
    assert f"line {lineno}" in str(exc.value)


def test_missing_vertices_line():
    with pytest.raises(QuiverParseError):
        parse_quiver("# nothing\n")


def test_duplicate_labels_rejected_in_constructor():
    with pytest.raises(QuiverError):
        Quiver.from_edges(2, [("a", 2, 1), ("a", 2, 1)])


def test_validate_linear():
    r = validate(linear_quiver(3))
    assert r.acyclic and r.connected and r.numbering == (1, 2, 3)


def test_validate_isolated_vertices():
    r = validate(Quiver(2))
    assert r.acyclic and not r.connected and r.numbering is not None


def test_validate_two_cycle():
    r = validate(Quiver.from_edges(2, [("x", 1, 2), ("y", 2, 1)]))
    assert not r.acyclic and r.connected and r.numbering is None


def test_enumerate_single_vertex():
    assert [p.label for p in enumerate_paths(Quiver(1))] == ["e1"]


def test_enumerate_linear_three():
    ps = enumerate_paths(linear_quiver(3))
    assert len(ps) == 6
    assert [p.length for p in ps] == [0, 0, 0, 1, 1, 2]


def test_enumerate_kronecker():
    assert [p.label for p in enumerate_paths(kronecker_quiver())] == ["e1", "e2", "alpha", "beta"]


def test_serialize_round_trip():
    text = "vertices 3\narrow x 3 2\narrow y 2 1\narrow z 3 1\n"
    assert serialize_quiver(parse_quiver(text)) == text


@st.composite
def acyclic_quivers(draw):
    n = draw(st.integers(1, 5))
    pairs = st.tuples(st.integers(1, n), st.integers(1, n)).filter(lambda p: p[0] != p[1])
    edges = draw(st.lists(pairs, max_size=5))
    # orient by a hidden permutation so the numbering has work to do
    perm = draw(st.permutations(range(1, n + 1)))
    rank = {v: perm[v - 1] for v in range(1, n + 1)}
    oriented = [(s, t) if rank[s] > rank[t] else (t, s) for s, t in edges]
    return Quiver.from_edges(n, [(f"x{k}", s, t) for k, (s, t) in enumerate(oriented)])


@given(acyclic_quivers())
@settings(max_examples=80, deadline=None)
def test_paths_match_brute_force(q):
    got = sorted((p.source, p.target, p.arrows) for p in enumerate_paths(q))
    assert got == sorted(brute_force_paths(q))
    assert sum(path_counts(q).values()) == len(got)


@given(acyclic_quivers())
@settings(max_examples=80, deadline=None)
def test_numbering_makes_arrows_decrease(q):
    r = validate(q)
    assert r.acyclic
    assert sorted(r.numbering) == list(q.vertices)
    assert all(a.source > a.target for a in renumber(q, r.numbering).arrows)


@given(acyclic_quivers())
@settings(max_examples=50, deadline=None)
def test_parse_serialize_identity(q):
    assert parse_quiver(serialize_quiver(q)) == q
