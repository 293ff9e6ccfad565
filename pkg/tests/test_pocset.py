import itertools

import pytest
from hypothesis import given

from cubefold.errors import (
    ComparableWithComplement,
    DuplicatePair,
    EqualHyperplanes,
    NotComparable,
    OrderCycle,
    StarFixedPoint,
    UnknownHalfspace,
)
from cubefold.pocset import Arrangement, RawPocset, chain, pocset_from, validate_pocset

from conftest import pocsets


def reachability(n, edges):
    """Floyd-Warshall closure over ``n`` nodes."""
    reach = [[False] * n for _ in range(n)]
    for a, b in edges:
        reach[a][b] = True
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                for j in range(n):
                    if reach[k][j]:
                        reach[i][j] = True
    return reach


def test_single_hyperplane():
    p = pocset_from([("a", "A")])
    assert p.n_hyperplanes == 1
    assert p.star(p.id("a")) == p.id("A")
    assert all(p.checks.values())


def test_closure_adds_star_dual():
    p = pocset_from([("a", "A"), ("b", "B")], [("a", "b")])
    a, A, b, B = p.ids("a", "A", "b", "B")
    assert p.lt(B, A)
    assert not p.lt(A, B)


def test_comparable_with_complement():
    with pytest.raises(ComparableWithComplement):
        pocset_from([("a", "A")], [("a", "A")])


def test_derived_comparable_with_complement():
    with pytest.raises(ComparableWithComplement) as info:
        pocset_from([("a", "A"), ("b", "B")], [("a", "b"), ("b", "A")])
    assert info.value.witness


def test_order_cycle():
    with pytest.raises(OrderCycle):
        pocset_from([("a", "A"), ("b", "B"), ("c", "C")], [("a", "b"), ("b", "c"), ("c", "a")])


def test_bad_pairs():
    with pytest.raises(StarFixedPoint):
        pocset_from([("a", "a")])
    with pytest.raises(DuplicatePair):
        pocset_from([("a", "A"), ("a", "B")])
    with pytest.raises(UnknownHalfspace):
        pocset_from([("a", "A")], [("a", "z")])


def test_canonical_name_is_smaller():
    p = pocset_from([("b", "a")])
    assert p.name(0) == "a"
    assert p.hyperplane_name(0) == "a"


def test_arrangements_in_chain():
    p = chain("ab")
    a, A, b, B = p.ids("a", "A", "b", "B")
    assert p.classify_halfspaces(A, b) == Arrangement.FACING
    assert p.classify_halfspaces(a, B) == Arrangement.INCOMPATIBLE
    assert p.classify_halfspaces(a, b) == Arrangement.NESTED
    assert p.classify_halfspaces(a, A) == Arrangement.COMPLEMENTARY
    assert p.classify_halfspaces(a, a) == Arrangement.EQUAL
    q = pocset_from([("a", "A"), ("b", "B")])
    assert q.classify_halfspaces(*q.ids("a", "b")) == Arrangement.TRANSVERSE


def test_hyperplane_classification():
    p = chain("ab")
    assert p.classify_hyperplanes(0, 1) == "disjoint"
    assert p.classify_hyperplanes(0, 0) == "equal"
    q = pocset_from([("a", "A"), ("b", "B")])
    assert q.classify_hyperplanes(0, 1) == "transverse"


def brute_separators(p, j1, j2):
    """Hyperplanes k such that some orientation of k contains one of j1, j2
    strictly on each side."""
    out = set()
    for k in p.hyperplanes():
        if k in (j1, j2):
            continue
        for side in (2 * k, 2 * k + 1):
            inside = any(p.lt(h, side) for h in (2 * j1, 2 * j1 + 1))
            outside = any(p.lt(h, side ^ 1) for h in (2 * j2, 2 * j2 + 1))
            if inside and outside:
                out.add(k)
    return out


def test_separators_chain():
    p = chain("abc")
    assert p.separators(0, 2) == {1}
    assert p.separators(0, 1) == frozenset()
    q = pocset_from([(x, x.upper()) for x in "abc"])
    assert all(not q.separators(i, j) for i, j in itertools.combinations(range(3), 2))
    with pytest.raises(EqualHyperplanes):
        p.separators(1, 1)


def test_inseparable():
    p = chain("abc")
    assert not p.is_inseparable([1], 0, 2)
    assert p.is_inseparable([0], 0, 2)
    assert p.is_inseparable([], 0, 2)


def test_facing_collections():
    p = chain("ab")
    assert p.is_facing_collection([0, 1])
    assert p.facing_orientation([0, 1]) == {0: p.id("A"), 1: p.id("b")}
    q = chain("abc")
    assert not q.is_facing_collection([0, 1, 2])
    assert q.is_facing_collection([])


def test_intervals():
    p = chain("abc")
    a, b, c = p.ids("a", "b", "c")
    assert p.interval(a, c) == {a, b, c}
    assert p.interval(a, a) == {a}
    with pytest.raises(NotComparable):
        p.interval(c, a)
    d = pocset_from(
        [(x, x.upper()) for x in "abdc"], [("a", "b"), ("a", "d"), ("b", "c"), ("d", "c")]
    )
    assert d.transverse(d.id("b") >> 1, d.id("d") >> 1)
    assert {d.names[h] for h in d.interval(d.id("a"), d.id("c"))} == {"a", "b", "d", "c"}


def test_text_round_trip():
    p = pocset_from([("a", "A"), ("b", "B"), ("c", "C")], [("a", "b"), ("C", "b")])
    from cubefold.fileio import parse_pocset

    assert parse_pocset(p.to_text()).same_as(p)


@given(pocsets(max_hyperplanes=9))
def test_closure_matches_reachability(p):
    n = p.n_halfspaces
    edges = [(h, k) for h, k in p.cover_relations()] + [(k ^ 1, h ^ 1) for h, k in p.cover_relations()]
    reach = reachability(n, edges)
    for h in range(n):
        for k in range(n):
            assert p.lt(h, k) == reach[h][k]


@given(pocsets())
def test_pocset_axioms(p):
    for h in p.halfspaces():
        assert p.star(p.star(h)) == h
        assert not p.le(h, p.star(h))
        assert not p.lt(h, h)
        for k in p.halfspaces():
            if p.lt(h, k):
                assert p.lt(p.star(k), p.star(h))
                assert not p.lt(k, h)


@given(pocsets())
def test_separators_match_brute_force(p):
    for j1, j2 in itertools.combinations(p.hyperplanes(), 2):
        assert p.separators(j1, j2) == brute_separators(p, j1, j2)


@given(pocsets())
def test_arrangement_is_symmetric(p):
    for h in p.halfspaces():
        for k in p.halfspaces():
            assert p.classify_halfspaces(h, k) == p.classify_halfspaces(k, h)
    for j1, j2 in itertools.combinations(p.hyperplanes(), 2):
        kinds = {p.classify_halfspaces(x, y) for x in (2 * j1, 2 * j1 + 1) for y in (2 * j2, 2 * j2 + 1)}
        if p.transverse(j1, j2):
            assert kinds == {Arrangement.TRANSVERSE}
        else:
            # exactly one facing, one back-to-back and two nested orientations
            assert Arrangement.FACING in kinds and Arrangement.INCOMPATIBLE in kinds


def test_raw_lines_blame_generator():
    raw = RawPocset(pairs=[("a", "A")], order=[("a", "A")], order_lines=[7])
    with pytest.raises(ComparableWithComplement) as info:
        validate_pocset(raw)
    assert info.value.line == 7
