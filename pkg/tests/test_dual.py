import itertools
import json
import random

import pytest
from hypothesis import given

from cubefold.corpus import chain_pocset, cycle_pocset, fan_pocset, transverse_pocset
from cubefold.dual import bfs_distances, dual_complex, is_ultrafilter, median_failures, naive_vertices
from cubefold.errors import ComplexTooLarge, NotAVertex
from cubefold.pocset import chain, pocset_from

from conftest import pocsets


def ultrafilter_oracle(p):
    """Orientation tuples closed upward, checked halfspace by halfspace."""
    out = set()
    n = p.n_hyperplanes
    for choice in itertools.product((0, 1), repeat=n):
        chosen = {2 * j + c for j, c in enumerate(choice)}
        if all(k in chosen for h in chosen for k in p.halfspaces() if p.lt(h, k)):
            out.add(sum(c << j for j, c in enumerate(choice)))
    return out


def grid_coordinates(X):
    """Place fan vertices on the 3x3 grid: coordinate i counts chosen k's
    among the two hyperplanes parallel to axis i."""
    names = X.pocset.names
    coords = []
    for i in range(len(X.vertices)):
        chosen = {names[h] for h in X.halfspaces_of(i)}
        coords.append((("k0" in chosen) + ("K2" in chosen), ("k1" in chosen) + ("K3" in chosen)))
    return coords


def test_single_hyperplane():
    X = dual_complex(pocset_from([("a", "A")]))
    assert len(X.vertices) == 2 and len(X.edges) == 1


@pytest.mark.parametrize("n", range(1, 11))
def test_cube(n):
    X = dual_complex(transverse_pocset(n))
    assert len(X.vertices) == 2**n
    assert len(X.edges) == n * 2 ** (n - 1)
    assert len(X.maximal_cubes) == 1
    assert X.dimension() == n
    assert X.l1_distance(0, 2**n - 1) == n


def test_fan_target():
    p = fan_pocset()
    X = dual_complex(p)
    assert len(X.vertices) == len(ultrafilter_oracle(p)) == 9
    assert len(X.edges) == 12
    assert [len(h) for _, h in X.maximal_cubes] == [2, 2, 2, 2]
    assert X.dimension() == 2
    coords = grid_coordinates(X)
    assert sorted(coords) == sorted(itertools.product(range(3), repeat=2))
    corner = {c: X.vertices[i] for i, c in enumerate(coords)}
    assert X.l1_distance(corner[(0, 0)], corner[(2, 2)]) == 4


def test_fan_medians_are_coordinatewise():
    X = dual_complex(fan_pocset())
    coords = grid_coordinates(X)
    where = {c: i for i, c in enumerate(coords)}
    rng = random.Random(5)
    for _ in range(200):
        u, v, w = (rng.randrange(9) for _ in range(3))
        m = X.median(X.vertices[u], X.vertices[v], X.vertices[w])
        expected = tuple(sorted(t)[1] for t in zip(coords[u], coords[v], coords[w]))
        assert X.index[m] == where[expected]


def test_median_basics():
    X = dual_complex(transverse_pocset(2))
    assert X.median(0b00, 0b01, 0b10) == 0b00
    assert X.median(0b01, 0b01, 0b10) == 0b01
    assert X.l1_distance(0b11, 0b11) == 0


def test_chain_complexes():
    X = dual_complex(chain("ab"))
    assert [len(h) for _, h in X.maximal_cubes] == [1, 1]
    P = dual_complex(chain_pocset(5))
    assert len(P.vertices) == 6 and len(P.edges) == 5
    assert max(bfs_distances(P, 0)) == 5
    assert P.dimension() == 1


def test_cycle_pocset():
    X = dual_complex(cycle_pocset(8))
    assert (len(X.vertices), len(X.edges), len(X.maximal_cubes), X.dimension()) == (17, 24, 8, 2)


def test_not_a_vertex():
    X = dual_complex(chain("ab"))
    bad = next(o for o in range(4) if o not in X.index)
    with pytest.raises(NotAVertex):
        X.vertex_id(bad)
    with pytest.raises(NotAVertex):
        X.l1_distance(bad, X.vertices[0])


def test_vertex_cap():
    with pytest.raises(ComplexTooLarge):
        dual_complex(transverse_pocset(4), vertex_cap=15)
    assert len(dual_complex(transverse_pocset(4), vertex_cap=16).vertices) == 16


def test_exports():
    X = dual_complex(chain("ab"))
    dot = X.to_dot()
    assert dot.startswith("graph dual {") and dot.count("--") == 2
    data = json.loads(X.to_json())
    assert len(data["vertices"]) == 3
    assert data["dimension"] == 1
    assert X.summary().startswith("3 vertices, 2 edges")


@given(pocsets(max_hyperplanes=8))
def test_vertices_match_oracles(p):
    X = dual_complex(p)
    assert set(X.vertices) == naive_vertices(p) == ultrafilter_oracle(p)


@given(pocsets(max_hyperplanes=8))
def test_median_closure(p):
    X = dual_complex(p)
    n = len(X.vertices)
    triples = [(u, v, w) for u in range(n) for v in range(n) for w in range(n)][:2000]
    assert median_failures(X, triples) == []
    for u, v, w in triples[:200]:
        assert is_ultrafilter(p, X.median(X.vertices[u], X.vertices[v], X.vertices[w]))


@given(pocsets(max_hyperplanes=8))
def test_graph_distance_is_l1(p):
    X = dual_complex(p)
    for s in range(min(len(X.vertices), 6)):
        dist = bfs_distances(X, s)
        for t, d in enumerate(dist):
            assert d == X.l1_distance(X.vertices[s], X.vertices[t])


@given(pocsets(max_hyperplanes=7))
def test_edges_flip_one_hyperplane(p):
    X = dual_complex(p)
    for a, b, j in X.edges:
        assert X.vertices[a] ^ X.vertices[b] == 1 << j
    expected = sum(1 for u, v in itertools.combinations(X.vertices, 2) if (u ^ v).bit_count() == 1)
    assert len(X.edges) == expected


@given(pocsets(max_hyperplanes=7))
def test_maximal_cubes(p):
    X = dual_complex(p)
    cubes = [(frozenset(c), frozenset(h)) for c, h in X.maximal_cubes]
    for corners, hyps in cubes:
        assert len(corners) == 2 ** len(hyps)
        assert all(p.transverse(a, b) for a, b in itertools.combinations(hyps, 2))
    for (c1, _), (c2, _) in itertools.permutations(cubes, 2):
        assert not c1 <= c2
    covered = set().union(*(c for c, _ in cubes)) if cubes else set()
    assert covered == set(range(len(X.vertices))) or len(X.vertices) == 1
