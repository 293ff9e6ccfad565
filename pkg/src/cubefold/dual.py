"""The CAT(0) cube complex dual to a finite pocset.

Vertices are ultrafilters, stored as orientation masks over hyperplanes (bit
``j`` set means halfspace ``2*j + 1`` is chosen).  Two vertices are adjacent
when they differ on a single hyperplane; cubes are sets of pairwise transverse
hyperplanes that are all flippable at a common vertex, and are materialized
only on request.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import cached_property

from . import kernels
from .errors import ComplexTooLarge, NotAVertex
from .pocset import Pocset, bits

DEFAULT_VERTEX_CAP = 2**20


def default_vertex_cap() -> int:
    value = os.environ.get("CUBEFOLD_VERTEX_CAP")
    return int(value) if value else DEFAULT_VERTEX_CAP


def force_tables(p: Pocset) -> tuple[list[int], list[int]]:
    """Hyperplanes decided by choosing each halfspace, and their orientations."""
    masks, values = [], []
    for h in p.halfspaces():
        mask = value = 0
        for k in bits(p.up[h] | 1 << h):
            mask |= 1 << (k >> 1)
            value |= (k & 1) << (k >> 1)
        masks.append(mask)
        values.append(value)
    return masks, values


def chosen_halfspaces(orientation: int, n: int) -> tuple[int, ...]:
    return tuple(2 * j + ((orientation >> j) & 1) for j in range(n))


def is_ultrafilter(p: Pocset, orientation: int) -> bool:
    chosen = 0
    for h in chosen_halfspaces(orientation, p.n_hyperplanes):
        chosen |= 1 << h
    return all(p.up[h] & ~chosen == 0 for h in bits(chosen))


def _lex_key(orientation: int, n: int) -> tuple[int, ...]:
    return tuple((orientation >> j) & 1 for j in range(n))


@dataclass(frozen=True, eq=False)
class CubeComplex:
    pocset: Pocset
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]
    flippable: tuple[int, ...]
    index: dict[int, int] = field(repr=False)

    @property
    def n_hyperplanes(self) -> int:
        return self.pocset.n_hyperplanes

    def vertex_id(self, orientation: int) -> int:
        try:
            return self.index[orientation]
        except KeyError:
            raise NotAVertex(f"orientation {orientation:#x} is not a vertex") from None

    def halfspaces_of(self, i: int) -> tuple[int, ...]:
        return chosen_halfspaces(self.vertices[i], self.n_hyperplanes)

    def l1_distance(self, u: int, v: int) -> int:
        """Number of hyperplanes separating two vertices (given as orientations)."""
        self.vertex_id(u)
        self.vertex_id(v)
        return (u ^ v).bit_count()

    def median(self, u: int, v: int, w: int) -> int:
        m = (u & v) | (u & w) | (v & w)
        self.vertex_id(m)
        return m

    def neighbours(self, i: int) -> list[int]:
        v = self.vertices[i]
        return [self.index[v ^ (1 << j)] for j in bits(self.flippable[i])]

    def cubes_at(self, i: int) -> list[int]:
        """Maximal sets of pairwise transverse hyperplanes flippable at vertex ``i``."""
        return _maximal_cliques(self.flippable[i], self._transverse_masks)

    @cached_property
    def _transverse_masks(self) -> tuple[int, ...]:
        p = self.pocset
        out = []
        for j in p.hyperplanes():
            mask = 0
            for k in p.hyperplanes():
                if p.transverse(j, k):
                    mask |= 1 << k
            out.append(mask)
        return tuple(out)

    @cached_property
    def maximal_cubes(self) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
        """Inclusion-maximal cubes as ``(vertex ids, hyperplanes)``.

        Every cube through a vertex uses hyperplanes flippable there, so the
        maximal cubes through ``v`` are exactly the maximal cliques of the
        transversality graph on ``v``'s flippable hyperplanes.
        """
        seen = {}
        for i, v in enumerate(self.vertices):
            for clique in self.cubes_at(i):
                base = v & ~clique
                key = (base, clique)
                if key in seen:
                    continue
                corners = sorted(self.index[base | sub] for sub in _submasks(clique))
                seen[key] = (tuple(corners), tuple(bits(clique)))
        return tuple(sorted(seen.values()))

    def dimension(self) -> int:
        return max((len(h) for _, h in self.maximal_cubes), default=0)

    def cube_contains(self, cube_index: int, orientation: int) -> bool:
        corners, _ = self.maximal_cubes[cube_index]
        return self.index.get(orientation, -1) in corners

    # -- export ----------------------------------------------------------

    def to_dot(self) -> str:
        p = self.pocset
        lines = ["graph dual {"]
        lines += [f"  v{i};" for i in range(len(self.vertices))]
        lines += [f'  v{a} -- v{b} [label="{p.hyperplane_name(j)}"];' for a, b, j in self.edges]
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        p = self.pocset
        return {
            "vertices": [sorted(p.names[h] for h in self.halfspaces_of(i)) for i in range(len(self.vertices))],
            "edges": [[a, b, p.hyperplane_name(j)] for a, b, j in self.edges],
            "maximal_cubes": [list(corners) for corners, _ in self.maximal_cubes],
            "dimension": self.dimension(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def summary(self) -> str:
        squares = sum(1 for _, h in self.maximal_cubes if len(h) == 2)
        return (
            f"{len(self.vertices)} vertices, {len(self.edges)} edges, "
            f"{len(self.maximal_cubes)} maximal cubes ({squares} squares), dimension {self.dimension()}"
        )


def _submasks(mask: int):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def _maximal_cliques(candidates: int, adjacency) -> list[int]:
    """Bron-Kerbosch with pivoting over bitmask vertex sets."""
    out = []

    def expand(r: int, p: int, x: int) -> None:
        if not p and not x:
            out.append(r)
            return
        pivot = next(bits(p | x))
        for v in bits(p & ~adjacency[pivot]):
            expand(r | 1 << v, p & adjacency[v], x & adjacency[v])
            p &= ~(1 << v)
            x |= 1 << v

    expand(0, candidates, 0)
    return sorted(out)


def dual_complex(p: Pocset, vertex_cap: int | None = None) -> CubeComplex:
    cap = default_vertex_cap() if vertex_cap is None else vertex_cap
    if cap < 1:
        raise ValueError("vertex cap must be at least 1")
    n = p.n_hyperplanes
    masks, values = force_tables(p)
    found = kernels.enumerate_ultrafilters(n, masks, values, cap)
    if found is None:
        raise ComplexTooLarge(f"dual complex has more than {cap} vertices", witness=(cap,))
    vertices = tuple(sorted(found, key=lambda v: _lex_key(v, n)))
    edges, flippable = kernels.build_edges(vertices, n)
    return CubeComplex(
        pocset=p,
        vertices=vertices,
        edges=tuple(edges),
        flippable=tuple(flippable),
        index={v: i for i, v in enumerate(vertices)},
    )


def naive_vertices(p: Pocset) -> set[int]:
    """Exhaustive oracle: every orientation tuple that is an ultrafilter."""
    return {o for o in range(1 << p.n_hyperplanes) if is_ultrafilter(p, o)}


def bfs_distances(X: CubeComplex, source: int) -> list[int]:
    dist = [-1] * len(X.vertices)
    dist[source] = 0
    frontier = [source]
    while frontier:
        nxt = []
        for i in frontier:
            for k in X.neighbours(i):
                if dist[k] < 0:
                    dist[k] = dist[i] + 1
                    nxt.append(k)
        frontier = nxt
    return dist


def median_failures(X: CubeComplex, triples) -> list[int]:
    return kernels.median_failures(X.vertices, triples, X.n_hyperplanes)
