"""Finite groups acting on pocsets by automorphisms, without inversion.

A group is represented by its image in the symmetric group on halfspaces:
permutations are tuples ``perm[h] = g.h``.  The closure is computed eagerly
by breadth-first multiplication by generators.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping

from .errors import (
    Inversion,
    NotAutomorphism,
    NotBijection,
    UnknownHalfspace,
    UnknownHyperplane,
    UnpairedGenerator,
)
from .pocset import Pocset, bits

Perm = tuple[int, ...]


def identity(size: int) -> Perm:
    return tuple(range(size))


def compose(g: Perm, h: Perm) -> Perm:
    """``g * h``: apply ``h`` first."""
    return tuple(g[x] for x in h)


def inverse(g: Perm) -> Perm:
    out = [0] * len(g)
    for x, y in enumerate(g):
        out[y] = x
    return tuple(out)


def closure(generators, size: int) -> tuple[Perm, ...]:
    e = identity(size)
    seen = {e}
    queue = deque([e])
    gens = list(generators)
    while queue:
        g = queue.popleft()
        for s in gens:
            gs = compose(s, g)
            if gs not in seen:
                seen.add(gs)
                queue.append(gs)
    return tuple(sorted(seen))


@dataclass(frozen=True, eq=False)
class GroupAction:
    pocset: Pocset
    generators: dict[str, Perm]
    closure: tuple[Perm, ...]

    @property
    def order(self) -> int:
        return len(self.closure)

    def apply(self, g: Perm, h: int) -> int:
        return g[h]

    def apply_hyperplane(self, g: Perm, j: int) -> int:
        return g[2 * j] >> 1

    def orbits(self) -> list[frozenset[int]]:
        """Orbit partition of halfspaces, sorted by least element."""
        seen = set()
        out = []
        for h in self.pocset.halfspaces():
            if h in seen:
                continue
            orbit = frozenset(g[h] for g in self.closure)
            seen |= orbit
            out.append(orbit)
        return out

    def hyperplane_orbits(self) -> list[frozenset[int]]:
        seen = set()
        out = []
        for j in self.pocset.hyperplanes():
            if j in seen:
                continue
            orbit = frozenset(g[2 * j] >> 1 for g in self.closure)
            seen |= orbit
            out.append(orbit)
        return out

    def stabilizer(self, j: int) -> tuple[Perm, ...]:
        """Elements fixing hyperplane ``j``; without inversion they fix both sides."""
        if not (isinstance(j, int) and 0 <= j < self.pocset.n_hyperplanes):
            raise UnknownHyperplane(f"unknown hyperplane {j!r}", witness=(j,))
        return tuple(g for g in self.closure if g[2 * j] == 2 * j)

    def to_text(self) -> str:
        names = self.pocset.names
        lines = []
        for name, g in sorted(self.generators.items()):
            moves = ", ".join(f"{names[h]}->{names[g[h]]}" for h in range(len(g)) if g[h] != h)
            lines.append(f"gen {name} : {moves}" if moves else f"gen {name} :")
        return "\n".join(lines) + ("\n" if lines else "")


def _as_perm(p: Pocset, name: str, raw) -> Perm:
    size = p.n_halfspaces
    if isinstance(raw, Mapping):
        perm = list(range(size))
        for src, dst in raw.items():
            s = p.id(src) if isinstance(src, str) else src
            d = p.id(dst) if isinstance(dst, str) else dst
            if not (0 <= s < size and 0 <= d < size):
                raise UnknownHalfspace(f"generator {name}: unknown halfspace", witness=(name, src, dst))
            perm[s] = d
    else:
        perm = list(raw)
        if len(perm) != size:
            raise NotBijection(f"generator {name} has {len(perm)} entries, expected {size}", witness=(name,))
    if sorted(perm) != list(range(size)):
        raise NotBijection(f"generator {name} is not a bijection on halfspaces", witness=(name,))
    return tuple(perm)


def check_automorphism(p: Pocset, name: str, g: Perm) -> None:
    for h in p.halfspaces():
        if g[h ^ 1] != g[h] ^ 1:
            raise NotAutomorphism(
                f"generator {name} does not commute with complementation at {p.names[h]}",
                witness=(name, p.names[h], p.names[h ^ 1]),
            )
        for k in bits(p.up[h]):
            if not p.lt(g[h], g[k]):
                raise NotAutomorphism(
                    f"generator {name} does not preserve {p.names[h]} < {p.names[k]}",
                    witness=(name, p.names[h], p.names[k]),
                )


def validate_action(p: Pocset, gens: Mapping[str, object]) -> GroupAction:
    """Validate generators (permutations or partial name maps) and close them.

    A finite injective map sending the order relation into itself is onto it,
    so checking ``h < k  =>  g.h < g.k`` suffices for an automorphism.
    """
    perms = {}
    for name in sorted(gens):
        g = _as_perm(p, name, gens[name])
        check_automorphism(p, name, g)
        perms[name] = g
    elements = closure(perms.values(), p.n_halfspaces)
    for g in elements:
        for h in range(0, p.n_halfspaces, 2):
            if g[h] == h ^ 1:
                raise Inversion(
                    f"group element sends {p.names[h]} to its complement",
                    witness=(g, p.names[h]),
                )
    return GroupAction(pocset=p, generators=perms, closure=elements)


def trivial_action(p: Pocset) -> GroupAction:
    return validate_action(p, {})


def check_equivariant(dom: GroupAction, cod: GroupAction, assign, pairing=None) -> bool:
    """``f(g.h) == g.f(h)`` for every paired generator and every halfspace.

    ``pairing`` maps domain generator names to codomain generator names and
    defaults to matching equal names.
    """
    if pairing is None:
        if set(dom.generators) != set(cod.generators):
            missing = sorted(set(dom.generators) ^ set(cod.generators))
            raise UnpairedGenerator(f"generators without a partner: {', '.join(missing)}", witness=tuple(missing))
        pairing = {name: name for name in dom.generators}
    for name in dom.generators:
        if name not in pairing or pairing[name] not in cod.generators:
            raise UnpairedGenerator(f"generator {name} has no partner", witness=(name,))
    for name, g in dom.generators.items():
        g2 = cod.generators[pairing[name]]
        for h in dom.pocset.halfspaces():
            if assign[g[h]] != g2[assign[h]]:
                return False
    return True


def joint_closure(dom: GroupAction, cod: GroupAction) -> tuple[tuple[Perm, Perm], ...]:
    """The group generated by paired generators acting on both pocsets at once.

    This is the image of the abstract group in the symmetric group of the
    disjoint union, which is what stabilizer comparisons across a map need.
    """
    n = dom.pocset.n_halfspaces
    gens = []
    for name, g in dom.generators.items():
        if name not in cod.generators:
            raise UnpairedGenerator(f"generator {name} has no partner", witness=(name,))
        gens.append(g + tuple(n + x for x in cod.generators[name]))
    for name in cod.generators:
        if name not in dom.generators:
            raise UnpairedGenerator(f"generator {name} has no partner", witness=(name,))
    joint = closure(gens, n + cod.pocset.n_halfspaces)
    return tuple((g[:n], tuple(x - n for x in g[n:])) for g in joint)
