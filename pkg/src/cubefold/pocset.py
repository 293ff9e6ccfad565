"""Finite pocsets: halfspaces, complementation, order, and arrangement queries.

Halfspaces are interned to dense integers.  Hyperplane ``j`` owns the two
halfspaces ``2*j`` and ``2*j + 1``; the even one carries the lexicographically
smaller name and serves as the canonical representative.  Complementation is
therefore ``h ^ 1`` and the bounding hyperplane is ``h >> 1``.

The strict order is stored as one bitmask per halfspace (``up[h]`` has bit
``k`` set iff ``h < k``), always transitively closed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import (
    ComparableWithComplement,
    DuplicatePair,
    EqualHyperplanes,
    NotComparable,
    OrderCycle,
    StarFixedPoint,
    UnknownHalfspace,
    UnknownHyperplane,
)


class Arrangement(str, enum.Enum):
    EQUAL = "equal"
    COMPLEMENTARY = "complementary"
    NESTED = "nested"
    FACING = "facing"
    TRANSVERSE = "transverse"
    INCOMPATIBLE = "incompatible"


def bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def hyperplane_mask(halfspace_mask: int) -> int:
    out = 0
    for h in bits(halfspace_mask):
        out |= 1 << (h >> 1)
    return out


def star(h: int) -> int:
    return h ^ 1


@dataclass
class RawPocset:
    """Unvalidated pocset description, as read from a file or built in code."""

    pairs: list[tuple[str, str]] = field(default_factory=list)
    order: list[tuple[str, str]] = field(default_factory=list)
    pair_lines: list[int | None] | None = None
    order_lines: list[int | None] | None = None


@dataclass(frozen=True, eq=False)
class Pocset:
    names: tuple[str, ...]
    up: tuple[int, ...]
    down: tuple[int, ...]
    index: dict[str, int] = field(repr=False)
    checks: dict[str, bool] = field(default_factory=dict, repr=False, compare=False)

    # -- basic structure -------------------------------------------------

    @property
    def n_halfspaces(self) -> int:
        return len(self.names)

    @property
    def n_hyperplanes(self) -> int:
        return len(self.names) // 2

    def halfspaces(self) -> range:
        return range(len(self.names))

    def hyperplanes(self) -> range:
        return range(len(self.names) // 2)

    def id(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise UnknownHalfspace(f"unknown halfspace {name!r}", witness=(name,)) from None

    def ids(self, *names: str) -> tuple[int, ...]:
        return tuple(self.id(n) for n in names)

    def name(self, h: int) -> str:
        self._check_halfspace(h)
        return self.names[h]

    def hyperplane_name(self, j: int) -> str:
        self._check_hyperplane(j)
        return self.names[2 * j]

    def star(self, h: int) -> int:
        self._check_halfspace(h)
        return h ^ 1

    @staticmethod
    def hyperplane(h: int) -> int:
        return h >> 1

    def lt(self, h: int, k: int) -> bool:
        return (self.up[h] >> k) & 1 == 1

    def le(self, h: int, k: int) -> bool:
        return h == k or (self.up[h] >> k) & 1 == 1

    def _check_halfspace(self, h: int) -> None:
        if not (isinstance(h, int) and 0 <= h < len(self.names)):
            raise UnknownHalfspace(f"unknown halfspace {h!r}", witness=(h,))

    def _check_hyperplane(self, j: int) -> None:
        if not (isinstance(j, int) and 0 <= j < len(self.names) // 2):
            raise UnknownHyperplane(f"unknown hyperplane {j!r}", witness=(j,))

    # -- arrangements ----------------------------------------------------

    def classify_halfspaces(self, h: int, k: int) -> Arrangement:
        self._check_halfspace(h)
        self._check_halfspace(k)
        if h == k:
            return Arrangement.EQUAL
        if h ^ 1 == k:
            return Arrangement.COMPLEMENTARY
        if self.lt(h, k) or self.lt(k, h):
            return Arrangement.NESTED
        if self.lt(k ^ 1, h):
            return Arrangement.FACING
        if self.lt(k, h ^ 1):
            return Arrangement.INCOMPATIBLE
        return Arrangement.TRANSVERSE

    def transverse(self, hyp1: int, hyp2: int) -> bool:
        """Hyperplane transversality: no orientation pair is comparable."""
        if hyp1 == hyp2:
            return False
        related = self.up[2 * hyp1] | self.down[2 * hyp1]
        return (related >> (2 * hyp2)) & 3 == 0

    def classify_hyperplanes(self, hyp1: int, hyp2: int) -> str:
        self._check_hyperplane(hyp1)
        self._check_hyperplane(hyp2)
        if hyp1 == hyp2:
            return "equal"
        return "transverse" if self.transverse(hyp1, hyp2) else "disjoint"

    def facing_orientation_of_pair(self, hyp1: int, hyp2: int) -> tuple[int, int] | None:
        """The unique facing orientations of two disjoint hyperplanes."""
        for h in (2 * hyp1, 2 * hyp1 + 1):
            for k in (2 * hyp2, 2 * hyp2 + 1):
                if self.lt(k ^ 1, h):
                    return h, k
        return None

    def contains_hyperplane(self, h: int, hyp: int) -> bool:
        """Whether halfspace ``h`` contains the (disjoint) hyperplane ``hyp``."""
        return (self.down[h] >> (2 * hyp)) & 3 != 0

    # -- separation ------------------------------------------------------

    def separator_mask(self, hyp1: int, hyp2: int) -> int:
        between = 0
        for h1 in (2 * hyp1, 2 * hyp1 + 1):
            for h2 in (2 * hyp2, 2 * hyp2 + 1):
                between |= self.up[h1] & self.down[h2]
        return hyperplane_mask(between)

    def separators(self, hyp1: int, hyp2: int) -> frozenset[int]:
        self._check_hyperplane(hyp1)
        self._check_hyperplane(hyp2)
        if hyp1 == hyp2:
            raise EqualHyperplanes("separators of a hyperplane with itself", witness=(hyp1,))
        return frozenset(bits(self.separator_mask(hyp1, hyp2)))

    def is_inseparable(self, hyps: Iterable[int], hyp1: int, hyp2: int) -> bool:
        mask = 0
        for j in hyps:
            mask |= 1 << j
        self.separators(hyp1, hyp2)
        return not self.separator_mask(hyp1, hyp2) & mask

    def facing_orientation(self, hyps: Iterable[int]) -> dict[int, int] | None:
        """A simultaneous orientation making every pair facing, if any.

        The first hyperplane's orientation determines all the others (a
        disjoint pair has exactly one facing orientation), so both choices
        for it are propagated and checked.
        """
        hyps = sorted(set(hyps))
        if not hyps:
            return {}
        first, rest = hyps[0], hyps[1:]
        for h0 in (2 * first, 2 * first + 1):
            chosen = {first: h0}
            ok = True
            for j in rest:
                forced = next((k for k in (2 * j, 2 * j + 1) if self.lt(k ^ 1, h0)), None)
                if forced is None:
                    ok = False
                    break
                chosen[j] = forced
            if ok and all(
                self.lt(chosen[b] ^ 1, chosen[a]) for i, a in enumerate(hyps) for b in hyps[i + 1:]
            ):
                return chosen
        return None

    def is_facing_pairwise(self, hyps: Iterable[int]) -> bool:
        hyps = sorted(set(hyps))
        mask = 0
        for j in hyps:
            mask |= 1 << j
        for i, a in enumerate(hyps):
            for b in hyps[i + 1:]:
                if self.transverse(a, b) or self.separator_mask(a, b) & mask:
                    return False
        return True

    def is_facing_collection(self, hyps: Iterable[int]) -> bool:
        hyps = sorted(set(hyps))
        for j in hyps:
            self._check_hyperplane(j)
        return self.is_facing_pairwise(hyps) and self.facing_orientation(hyps) is not None

    def interval(self, h: int, l: int) -> frozenset[int]:
        self._check_halfspace(h)
        self._check_halfspace(l)
        if not self.le(h, l):
            raise NotComparable(
                f"{self.names[h]} is not below {self.names[l]}", witness=(self.names[h], self.names[l])
            )
        return frozenset(bits((self.up[h] | 1 << h) & (self.down[l] | 1 << l)))

    # -- export ----------------------------------------------------------

    def cover_relations(self) -> list[tuple[int, int]]:
        """Hasse diagram edges, one of each star-dual pair."""
        covers = []
        for h in self.halfspaces():
            for k in bits(self.up[h]):
                if self.up[h] & self.down[k]:
                    continue
                if (h, k) <= (k ^ 1, h ^ 1):
                    covers.append((h, k))
        return covers

    def to_text(self) -> str:
        lines = [f"pair {self.names[2 * j]} {self.names[2 * j + 1]}" for j in self.hyperplanes()]
        lines += [f"le {self.names[h]} {self.names[k]}" for h, k in self.cover_relations()]
        return "\n".join(lines) + "\n"

    def same_as(self, other: "Pocset") -> bool:
        return self.names == other.names and self.up == other.up

    def __repr__(self) -> str:
        return f"Pocset({self.n_hyperplanes} hyperplanes: {', '.join(self.names[0::2])})"


def _intern(raw: RawPocset) -> list[tuple[str, str]]:
    partner: dict[str, str] = {}
    lines = raw.pair_lines or [None] * len(raw.pairs)
    for (a, b), line in zip(raw.pairs, lines):
        if a == b:
            raise StarFixedPoint(f"halfspace {a!r} declared as its own complement", witness=(a,), line=line)
        for x, y in ((a, b), (b, a)):
            if partner.get(x, y) != y:
                raise DuplicatePair(
                    f"halfspace {x!r} already paired with {partner[x]!r}", witness=(x, partner[x], y), line=line
                )
        partner[a], partner[b] = b, a
    pairs = {tuple(sorted((a, b))) for a, b in partner.items()}
    return sorted(pairs)


def validate_pocset(raw: RawPocset) -> Pocset:
    """Build a pocset from complementary pairs and order generators.

    The order is the transitive closure of the generators together with their
    star-reversed duals, maintained incrementally so that a violation can be
    blamed on the generator that introduced it.
    """
    pairs = _intern(raw)
    names = tuple(x for pair in pairs for x in pair)
    index = {name: i for i, name in enumerate(names)}
    size = len(names)
    up = [0] * size
    down = [0] * size

    def add(x: int, y: int, line: int | None) -> None:
        lower = down[x] | 1 << x
        upper = up[y] | 1 << y
        if lower & upper:
            raise OrderCycle(
                f"order cycle through {names[x]} <= {names[y]}", witness=(names[x], names[y]), line=line
            )
        for d in bits(lower):
            up[d] |= upper
        for u in bits(upper):
            down[u] |= lower
        for d in bits(lower):
            if (up[d] >> (d ^ 1)) & 1:
                raise ComparableWithComplement(
                    f"{names[d]} becomes comparable with its complement {names[d ^ 1]}",
                    witness=(names[d], names[d ^ 1]),
                    line=line,
                )

    lines = raw.order_lines or [None] * len(raw.order)
    for (a, b), line in zip(raw.order, lines):
        for name in (a, b):
            if name not in index:
                raise UnknownHalfspace(f"unknown halfspace {name!r}", witness=(name,), line=line)
        x, y = index[a], index[b]
        if x == y or (up[x] >> y) & 1:
            continue
        if y == x ^ 1:
            raise ComparableWithComplement(
                f"{a} declared comparable with its complement {b}", witness=(a, b), line=line
            )
        add(x, y, line)
        if not (up[y ^ 1] >> (x ^ 1)) & 1:
            add(y ^ 1, x ^ 1, line)

    checks = {
        "involution": True,
        "fixed_point_free": True,
        "incomparable_with_complement": True,
        "partial_order": True,
        "order_reversing": all(
            (up[k ^ 1] >> (h ^ 1)) & 1 for h in range(size) for k in bits(up[h])
        ),
        # Finite carrier: intervals are finite, chains are finite, width is finite.
        "locally_finite": True,
        "finite_width": True,
        "dcc": True,
    }
    if not checks["order_reversing"]:
        raise AssertionError("closure lost star symmetry")
    return Pocset(names=names, up=tuple(up), down=tuple(down), index=index, checks=checks)


def pocset_from(pairs: Sequence[tuple[str, str]], order: Sequence[tuple[str, str]] = ()) -> Pocset:
    return validate_pocset(RawPocset(pairs=list(pairs), order=list(order)))


def chain(names: Sequence[str]) -> Pocset:
    """Lower-case names form the chain; upper-case names are complements."""
    pairs = [(x, x.upper()) for x in names]
    order = [(a, b) for a, b in zip(names, names[1:])]
    return pocset_from(pairs, order)
