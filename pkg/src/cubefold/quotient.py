"""Admissible equivalence relations on pocsets and their quotient pocsets."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .errors import LemmaViolation, NotAdmissible, NotTransverseInQuotient, PocsetError
from .pocset import Pocset, RawPocset, bits, validate_pocset


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def _normalize(labels) -> tuple[int, ...]:
    renumber = {}
    return tuple(renumber.setdefault(x, len(renumber)) for x in labels)


@dataclass(frozen=True, eq=False)
class EquivalenceRelation:
    """A partition of the halfspaces of ``pocset``.

    ``class_of[h]`` is the class index of ``h``; classes are numbered in
    order of their least member.
    """

    pocset: Pocset
    class_of: tuple[int, ...]

    @classmethod
    def identity(cls, p: Pocset) -> "EquivalenceRelation":
        return cls(p, tuple(range(p.n_halfspaces)))

    @classmethod
    def from_labels(cls, p: Pocset, labels) -> "EquivalenceRelation":
        labels = list(labels)
        if len(labels) != p.n_halfspaces:
            raise PocsetError(f"relation labels {len(labels)} halfspaces, pocset has {p.n_halfspaces}")
        return cls(p, _normalize(labels))

    @classmethod
    def from_classes(cls, p: Pocset, classes: Iterable[Iterable]) -> "EquivalenceRelation":
        labels = [None] * p.n_halfspaces
        for c, members in enumerate(classes):
            for x in members:
                h = p.id(x) if isinstance(x, str) else x
                if labels[h] is not None:
                    raise PocsetError(f"halfspace {p.names[h]} appears in two classes", witness=(p.names[h],))
                labels[h] = c
        for h, c in enumerate(labels):
            if c is None:
                labels[h] = ("singleton", h)
        return cls(p, _normalize(labels))

    @classmethod
    def from_pairs(cls, p: Pocset, pairs: Iterable[tuple], close_star: bool = True) -> "EquivalenceRelation":
        """Smallest equivalence containing ``pairs``, closed under complementation."""
        uf = _UnionFind(p.n_halfspaces)
        for a, b in pairs:
            h = p.id(a) if isinstance(a, str) else a
            k = p.id(b) if isinstance(b, str) else b
            uf.union(h, k)
            if close_star:
                uf.union(h ^ 1, k ^ 1)
        return cls(p, _normalize(uf.find(h) for h in p.halfspaces()))

    @cached_property
    def classes(self) -> tuple[frozenset[int], ...]:
        out: list[set[int]] = [set() for _ in range(max(self.class_of, default=-1) + 1)]
        for h, c in enumerate(self.class_of):
            out[c].add(h)
        return tuple(frozenset(c) for c in out)

    def equivalent(self, h: int, k: int) -> bool:
        return self.class_of[h] == self.class_of[k]

    def hyperplanes_equivalent(self, j: int, k: int) -> bool:
        c = self.class_of[2 * j]
        return c == self.class_of[2 * k] or c == self.class_of[2 * k + 1]

    def hyperplane_class_mask(self, j: int) -> int:
        """Hyperplanes carrying a halfspace equivalent to either side of ``j``."""
        mask = 0
        for c in {self.class_of[2 * j], self.class_of[2 * j + 1]}:
            for h in self.classes[c]:
                mask |= 1 << (h >> 1)
        return mask

    def is_identity(self) -> bool:
        return all(len(c) == 1 for c in self.classes)

    def class_names(self) -> list[list[str]]:
        names = self.pocset.names
        return [sorted(names[h] for h in c) for c in self.classes]


@dataclass
class AdmissibilityReport:
    admissible: bool
    violations: list[tuple[str, tuple[str, ...]]] = field(default_factory=list)

    def failed_axioms(self) -> set[str]:
        return {axiom for axiom, _ in self.violations}

    def lines(self) -> list[str]:
        out = []
        for axiom in ("AER1", "AER2", "AER3", "AER4"):
            hits = [w for a, w in self.violations if a == axiom]
            out.append(f"{axiom} OK" if not hits else f"{axiom} FAIL {' '.join(hits[0])}")
        return out


def check_admissible(rel: EquivalenceRelation) -> AdmissibilityReport:
    p = rel.pocset
    names = p.names
    cls = rel.class_of
    violations = []
    for h in p.halfspaces():
        if cls[h] == cls[h ^ 1]:
            violations.append(("AER1", (names[h], names[h ^ 1])))
    for h in p.halfspaces():
        for k in p.halfspaces():
            if h < k and cls[h] == cls[k] and cls[h ^ 1] != cls[k ^ 1]:
                violations.append(("AER2", (names[h], names[k])))
    for j in p.hyperplanes():
        for k in range(j + 1, p.n_hyperplanes):
            if not p.transverse(j, k):
                continue
            for h in (2 * j, 2 * j + 1):
                for l in (2 * k, 2 * k + 1):
                    if cls[h] == cls[l]:
                        violations.append(("AER3", (names[h], names[l])))
    for j in p.hyperplanes():
        klass = rel.hyperplane_class_mask(j)
        for k in bits(klass):
            if k <= j or p.transverse(j, k):
                continue
            if p.separator_mask(j, k) & klass:
                continue
            h, l = p.facing_orientation_of_pair(j, k)
            if cls[h] != cls[l]:
                violations.append(("AER4", (names[h], names[l])))
    return AdmissibilityReport(admissible=not violations, violations=violations)


@dataclass(frozen=True, eq=False)
class Quotient:
    relation: EquivalenceRelation
    pocset: Pocset
    projection: tuple[int, ...]

    def preimage(self, c: int) -> frozenset[int]:
        return frozenset(h for h, q in enumerate(self.projection) if q == c)

    def preimage_hyperplanes(self, cj: int) -> frozenset[int]:
        return frozenset(h >> 1 for h, q in enumerate(self.projection) if q >> 1 == cj)


def class_name(index: int, members: Iterable[str]) -> str:
    return "_".join([f"q{index}", *sorted(members)])


def quotient_order(rel: EquivalenceRelation) -> set[tuple[int, int]]:
    """Strict class order, literally from its two-clause definition.

    ``[h] < [k]`` iff every pair of representatives has disjoint hyperplanes
    and every pair that no hyperplane of ``[h] u [k]`` separates is ordered
    ``h < k``.
    """
    p = rel.pocset
    classes = rel.classes
    cls = rel.class_of
    hyp_mask = []
    for c in classes:
        mask = 0
        for h in c:
            mask |= 1 << (h >> 1)
        hyp_mask.append(mask)
    order = set()
    for a, A in enumerate(classes):
        star_a = cls[next(iter(A)) ^ 1]
        for b, B in enumerate(classes):
            if b == a or b == star_a:
                continue
            union = hyp_mask[a] | hyp_mask[b]
            ok = True
            for h in A:
                for k in B:
                    if p.transverse(h >> 1, k >> 1):
                        ok = False
                        break
                    if not p.separator_mask(h >> 1, k >> 1) & union and not p.lt(h, k):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                order.add((a, b))
    return order


def quotient(rel: EquivalenceRelation, check: bool = True) -> Quotient:
    if check:
        report = check_admissible(rel)
        if not report.admissible:
            axiom, witness = report.violations[0]
            raise NotAdmissible(f"relation violates {axiom} at {' '.join(witness)}", witness=(axiom, *witness))
    p = rel.pocset
    classes = rel.classes
    cls = rel.class_of
    names = [class_name(i, (p.names[h] for h in c)) for i, c in enumerate(classes)]
    pairs = []
    for i, c in enumerate(classes):
        partner = cls[next(iter(c)) ^ 1]
        if i < partner:
            pairs.append((names[i], names[partner]))
    order = quotient_order(rel)
    raw = RawPocset(pairs=pairs, order=[(names[a], names[b]) for a, b in sorted(order)])
    try:
        q = validate_pocset(raw)
    except PocsetError as exc:
        raise LemmaViolation(f"quotient by an admissible relation is not a pocset: {exc}") from exc
    relation_size = sum(bin(m).count("1") for m in q.up)
    if relation_size != len(order):
        raise LemmaViolation("quotient order is not transitively closed")
    projection = tuple(q.index[names[cls[h]]] for h in p.halfspaces())
    return Quotient(relation=rel, pocset=q, projection=projection)


def quotient_pocset(rel: EquivalenceRelation) -> tuple[Pocset, tuple[int, ...]]:
    q = quotient(rel)
    return q.pocset, q.projection


def quotient_transversality_witness(Q: Quotient, c1: int, c2: int) -> tuple:
    """Why two quotient halfspaces are transverse, in terms of representatives.

    Returns one of ``("transverse", h, k)``, ``("splits_first", k, h1, h2)``
    (a hyperplane of ``c2`` separates two representatives of ``c1``) or
    ``("splits_second", h, k1, k2)``.  Halfspaces are ids in the original
    pocset.
    """
    q = Q.pocset
    if not q.transverse(c1 >> 1, c2 >> 1):
        raise NotTransverseInQuotient(
            f"{q.names[c1]} and {q.names[c2]} are not transverse in the quotient", witness=(q.names[c1], q.names[c2])
        )
    p = Q.relation.pocset
    A = sorted(Q.preimage(c1))
    B = sorted(Q.preimage(c2))
    for h in A:
        for k in B:
            if p.transverse(h >> 1, k >> 1):
                return ("transverse", h, k)
    for k in B:
        for i, h1 in enumerate(A):
            for h2 in A[i + 1:]:
                if h1 >> 1 != h2 >> 1 and (p.separator_mask(h1 >> 1, h2 >> 1) >> (k >> 1)) & 1:
                    return ("splits_first", k, h1, h2)
    for h in A:
        for i, k1 in enumerate(B):
            for k2 in B[i + 1:]:
                if k1 >> 1 != k2 >> 1 and (p.separator_mask(k1 >> 1, k2 >> 1) >> (h >> 1)) & 1:
                    return ("splits_second", h, k1, k2)
    raise LemmaViolation(
        f"no witness for transversality of {q.names[c1]} and {q.names[c2]}", witness=(q.names[c1], q.names[c2])
    )


def interval_in_quotient(Q: Quotient, c1: int, c2: int) -> frozenset[int]:
    """Quotient halfspaces between ``c1`` and ``c2``, checked against a lift.

    Every class in the interval must have a representative in the interval
    between a fixed pair of representatives of ``c1 <= c2`` that no hyperplane
    of either class separates.
    """
    q = Q.pocset
    result = q.interval(c1, c2)
    if c1 == c2:
        return result
    p = Q.relation.pocset
    A, B = Q.preimage(c1), Q.preimage(c2)
    union = 0
    for h in A | B:
        union |= 1 << (h >> 1)
    lift = next(
        ((h, l) for h in sorted(A) for l in sorted(B) if not p.separator_mask(h >> 1, l >> 1) & union),
        None,
    )
    if lift is None or not p.lt(*lift):
        raise LemmaViolation(f"no ordered inseparable lift of {q.names[c1]} <= {q.names[c2]}")
    lifted = p.interval(*lift)
    for c in result:
        if not Q.preimage(c) & lifted:
            raise LemmaViolation(f"class {q.names[c]} has no representative in the lifted interval")
    return result
