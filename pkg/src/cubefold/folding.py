"""Folding equivariant resolutions into embeddings.

A :class:`ResolutionState` holds a pocset with a group action and an
equivariant resolution onto a target pocset.  The group is fixed once, as
the joint closure of the paired generators on domain and target, and each
element is carried along as a pair of permutations that descends through
every quotient.  That keeps stabilizer comparisons meaningful from one step
to the next.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .action import GroupAction, Perm, check_equivariant, joint_closure, validate_action
from .dual import CubeComplex, dual_complex, is_ultrafilter
from .errors import (
    Inversion,
    InversionCreated,
    LemmaViolation,
    MapError,
    NotAutomorphism,
    NotFoldable,
    NotIdentified,
    NotResolution,
    OrbitMapNotInjective,
)
from .maps import PocsetMap, classify_map, induced_complex_map, kernel_relation
from .pocset import Arrangement, Pocset, bits
from .quotient import EquivalenceRelation, Quotient, _UnionFind, check_admissible, quotient

GroupElement = tuple[Perm, Perm]


@dataclass(frozen=True, eq=False)
class ResolutionState:
    pocset: Pocset
    action: GroupAction
    map_to_target: PocsetMap
    target_action: GroupAction
    group: tuple[GroupElement, ...]

    @classmethod
    def create(cls, action: GroupAction, f: PocsetMap, target_action: GroupAction) -> "ResolutionState":
        """Validate an equivariant resolution and fix its group."""
        if f.domain is not action.pocset or f.codomain is not target_action.pocset:
            raise MapError("map and actions are on different pocsets")
        c = classify_map(f)
        if not c.is_resolution:
            failed = [a for a, (ok, _) in c.am_report.items() if not ok]
            detail = f"fails {', '.join(failed)}" if failed else c.resolution_reason
            raise NotResolution(f"not a resolution: {detail}", witness=tuple(failed))
        if not check_equivariant(action, target_action, f.assign):
            raise MapError("map is not equivariant")
        return cls(action.pocset, action, f, target_action, joint_closure(action, target_action))

    @property
    def target(self) -> Pocset:
        return self.target_action.pocset

    def image_hyperplane(self, j: int) -> int:
        return self.map_to_target.assign[2 * j] >> 1

    def identified_pairs(self) -> list[tuple[int, int]]:
        """Unordered pairs of distinct hyperplanes with the same image."""
        n = self.pocset.n_hyperplanes
        return [
            (j, k) for j in range(n) for k in range(j + 1, n) if self.image_hyperplane(j) == self.image_hyperplane(k)
        ]

    def fibre_mask(self, j: int) -> int:
        target = self.image_hyperplane(j)
        mask = 0
        for k in self.pocset.hyperplanes():
            if self.image_hyperplane(k) == target:
                mask |= 1 << k
        return mask

    def domain_orbit_of(self) -> list[int]:
        """Orbit index of each domain hyperplane."""
        return _orbit_labels(self.pocset.n_hyperplanes, [g for g, _ in self.group])

    def target_orbit_of(self) -> list[int]:
        return _orbit_labels(self.target.n_hyperplanes, [g for _, g in self.group])

    def orbit_map_injective(self) -> bool:
        return self.orbit_collision() is None

    def orbit_collision(self) -> Optional[tuple[int, int]]:
        """Least pair of hyperplanes in distinct orbits with the same image."""
        orbit = self.domain_orbit_of()
        for j, k in self.identified_pairs():
            if orbit[j] != orbit[k]:
                return j, k
        return None


def _orbit_labels(n: int, perms) -> list[int]:
    label = [-1] * n
    count = 0
    for j in range(n):
        if label[j] >= 0:
            continue
        for g in perms:
            label[g[2 * j] >> 1] = count
        label[j] = count
        count += 1
    return label


# -- foldable pairs -------------------------------------------------------


def find_foldable_pairs(st: ResolutionState) -> list[tuple[int, int]]:
    """Elementary foldable pairs, as halfspace ids ``(h1, h2)`` with ``h1 < h2``.

    Facing halfspaces with equal image, whose hyperplanes no other preimage
    of their common image separates, and with no two equivalent hyperplanes
    both separating them.
    """
    p = st.pocset
    a = st.map_to_target.assign
    image = [st.image_hyperplane(j) for j in p.hyperplanes()]
    out = []
    for j, k in st.identified_pairs():
        if p.transverse(j, k):
            continue
        h1, h2 = p.facing_orientation_of_pair(j, k)
        if a[h1] != a[h2]:
            continue
        between = p.separator_mask(j, k)
        if between & st.fibre_mask(j):
            continue
        seen = set()
        clash = False
        for x in bits(between):
            if image[x] in seen:
                clash = True
                break
            seen.add(image[x])
        if not clash:
            out.append((min(h1, h2), max(h1, h2)))
    return sorted(out)


def find_foldable_pairs_by_halfspaces(st: ResolutionState) -> list[tuple[int, int]]:
    """The same set, straight from the halfspace formulation: facing pairs
    with equal image and no other facing equal-image pair below them."""
    p = st.pocset
    a = st.map_to_target.assign
    facing = [
        (h, k)
        for h in p.halfspaces()
        for k in p.halfspaces()
        if h >> 1 != k >> 1 and a[h] == a[k] and p.classify_halfspaces(h, k) == Arrangement.FACING
    ]
    out = set()
    for h1, h2 in facing:
        if any((k1, k2) != (h1, h2) and p.le(k1, h1) and p.le(k2, h2) for k1, k2 in facing):
            continue
        out.add((min(h1, h2), max(h1, h2)))
    return sorted(out)


# -- a single fold --------------------------------------------------------


@dataclass
class FoldStep:
    pair: tuple[int, int]
    before: ResolutionState
    relation: EquivalenceRelation
    quotient: Quotient
    result: ResolutionState
    checks: dict[str, Optional[bool]]
    cobounded_witnesses: list[tuple[int, int, int]] = field(default_factory=list)
    complexity: int = 0
    phase: int = 0
    after_complex: Optional[CubeComplex] = field(default=None, repr=False)

    @property
    def projection(self) -> tuple[int, ...]:
        return self.quotient.projection

    def pair_names(self) -> list[str]:
        return [self.before.pocset.names[h] for h in self.pair]

    def to_dict(self) -> dict:
        return {
            "pair": self.pair_names(),
            "phase": self.phase,
            "relation_classes": [c for c in self.relation.class_names() if len(c) > 1],
            "quotient_pocset": self.result.pocset.to_text(),
            "checks": dict(self.checks),
            "complexity": self.complexity,
        }


def fold_relation(st: ResolutionState, h1: int, h2: int) -> EquivalenceRelation:
    """Least equivalence containing ``h1 ~ h2`` that is closed under the
    group and under complementation."""
    p = st.pocset
    uf = _UnionFind(p.n_halfspaces)
    for g, _ in st.group:
        uf.union(g[h1], g[h2])
        uf.union(g[h1] ^ 1, g[h2] ^ 1)
    rel = EquivalenceRelation.from_labels(p, [uf.find(h) for h in p.halfspaces()])
    for g, _ in st.group:
        for c in rel.classes:
            if len({rel.class_of[g[h]] for h in c}) != 1:
                raise LemmaViolation("fold relation is not group invariant")
    return rel


def _check_classes_facing(rel: EquivalenceRelation) -> bool:
    """Each class or its complement class consists of pairwise facing
    halfspaces on distinct hyperplanes."""
    p = rel.pocset

    def facing(members) -> bool:
        members = sorted(members)
        if len({h >> 1 for h in members}) != len(members):
            return False
        return all(
            p.classify_halfspaces(h, k) == Arrangement.FACING for i, h in enumerate(members) for k in members[i + 1:]
        )

    for c in rel.classes:
        partner = rel.classes[rel.class_of[min(c) ^ 1]]
        if not (facing(c) or facing(partner)):
            return False
        if not p.is_facing_collection(h >> 1 for h in c):
            return False
    return True


def descend_permutation(perm: Perm, projection, size: int) -> Perm:
    out: list[Optional[int]] = [None] * size
    for h, c in enumerate(projection):
        image = projection[perm[h]]
        if out[c] is None:
            out[c] = image
        elif out[c] != image:
            raise LemmaViolation("group element does not descend to the quotient")
    return tuple(out)


def _descend_action(st: ResolutionState, Q: Quotient):
    q = Q.pocset
    size = q.n_halfspaces
    gens = {name: descend_permutation(g, Q.projection, size) for name, g in st.action.generators.items()}
    try:
        action = validate_action(q, gens)
    except Inversion as exc:
        raise InversionCreated(f"folding creates an inversion: {exc}", witness=exc.witness) from exc
    except NotAutomorphism as exc:
        raise LemmaViolation(f"descended generator is not an automorphism: {exc}", witness=exc.witness) from exc
    group = tuple((descend_permutation(g, Q.projection, size), g2) for g, g2 in st.group)
    return action, group


def factorization_holds(f0: PocsetMap, projection, f1: PocsetMap) -> bool:
    """Whether the class bijection between the kernel quotients of ``f0`` and
    ``f1`` (after the fold) is a pocset isomorphism, by exhaustive comparison."""
    Q0 = quotient(kernel_relation(f0))
    Q1 = quotient(kernel_relation(f1))
    n = Q0.pocset.n_halfspaces
    if Q1.pocset.n_halfspaces != n:
        return False
    bij: list[Optional[int]] = [None] * n
    for h, a in enumerate(Q0.projection):
        b = Q1.projection[projection[h]]
        if bij[a] is None:
            bij[a] = b
        elif bij[a] != b:
            return False
    if sorted(bij) != list(range(n)):
        return False
    p0, p1 = Q0.pocset, Q1.pocset
    for a in range(n):
        if bij[a ^ 1] != bij[a] ^ 1:
            return False
        for b in range(n):
            if p0.lt(a, b) != p1.lt(bij[a], bij[b]):
                return False
    return True


def cobounded_witnesses(step_quotient: Quotient, X_before: CubeComplex, X_after: CubeComplex, vertex_map) -> list:
    """For each maximal cube after the fold, a vertex before it landing there.

    The vertex is built by orienting the preimages of folded cube hyperplanes
    so they face each other, other cube preimages arbitrarily (canonical
    side), and every remaining hyperplane towards the preimages of a cube
    hyperplane it misses.  The result is then checked to be an ultrafilter
    whose image lies in the cube, and the cube is independently checked to
    meet the image of the vertex map at all.

    Returns ``(cube index, source vertex, image vertex)`` triples; raises
    :class:`LemmaViolation` when the construction fails.
    """
    p = X_before.pocset
    q = X_after.pocset
    proj = step_quotient.projection
    hyp_image = [proj[2 * j] >> 1 for j in p.hyperplanes()]
    preimages: dict[int, list[int]] = {}
    for j, c in enumerate(hyp_image):
        preimages.setdefault(c, []).append(j)
    image_set = set(vertex_map)
    table = []
    for index, (corners, hyps) in enumerate(X_after.maximal_cubes):
        if not image_set.intersection(corners):
            raise LemmaViolation(f"maximal cube {index} contains no image vertex", witness=(index,))
        cube = set(hyps)
        orientation = 0
        for c in hyps:
            pre = preimages[c]
            if len(pre) == 1:
                continue
            facing = p.facing_orientation(pre)
            if facing is None:
                raise LemmaViolation(f"preimages of {q.hyperplane_name(c)} are not facing")
            for j, h in facing.items():
                orientation |= (h & 1) << j
        for j in p.hyperplanes():
            if hyp_image[j] in cube:
                continue
            side = None
            for c in hyps:
                if q.transverse(hyp_image[j], c):
                    continue
                sides = [o for o in (2 * j, 2 * j + 1) if all(p.contains_hyperplane(o, k) for k in preimages[c])]
                if sides:
                    side = sides[0]
                    break
            if side is None:
                raise LemmaViolation(
                    f"no side of {p.hyperplane_name(j)} contains the preimages of a cube hyperplane",
                    witness=(index, p.hyperplane_name(j)),
                )
            orientation |= (side & 1) << j
        if not is_ultrafilter(p, orientation):
            raise LemmaViolation(f"witness orientation for cube {index} is not an ultrafilter", witness=(index,))
        x = X_before.index[orientation]
        y = vertex_map[x]
        if y not in corners:
            raise LemmaViolation(f"witness for cube {index} lands outside it", witness=(index, x, y))
        table.append((index, x, y))
    return table


def check_cobounded_preserved(step: FoldStep, X_before=None, X_after=None, F=None) -> list:
    X_before = X_before or dual_complex(step.before.pocset)
    X_after = X_after or dual_complex(step.result.pocset)
    if F is None:
        phi = PocsetMap(step.before.pocset, step.result.pocset, step.projection)
        F = induced_complex_map(phi, X_before, X_after, check=False).vertex_map
    return cobounded_witnesses(step.quotient, X_before, X_after, F)


def elementary_fold(
    st: ResolutionState,
    pair: tuple[int, int],
    *,
    verify: bool = True,
    vertex_cap: int | None = None,
    X_before: CubeComplex | None = None,
) -> FoldStep:
    h1, h2 = pair
    if (min(h1, h2), max(h1, h2)) not in find_foldable_pairs(st):
        p = st.pocset
        raise NotFoldable(
            f"{p.names[h1]} and {p.names[h2]} are not an elementary foldable pair", witness=(p.names[h1], p.names[h2])
        )
    checks: dict[str, Optional[bool]] = {}
    rel = fold_relation(st, h1, h2)

    checks["classes_facing"] = _check_classes_facing(rel)
    if not checks["classes_facing"]:
        raise LemmaViolation("a fold class is not a facing collection")
    report = check_admissible(rel)
    checks["relation_admissible"] = report.admissible
    if not report.admissible:
        axiom, witness = report.violations[0]
        raise LemmaViolation(f"fold relation violates {axiom} at {' '.join(witness)}", witness=(axiom, *witness))
    Q = quotient(rel)
    action, group = _descend_action(st, Q)
    checks["action_descends"] = True

    f0 = st.map_to_target
    assign: list[Optional[int]] = [None] * Q.pocset.n_halfspaces
    for h, c in enumerate(Q.projection):
        if assign[c] is not None and assign[c] != f0.assign[h]:
            raise LemmaViolation("fold identifies halfspaces with different images")
        assign[c] = f0.assign[h]
    f1 = PocsetMap(Q.pocset, f0.codomain, tuple(assign))
    c1 = classify_map(f1)
    checks["induced_map_resolution"] = c1.is_resolution
    if not c1.is_resolution:
        raise LemmaViolation(f"induced map is not a resolution ({c1.resolution_reason})")
    checks["induced_map_equivariant"] = check_equivariant(action, st.target_action, f1.assign)
    if not checks["induced_map_equivariant"]:
        raise LemmaViolation("induced map is not equivariant")
    result = ResolutionState(Q.pocset, action, f1, st.target_action, group)

    step = FoldStep(pair=(min(h1, h2), max(h1, h2)), before=st, relation=rel, quotient=Q, result=result, checks=checks)
    if verify:
        checks["factorization"] = factorization_holds(f0, Q.projection, f1)
        if not checks["factorization"]:
            raise LemmaViolation("kernel quotients before and after the fold differ")
        Xb = X_before or dual_complex(st.pocset, vertex_cap)
        Xa = dual_complex(Q.pocset, vertex_cap)
        phi = PocsetMap(st.pocset, Q.pocset, Q.projection)
        F = induced_complex_map(phi, Xb, Xa, check=False)
        up, _ = F.distance_changes()
        checks["distance_non_increasing"] = up == 0
        if up:
            raise LemmaViolation(f"fold map increases {up} vertex distances")
        step.cobounded_witnesses = cobounded_witnesses(Q, Xb, Xa, F.vertex_map)
        checks["cobounded"] = True
        step.after_complex = Xa
    else:
        for name in ("factorization", "distance_non_increasing", "cobounded"):
            checks[name] = None
    step.complexity = complexity(result, strict=False).value
    return step


# -- complexity -----------------------------------------------------------


@dataclass
class ComplexityTerm:
    target_hyperplane: int
    representative: int
    missing: tuple[int, ...]


@dataclass
class Complexity:
    value: int
    terms: list[ComplexityTerm]

    def named(self, st: ResolutionState) -> list[dict]:
        return [
            {
                "target": st.target.hyperplane_name(t.target_hyperplane),
                "representative": st.pocset.hyperplane_name(t.representative),
                "missing": len(t.missing),
            }
            for t in self.terms
        ]


def complexity(st: ResolutionState, strict: bool = True) -> Complexity:
    """Stabilizer elements of image hyperplanes that miss a chosen preimage.

    One term per target orbit meeting the image, using the least hyperplane
    of the orbit and its least preimage.  Every element of the target
    stabilizer counts (the group is finite, so the whole stabilizer serves as
    its generating set).
    """
    if strict and not st.orbit_map_injective():
        j, k = st.orbit_collision()
        p = st.pocset
        raise OrbitMapNotInjective(
            f"{p.hyperplane_name(j)} and {p.hyperplane_name(k)} lie in distinct orbits with the same image",
            witness=(p.hyperplane_name(j), p.hyperplane_name(k)),
        )
    image = {st.image_hyperplane(j) for j in st.pocset.hyperplanes()}
    orbit = st.target_orbit_of()
    terms = []
    seen = set()
    for t in sorted(image):
        if orbit[t] in seen:
            continue
        seen.add(orbit[t])
        rep = min(j for j in st.pocset.hyperplanes() if st.image_hyperplane(j) == t)
        missing = tuple(
            i for i, (g, g2) in enumerate(st.group) if g2[2 * t] >> 1 == t and g[2 * rep] >> 1 != rep
        )
        terms.append(ComplexityTerm(t, rep, missing))
    return Complexity(sum(len(t.missing) for t in terms), terms)


# -- sequences of folds ---------------------------------------------------


def fold_to_target(
    st: ResolutionState,
    h: int,
    k: int,
    *,
    verify: bool = True,
    vertex_cap: int | None = None,
    phase: int = 0,
) -> list[FoldStep]:
    """Elementary folds until halfspaces ``h`` and ``k`` are identified.

    Each fold uses a foldable pair among the hyperplanes between ``h`` and
    ``k`` (inclusive), preferring pairs with fewest hyperplanes between them
    and breaking ties lexicographically.
    """
    f = st.map_to_target
    if f.assign[h] != f.assign[k]:
        p = st.pocset
        raise NotIdentified(
            f"{p.names[h]} and {p.names[k]} have different images", witness=(p.names[h], p.names[k])
        )
    steps: list[FoldStep] = []
    if h == k:
        return steps
    budget = _identified_within(st, h >> 1, k >> 1)
    X = None
    while h != k:
        p = st.pocset
        j, l = h >> 1, k >> 1
        window = p.separator_mask(j, l) | 1 << j | 1 << l
        candidates = [
            (bin(p.separator_mask(a >> 1, b >> 1)).count("1"), a, b)
            for a, b in find_foldable_pairs(st)
            if (window >> (a >> 1)) & 1 and (window >> (b >> 1)) & 1
        ]
        if not candidates:
            raise LemmaViolation(
                f"no foldable pair between {p.names[h]} and {p.names[k]}", witness=(p.names[h], p.names[k])
            )
        if len(steps) >= budget:
            raise LemmaViolation("folding between two halfspaces exceeded its step bound")
        _, a, b = min(candidates)
        step = elementary_fold(st, (a, b), verify=verify, vertex_cap=vertex_cap, X_before=X)
        step.phase = phase
        steps.append(step)
        X = step.after_complex
        h, k = step.projection[h], step.projection[k]
        st = step.result
    return steps


def _identified_within(st: ResolutionState, j: int, l: int) -> int:
    p = st.pocset
    window = p.separator_mask(j, l) | 1 << j | 1 << l
    return sum(1 for a, b in st.identified_pairs() if (window >> a) & 1 and (window >> b) & 1)


@dataclass
class FoldTrace:
    initial: ResolutionState
    steps: list[FoldStep]
    final: ResolutionState
    complexity_history: list[int]
    step_bound: int

    @property
    def final_embedding(self) -> PocsetMap:
        return self.final.map_to_target

    def composite_projection(self) -> tuple[int, ...]:
        proj = tuple(self.initial.pocset.halfspaces())
        for step in self.steps:
            proj = tuple(step.projection[x] for x in proj)
        return proj

    def reproduces_input(self) -> bool:
        f = self.initial.map_to_target
        final = self.final.map_to_target.assign
        return all(final[c] == f.assign[h] for h, c in enumerate(self.composite_projection()))

    def all_checks_pass(self) -> bool:
        return all(v is not False for step in self.steps for v in step.checks.values())

    def to_dict(self) -> dict:
        final = self.final
        return {
            "initial_pocset": self.initial.pocset.to_text(),
            "steps": [s.to_dict() for s in self.steps],
            "final_pocset": final.pocset.to_text(),
            "final_map": final.map_to_target.to_text(),
            "final_is_embedding": classify_map(final.map_to_target).is_embedding,
            "reproduces_input": self.reproduces_input(),
            "complexity_history": list(self.complexity_history),
            "step_bound": self.step_bound,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        return trace_text(self.to_dict())


def trace_text(data: dict) -> str:
    lines = [f"steps: {len(data['steps'])} (bound {data['step_bound']})"]
    for i, s in enumerate(data["steps"], 1):
        checks = " ".join(f"{k}={'skip' if v is None else 'ok' if v else 'FAIL'}" for k, v in sorted(s["checks"].items()))
        classes = "; ".join(" ".join(c) for c in s["relation_classes"])
        lines.append(f"step {i} (phase {s['phase']}): fold {s['pair'][0]} {s['pair'][1]}")
        lines.append(f"  classes: {classes}")
        lines.append(f"  checks: {checks}")
        lines.append(f"  complexity: {s['complexity']}")
    lines.append(f"complexity history: {' '.join(map(str, data['complexity_history']))}")
    lines.append(f"final map is an embedding: {'yes' if data['final_is_embedding'] else 'no'}")
    lines.append(f"reproduces input: {'yes' if data['reproduces_input'] else 'no'}")
    return "\n".join(lines) + "\n"


def folding_sequence(st: ResolutionState, *, verify: bool = True, vertex_cap: int | None = None) -> FoldTrace:
    """Fold until the map is an embedding.

    First identify hyperplanes in distinct orbits with equal image until the
    map on orbits is injective, then fold each chosen preimage with its
    translate by a stabilizer element it misses until no such element is
    left.
    """
    initial = st
    bound = len(st.identified_pairs()) + complexity(st, strict=False).value
    steps: list[FoldStep] = []

    def run(h: int, k: int, phase: int) -> None:
        nonlocal st
        new = fold_to_target(st, h, k, verify=verify, vertex_cap=vertex_cap, phase=phase)
        if not new:
            raise LemmaViolation("folding made no progress")
        steps.extend(new)
        st = new[-1].result
        if len(steps) > bound:
            raise LemmaViolation(f"folding exceeded its step bound {bound}")

    while (pair := st.orbit_collision()) is not None:
        j, k = pair
        h = 2 * j
        partner = next(x for x in (2 * k, 2 * k + 1) if st.map_to_target.assign[x] == st.map_to_target.assign[h])
        run(h, partner, 1)

    history = [complexity(st).value]
    while history[-1] > 0:
        c = complexity(st)
        term = next(t for t in c.terms if t.missing)
        g, _ = st.group[term.missing[0]]
        h = 2 * term.representative
        run(h, g[h], 2)
        value = complexity(st).value
        if value >= history[-1]:
            raise LemmaViolation("complexity did not decrease")
        history.append(value)

    if not classify_map(st.map_to_target).is_embedding:
        raise LemmaViolation("folding ended without an embedding")
    trace = FoldTrace(initial, steps, st, history, bound)
    if not trace.reproduces_input():
        raise LemmaViolation("folds followed by the final map do not reproduce the input")
    return trace
