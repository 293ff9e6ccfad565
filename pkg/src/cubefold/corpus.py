"""Named fixtures and seeded random instances.

Fixtures are small hand-built pocsets, actions and maps with known answers.
Random generators take a :class:`random.Random` so that every instance is
reproducible from a seed; nothing else in the package uses randomness.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .action import GroupAction, closure, validate_action
from .errors import CubefoldError, InversionCreated, PocsetError
from .folding import ResolutionState, descend_permutation
from .maps import PocsetMap
from .pocset import Arrangement, Pocset, RawPocset, chain, pocset_from, validate_pocset
from .quotient import EquivalenceRelation, check_admissible, quotient


# -- fixtures --------------------------------------------------------------


def transverse_pocset(n: int, prefix: str = "x") -> Pocset:
    """``n`` pairwise transverse hyperplanes: the dual is an ``n``-cube."""
    return pocset_from([(f"{prefix}{i}", f"{prefix.upper()}{i}") for i in range(n)])


def chain_pocset(n: int) -> Pocset:
    return chain([f"c{i}" for i in range(n)])


def square_pocset() -> Pocset:
    return pocset_from([("x", "X"), ("y", "Y")])


def fan_pocset(n: int = 4) -> Pocset:
    """``k0 .. k(n-1)`` with ``K_i <= k_(i+2)`` (indices mod ``n``)."""
    pairs = [(f"k{i}", f"K{i}") for i in range(n)]
    order = [(f"K{i}", f"k{(i + 2) % n}") for i in range(n)]
    return pocset_from(pairs, order)


def rotation(n: int, step: int = 1, lower: str = "k", upper: str = "K") -> dict[str, str]:
    moves = {}
    for i in range(n):
        moves[f"{lower}{i}"] = f"{lower}{(i + step) % n}"
        moves[f"{upper}{i}"] = f"{upper}{(i + step) % n}"
    return moves


def fan_action(p: Optional[Pocset] = None, step: int = 1) -> GroupAction:
    p = p or fan_pocset()
    return validate_action(p, {"a": rotation(p.n_hyperplanes, step)})


def cycle_pocset(n: int = 8) -> Pocset:
    """``t0 .. t(n-1)`` with ``T_i <= t_j`` whenever ``i`` and ``j`` are at
    cyclic distance at least two; neighbours are transverse."""
    pairs = [(f"t{i}", f"T{i}") for i in range(n)]
    order = [
        (f"T{i}", f"t{j}") for i in range(n) for j in range(n) if min((i - j) % n, (j - i) % n) >= 2
    ]
    return pocset_from(pairs, order)


@dataclass(frozen=True, eq=False)
class Fixture:
    """An equivariant map with both actions, as a ready-made fold input."""

    name: str
    action: GroupAction
    map: PocsetMap
    target_action: GroupAction

    def state(self) -> ResolutionState:
        return ResolutionState.create(self.action, self.map, self.target_action)


def chain_fold_fixture() -> Fixture:
    """Chain ``a <= b <= c`` onto a square, identifying ``A`` with ``c``."""
    p = chain("abc")
    q = square_pocset()
    f = PocsetMap.from_names(p, q, {"A": "x", "b": "y", "c": "x"})
    return Fixture("chain_fold", validate_action(p, {}), f, validate_action(q, {}))


def chain_embedding_fixture() -> Fixture:
    p, q = chain("ab"), chain("abc")
    f = PocsetMap.from_names(p, q, {"a": "a", "b": "b"})
    return Fixture("chain_embedding", validate_action(p, {}), f, validate_action(q, {}))


def nested_fold_fixture() -> Fixture:
    """Chain ``a < b < c < d`` identifying ``A ~ d`` (outer) and ``B ~ c`` (inner)."""
    p = chain("abcd")
    q = chain("xy")
    f = PocsetMap.from_names(p, q, {"A": "y", "d": "y", "B": "x", "c": "x"})
    return Fixture("nested_fold", validate_action(p, {}), f, validate_action(q, {}))


def twin_chain_pocset() -> Pocset:
    pairs = [(x, x.upper()) for x in "abcxyz"]
    order = [("a", "b"), ("b", "c"), ("x", "y"), ("y", "z")]
    return pocset_from(pairs, order)


SWAP = {"a": "x", "b": "y", "c": "z", "x": "a", "y": "b", "z": "c"}
SWAP.update({k.upper(): v.upper() for k, v in list(SWAP.items())})


def twin_chain_fixture() -> Fixture:
    """Two transverse chains swapped by an involution, each folded onto a square."""
    p = twin_chain_pocset()
    q = pocset_from([("p", "P"), ("q", "Q"), ("u", "U"), ("v", "V")])
    f = PocsetMap.from_names(p, q, {"A": "p", "c": "p", "b": "q", "X": "u", "z": "u", "y": "v"})
    swap = {"p": "u", "q": "v", "u": "p", "v": "q", "P": "U", "Q": "V", "U": "P", "V": "Q"}
    return Fixture("twin_chain", validate_action(p, {"s": SWAP}), f, validate_action(q, {"s": swap}))


def fan_fold_fixture() -> Fixture:
    """Two orbits of an 8-cycle pocset, folded pairwise onto the fan target.

    ``Z/4`` acts on the cycle by shifting two places and on the target by
    half-turns, so each target hyperplane is fixed by the square of the
    generator while its preimages are not.
    """
    p = cycle_pocset(8)
    q = fan_pocset(4)
    f = PocsetMap.from_names(p, q, {f"t{i}": f"k{i % 4}" for i in range(8)})
    dom = validate_action(p, {"a": rotation(8, 2, "t", "T")})
    cod = validate_action(q, {"a": rotation(4, 2)})
    return Fixture("fan_fold", dom, f, cod)


def am2_violation():
    """Two transverse hyperplanes collapsed onto one: fails AM2 at ``A B``."""
    p = pocset_from([("a", "A"), ("b", "B")])
    q = pocset_from([("x", "X")])
    return PocsetMap.from_names(p, q, {"a": "x", "b": "x"})


def am3_violation():
    """Chain ``a < b`` with both mapped to ``x``: the facing pair ``A, b``
    has distinct images, failing AM3."""
    p = chain("ab")
    q = pocset_from([("x", "X")])
    return PocsetMap.from_names(p, q, {"a": "x", "b": "x"})


def aer3_violation() -> EquivalenceRelation:
    """Identify two transverse halfspaces: fails AER3 at ``A B``."""
    p = pocset_from([("a", "A"), ("b", "B")])
    return EquivalenceRelation.from_pairs(p, [("a", "b")])


FIXTURES = {
    "chain_fold": chain_fold_fixture,
    "chain_embedding": chain_embedding_fixture,
    "nested_fold": nested_fold_fixture,
    "twin_chain": twin_chain_fixture,
    "fan_fold": fan_fold_fixture,
}


# -- random instances ------------------------------------------------------


def _try_add(pairs, order, candidate) -> Optional[Pocset]:
    try:
        return validate_pocset(RawPocset(pairs=pairs, order=order + candidate))
    except PocsetError:
        return None


def random_pocset(rng: random.Random, n_hyperplanes: int, density: float | None = None) -> Pocset:
    """Random relations added one at a time, each kept only if the result is
    still a pocset."""
    density = rng.uniform(0.05, 0.5) if density is None else density
    pairs = [(f"h{i}", f"H{i}") for i in range(n_hyperplanes)]
    names = [x for pair in pairs for x in pair]
    order: list[tuple[str, str]] = []
    p = validate_pocset(RawPocset(pairs=pairs, order=[]))
    attempts = int(density * n_hyperplanes * (n_hyperplanes - 1))
    for _ in range(attempts):
        a, b = rng.sample(names, 2)
        if a.lower() == b.lower():
            continue
        q = _try_add(pairs, order, [(a, b)])
        if q is not None:
            order.append((a, b))
            p = q
    return p


def random_g_pocset(rng: random.Random, base: int, m: int, density: float | None = None):
    """A pocset on ``base * m`` hyperplanes with ``Z/m`` shifting copies.

    Relations are added in whole orbits.  Returns the pocset and its action
    (no generators when ``m == 1``).
    """
    density = rng.uniform(0.1, 0.6) if density is None else density
    pairs = [(f"h{i}r{r}", f"H{i}r{r}") for i in range(base) for r in range(m)]
    order: list[tuple[str, str]] = []
    p = validate_pocset(RawPocset(pairs=pairs, order=[]))
    n = base * m
    attempts = max(1, int(density * n * (n - 1) / m))
    for _ in range(attempts):
        i, k = rng.randrange(base), rng.randrange(base)
        d = rng.randrange(m)
        if i == k and d == 0:
            continue
        x = rng.choice("hH")
        y = rng.choice("hH")
        orbit = [(f"{x}{i}r{r}", f"{y}{k}r{(r + d) % m}") for r in range(m)]
        q = _try_add(pairs, order, orbit)
        if q is not None:
            order.extend(orbit)
            p = q
    gens = {}
    if m > 1:
        shift = {}
        for i in range(base):
            for r in range(m):
                for c in "hH":
                    shift[f"{c}{i}r{r}"] = f"{c}{i}r{(r + 1) % m}"
        gens["g"] = shift
    return p, validate_action(p, gens)


def _descends_without_inversion(action: GroupAction, rel: EquivalenceRelation) -> bool:
    Q = quotient(rel, check=False)
    size = Q.pocset.n_halfspaces
    try:
        perms = [descend_permutation(g, Q.projection, size) for g in action.generators.values()]
    except CubefoldError:
        return False
    return all(g[c] != c ^ 1 for g in closure(perms, size) for c in range(size))


def random_admissible_relation(
    rng: random.Random,
    p: Pocset,
    action: GroupAction | None = None,
    merges: int | None = None,
) -> EquivalenceRelation:
    """Merge random facing pairs (whole orbits at a time) while the relation
    stays admissible and, with an action, descends without inversion."""
    group = action.closure if action is not None else [tuple(p.halfspaces())]
    facing = [
        (h, k)
        for h in p.halfspaces()
        for k in p.halfspaces()
        if h < k and p.classify_halfspaces(h, k) == Arrangement.FACING
    ]
    rng.shuffle(facing)
    merges = rng.randint(1, 4) if merges is None else merges
    chosen: list[tuple[int, int]] = []
    rel = EquivalenceRelation.identity(p)
    accepted = 0
    for h, k in facing:
        if accepted >= merges:
            break
        if rel.equivalent(h, k):
            continue
        trial = chosen + [(g[h], g[k]) for g in group]
        candidate = EquivalenceRelation.from_pairs(p, trial)
        if not check_admissible(candidate).admissible:
            continue
        if action is not None and action.generators and not _descends_without_inversion(action, candidate):
            continue
        chosen, rel = trial, candidate
        accepted += 1
    return rel


def quotient_resolution(action: GroupAction, rel: EquivalenceRelation) -> ResolutionState:
    """The quotient map by an admissible invariant relation, as a fold input."""
    Q = quotient(rel)
    size = Q.pocset.n_halfspaces
    gens = {name: descend_permutation(g, Q.projection, size) for name, g in action.generators.items()}
    try:
        target_action = validate_action(Q.pocset, gens)
    except CubefoldError as exc:
        raise InversionCreated(f"relation does not descend: {exc}") from exc
    f = PocsetMap(action.pocset, Q.pocset, Q.projection)
    return ResolutionState.create(action, f, target_action)


def random_resolution(rng: random.Random, m: int, base: int | None = None) -> ResolutionState:
    if base is None:
        base = {1: rng.randint(3, 7), 2: rng.randint(2, 4), 4: 2}.get(m, 2)
    p, action = random_g_pocset(rng, base, m)
    rel = random_admissible_relation(rng, p, action)
    return quotient_resolution(action, rel)


def resolution_corpus(seed: int, count: int, groups=(1, 2, 4)) -> list[ResolutionState]:
    rng = random.Random(seed)
    return [random_resolution(rng, groups[i % len(groups)]) for i in range(count)]


def pocset_corpus(seed: int, count: int, max_hyperplanes: int = 12) -> list[Pocset]:
    rng = random.Random(seed)
    return [random_pocset(rng, rng.randint(1, max_hyperplanes)) for _ in range(count)]


def relation_corpus(seed: int, count: int, max_hyperplanes: int = 10) -> list[EquivalenceRelation]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        p = random_pocset(rng, rng.randint(2, max_hyperplanes))
        out.append(random_admissible_relation(rng, p))
    return out
