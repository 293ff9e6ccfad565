"""Maps between pocsets: admissibility, embeddings, resolutions, and the
vertex map they induce between dual cube complexes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from . import kernels
from .dual import CubeComplex, dual_complex
from .errors import AM1Violated, LemmaViolation, MapError, NotAdmissible, NotResolution
from .pocset import Arrangement, Pocset, RawPocset, bits, validate_pocset
from .quotient import EquivalenceRelation, check_admissible, quotient

AXIOMS = ("AM1", "AM2", "AM3", "AM4")


@dataclass(frozen=True, eq=False)
class PocsetMap:
    domain: Pocset
    codomain: Pocset
    assign: tuple[int, ...]

    @classmethod
    def from_names(cls, domain: Pocset, codomain: Pocset, mapping: Mapping[str, str], lines=None) -> "PocsetMap":
        """Build from images of one halfspace per pair; complements are derived."""
        assign: list[int | None] = [None] * domain.n_halfspaces
        lines = lines or {}
        for src, dst in mapping.items():
            h, d = domain.id(src), codomain.id(dst)
            for x, y in ((h, d), (h ^ 1, d ^ 1)):
                if assign[x] is not None and assign[x] != y:
                    raise MapError(
                        f"conflicting images for {domain.names[x]}: "
                        f"{codomain.names[assign[x]]} and {codomain.names[y]}",
                        witness=(domain.names[x],),
                        line=lines.get(src),
                    )
                assign[x] = y
        missing = [domain.names[h] for h in domain.halfspaces() if assign[h] is None]
        if missing:
            raise MapError(f"no image for {', '.join(missing)}", witness=tuple(missing))
        return cls(domain, codomain, tuple(assign))

    @classmethod
    def identity(cls, p: Pocset) -> "PocsetMap":
        return cls(p, p, tuple(p.halfspaces()))

    def hyperplane_image(self, j: int) -> int:
        return self.assign[2 * j] >> 1

    def image_hyperplanes(self) -> frozenset[int]:
        return frozenset(h >> 1 for h in self.assign)

    def preimage_hyperplanes(self, j: int) -> frozenset[int]:
        return frozenset(k for k in self.domain.hyperplanes() if self.assign[2 * k] >> 1 == j)

    def __call__(self, h: int) -> int:
        return self.assign[h]

    def then(self, g: "PocsetMap") -> "PocsetMap":
        return PocsetMap(self.domain, g.codomain, tuple(g.assign[x] for x in self.assign))

    def to_text(self) -> str:
        d, c = self.domain, self.codomain
        return "".join(f"map {d.names[2 * j]} -> {c.names[self.assign[2 * j]]}\n" for j in d.hyperplanes())


@dataclass
class MapClassification:
    am_report: dict[str, tuple[bool, tuple[str, ...] | None]]
    is_injective: bool
    is_embedding: bool
    is_resolution: bool
    resolution_reason: str = ""

    @property
    def admissible(self) -> bool:
        return all(ok for ok, _ in self.am_report.values())

    def lines(self) -> list[str]:
        out = []
        for axiom in AXIOMS:
            ok, witness = self.am_report[axiom]
            out.append(f"{axiom} OK" if ok else f"{axiom} FAIL {' '.join(witness)}")
        out.append(f"admissible: {'yes' if self.admissible else 'no'}")
        out.append(f"embedding: {'yes' if self.is_embedding else 'no'}")
        out.append(f"resolution: {'yes' if self.is_resolution else 'no'}")
        return out


def _am_report(f: PocsetMap) -> dict[str, tuple[bool, tuple[str, ...] | None]]:
    d, c, a = f.domain, f.codomain, f.assign
    dn, cn = d.names, c.names
    report = {}

    bad = next((h for h in d.halfspaces() if a[h ^ 1] != a[h] ^ 1), None)
    report["AM1"] = (bad is None, None if bad is None else (dn[bad], dn[bad ^ 1]))

    witness = None
    for j in d.hyperplanes():
        for k in range(j + 1, d.n_hyperplanes):
            if d.transverse(j, k) and not c.transverse(a[2 * j] >> 1, a[2 * k] >> 1):
                witness = (dn[2 * j], dn[2 * k])
                break
        if witness:
            break
    report["AM2"] = (witness is None, witness)

    witness = None
    for j in d.hyperplanes():
        fibre = 0
        for k in f.preimage_hyperplanes(a[2 * j] >> 1):
            fibre |= 1 << k
        for k in bits(fibre):
            if k <= j or d.transverse(j, k) or d.separator_mask(j, k) & fibre:
                continue
            h, l = d.facing_orientation_of_pair(j, k)
            if a[h] != a[l]:
                witness = (dn[h], dn[l])
                break
        if witness:
            break
    report["AM3"] = (witness is None, witness)

    image_hs = set(a)
    image_hyps = {x >> 1 for x in image_hs}
    witness = None
    for j in c.hyperplanes():
        if j in image_hyps:
            continue
        if not any(
            all(c.classify_halfspaces(o, x) != Arrangement.INCOMPATIBLE for x in image_hs)
            for o in (2 * j, 2 * j + 1)
        ):
            witness = (cn[2 * j],)
            break
    report["AM4"] = (witness is None, witness)
    return report


def _injective_reflecting(f: PocsetMap) -> bool:
    d, c, a = f.domain, f.codomain, f.assign
    if len(set(a)) != len(a):
        return False
    return all(d.le(h, k) for h in d.halfspaces() for k in d.halfspaces() if c.le(a[h], a[k]))


def classify_map(f: PocsetMap) -> MapClassification:
    report = _am_report(f)
    admissible = all(ok for ok, _ in report.values())
    injective = len(set(f.assign)) == len(f.assign)
    embedding = admissible and _injective_reflecting(f)
    if embedding:
        return MapClassification(report, injective, True, True, "embedding")
    resolution, reason = False, ""
    if not admissible:
        reason = "not admissible"
    else:
        rel = kernel_relation(f)
        if not check_admissible(rel).admissible:
            reason = "kernel relation not admissible"
        else:
            induced = induced_quotient_map(f, rel)
            ok = all(okay for okay, _ in _am_report(induced).values()) and _injective_reflecting(induced)
            resolution = ok
            reason = "" if ok else "quotient map is not an embedding"
    return MapClassification(report, injective, False, resolution, reason)


def kernel_relation(f: PocsetMap) -> EquivalenceRelation:
    if not _am_report(f)["AM1"][0]:
        raise AM1Violated("map does not commute with complementation")
    return EquivalenceRelation.from_labels(f.domain, f.assign)


def induced_quotient_map(f: PocsetMap, rel: EquivalenceRelation | None = None) -> PocsetMap:
    """The map ``H/~f -> H'`` through which ``f`` factors."""
    rel = rel or kernel_relation(f)
    Q = quotient(rel)
    assign = [None] * Q.pocset.n_halfspaces
    for h, c in enumerate(Q.projection):
        assign[c] = f.assign[h]
    return PocsetMap(Q.pocset, f.codomain, tuple(assign))


@dataclass
class ImagePartition:
    image: frozenset[int]
    transverse_to_image: frozenset[int]
    remainder: dict[int, int] = field(default_factory=dict)

    def named(self, p: Pocset) -> dict:
        return {
            "H1": sorted(p.hyperplane_name(j) for j in self.image),
            "H2": sorted(p.hyperplane_name(j) for j in self.transverse_to_image),
            "H3": {p.hyperplane_name(j): p.names[h] for j, h in sorted(self.remainder.items())},
        }


def image_partition(f: PocsetMap) -> ImagePartition:
    """Split codomain hyperplanes into image, transverse-to-image, and the
    rest, each of the latter with the side containing-or-crossing the image."""
    if not classify_map(f).admissible:
        raise NotAdmissible("image partition needs an admissible map")
    c = f.codomain
    h1 = f.image_hyperplanes()
    h2 = set()
    h3 = {}
    for j in c.hyperplanes():
        if j in h1:
            continue
        if all(c.transverse(j, k) for k in h1):
            h2.add(j)
            continue
        sides = [
            o for o in (2 * j, 2 * j + 1)
            if all(c.transverse(j, k) or c.contains_hyperplane(o, k) for k in h1)
        ]
        if len(sides) != 1:
            raise LemmaViolation(f"hyperplane {c.hyperplane_name(j)} has {len(sides)} admissible sides")
        h3[j] = sides[0]
    return ImagePartition(frozenset(h1), frozenset(h2), h3)


@dataclass(frozen=True, eq=False)
class ImagePocset:
    """The codomain restricted to the image hyperplanes."""

    pocset: Pocset
    to_codomain: tuple[int, ...]
    from_codomain: dict[int, int]


def image_pocset(f: PocsetMap) -> ImagePocset:
    c = f.codomain
    hyps = sorted(f.image_hyperplanes())
    keep = {h for j in hyps for h in (2 * j, 2 * j + 1)}
    raw = RawPocset(
        pairs=[(c.names[2 * j], c.names[2 * j + 1]) for j in hyps],
        order=[(c.names[h], c.names[k]) for h in sorted(keep) for k in bits(c.up[h]) if k in keep],
    )
    q = validate_pocset(raw)
    to_cod = tuple(c.index[name] for name in q.names)
    return ImagePocset(q, to_cod, {x: i for i, x in enumerate(to_cod)})


@dataclass(frozen=True, eq=False)
class InducedMap:
    f: PocsetMap
    source: CubeComplex
    target: CubeComplex
    image: ImagePocset
    vertex_map: tuple[int, ...]

    def to_pairs(self) -> list[list[int]]:
        return [[i, j] for i, j in enumerate(self.vertex_map)]

    def distance_changes(self) -> tuple[int, int]:
        """Vertex pairs that get farther apart / closer under the map."""
        image = [self.target.vertices[i] for i in self.vertex_map]
        return kernels.distance_changes(
            self.source.vertices, image, self.source.n_hyperplanes, self.target.n_hyperplanes
        )


def induced_orientation(f: PocsetMap, image: ImagePocset, chosen: tuple[int, ...]) -> int:
    """``F(x)`` on the image pocset, using the minimal chosen preimage per hyperplane."""
    d = f.domain
    by_image: dict[int, list[int]] = {}
    for j, h in enumerate(chosen):
        by_image.setdefault(f.assign[h] >> 1, []).append(h)
    orientation = 0
    for cod_hyp, hs in by_image.items():
        minimal = [h for h in hs if not any(d.lt(k, h) for k in hs)]
        images = {f.assign[h] for h in minimal}
        if len(images) != 1:
            raise LemmaViolation(
                "minimal preimages disagree on their image: " + ", ".join(d.names[h] for h in minimal)
            )
        target = image.from_codomain[images.pop()]
        orientation |= (target & 1) << (target >> 1)
    return orientation


def induced_complex_map(
    f: PocsetMap,
    X: CubeComplex | None = None,
    X1: CubeComplex | None = None,
    *,
    check: bool = True,
    vertex_cap: int | None = None,
) -> InducedMap:
    if check and not classify_map(f).is_resolution:
        raise NotResolution("induced complex map needs a resolution")
    image = image_pocset(f)
    X = X or dual_complex(f.domain, vertex_cap)
    if X1 is None:
        X1 = dual_complex(image.pocset, vertex_cap)
    elif X1.pocset.names != image.pocset.names:
        raise MapError("target complex is not dual to the image pocset")
    vertex_map = []
    for i in range(len(X.vertices)):
        o = induced_orientation(f, image, X.halfspaces_of(i))
        if o not in X1.index:
            raise LemmaViolation(f"image of vertex {i} is not an ultrafilter")
        vertex_map.append(X1.index[o])
    return InducedMap(f, X, X1, image, tuple(vertex_map))


def extend_to_codomain(f: PocsetMap, image: ImagePocset, orientation: int, partition: ImagePartition | None = None) -> int:
    """Place an image-pocset vertex in the codomain complex.

    Transverse-to-image hyperplanes take their canonical (even) side; the
    remaining ones take their forced side.
    """
    partition = partition or image_partition(f)
    out = 0
    for i, cod in enumerate(image.to_codomain[0::2]):
        out |= ((orientation >> i) & 1) << (cod >> 1)
    for j, side in partition.remainder.items():
        out |= (side & 1) << j
    return out
