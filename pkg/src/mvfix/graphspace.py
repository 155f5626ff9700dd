"""Metric spaces endowed with a directed edge relation.

Edge-gated contraction results reduce to the alpha machinery through the
edge-indicator alpha (1 on edges, 0 elsewhere), and the operations here are
that reduction: certification delegates outright, and the edge-preservation
check mirrors the triangular admissibility check with raw edge lookups so
the equivalence of the two code paths is testable.

Edge sets always contain the diagonal.  For region-defined edge relations
({(x, y) : x, y in R} plus the diagonal) the translation to an indicator
alpha absorbs the diagonal: self-pairs outside the region follow the region
rule in every reduction-facing operation, which keeps the two code paths in
exact agreement.  The no-parallel-edges convention ((x,y) and (y,x) both
present forces x = y) is enforced on finite edge lists only; region-defined
relations are symmetric by construction and are accepted as the alpha
translation of symmetric gating.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .admissibility import AlphaFn, MultiMap, _domain_points, _probe_notes
from .certifier import CertificationReport, PairSource, certify_generalized, certify_plain
from .contraction import ContractionFamily
from .errors import DomainError, InputError, UnsupportedCombinationError
from .hyperspace import Point, PointSet, Space, dist
from .reports import CheckReport, Witness, make_report


@dataclass(frozen=True)
class GraphSpace:
    """A space plus a directed edge set containing the diagonal."""

    space: Space
    kind: str  # "edges" | "region"
    edges: frozenset = frozenset()  # non-diagonal ordered pairs
    region: PointSet | None = None

    @classmethod
    def from_edges(cls, space: Space, pairs) -> "GraphSpace":
        """Explicit edge list; the diagonal is implied and need not be given."""
        edges = set()
        for x, y in pairs:
            space.require_member(x)
            space.require_member(y)
            if x == y:
                continue
            edges.add((x, y))
        for x, y in edges:
            if (y, x) in edges:
                raise DomainError(f"parallel edges ({x},{y}) and ({y},{x}) are not allowed")
        return cls(space=space, kind="edges", edges=frozenset(edges))

    @classmethod
    def from_region(cls, space: Space, region: PointSet) -> "GraphSpace":
        if region.space != space:
            raise DomainError("edge region must be a subset of the graph's space")
        return cls(space=space, kind="region", region=region)

    def has_edge(self, x: Point, y: Point) -> bool:
        """The full relation, diagonal included."""
        if x == y:
            return True
        return self._gates(x, y)

    def _gates(self, x: Point, y: Point) -> bool:
        # edge rule as seen by the alpha reduction (diagonal absorbed for
        # region-defined relations)
        if self.kind == "region":
            return self.region.contains(x) and self.region.contains(y)
        return x == y or (x, y) in self.edges

    def edge_weights(self) -> tuple:
        """Read-only weighted view: (x, y, d(x, y)) per listed edge."""
        if self.kind != "edges":
            raise UnsupportedCombinationError("weighted view needs a finite edge list")
        return tuple((x, y, dist(self.space, x, y)) for x, y in sorted(self.edges))


def indicator_alpha(gs: GraphSpace) -> AlphaFn:
    """The reduction alpha: 1 on E(G), 0 elsewhere.

    Finite edge lists become tables (diagonal entries included); region
    relations become region indicators (diagonal absorbed).  Edge lists over
    interval spaces have no exact alpha representation here.
    """
    if gs.kind == "region":
        return AlphaFn.indicator(gs.region)
    if not gs.space.is_finite:
        raise UnsupportedCombinationError(
            "edge lists over interval spaces have no alpha translation")
    one = Fraction(1)
    entries = {(x, y): one for x, y in gs.edges}
    for label in gs.space.labels:
        entries[(label, label)] = one
    return AlphaFn.from_table(gs.space, entries)


def _image_points(image: PointSet):
    """Image elements for the edge-list quantifiers; edge lists can only
    decide them over finite point collections."""
    if image.space.is_finite:
        return image.members
    if image.is_points:
        return image.points()
    raise UnsupportedCombinationError(
        "finite edge lists cannot decide quantifiers over interval images")


def _edge_image_witness(gs: GraphSpace, y: Point, image: PointSet):
    """Some z in the image with no edge (y, z), or None."""
    if gs.kind == "region":
        if not gs.region.contains(y):
            return image.members[0] if gs.space.is_finite else image.min_value()
        if gs.region.superset_of(image):
            return None
        return image.first_point_not_in(gs.region)
    for z in _image_points(image):
        if not gs._gates(y, z):
            return z
    return None


def is_triangular_edge_preserving(gs: GraphSpace, tmap: MultiMap, domain=None) -> CheckReport:
    """Edge preservation along orbits plus the edge chain rule.

    For probed x and y in Tx joined by an edge, every z in Ty must be
    reachable by an edge from y; and whenever (x, y) and (y, z in Ty) are
    edges, so is (x, z).  This mirrors the triangular alpha admissibility
    check under the edge-indicator alpha, evaluated on raw edge lookups.
    """
    space = gs.space
    points, exhaustive = _domain_points(space, tmap, domain)
    witnesses = []
    checked = 0
    for x in points:
        tx = tmap.image(x)
        for y in points:
            if not tx.contains(y) or not gs._gates(x, y):
                continue
            checked += 1
            z = _edge_image_witness(gs, y, tmap.image(y))
            if z is not None:
                witnesses.append(Witness("admissible", (x, y, z)))
    for x in points:
        for y in points:
            if not gs._gates(x, y):
                continue
            checked += 1
            if gs.kind == "region":
                # x is in the region, and gated z are the part of Ty inside
                # it, so (x, z) is an edge throughout
                continue
            for z in _image_points(tmap.image(y)):
                if gs._gates(y, z) and not gs._gates(x, z):
                    witnesses.append(Witness("triangle", (x, y, z)))
                    break
    return make_report("triangular-edge-preserving", checked, witnesses,
                       notes=_probe_notes(exhaustive, len(points)))


def certify_eg(gs: GraphSpace, tmap: MultiMap, fam: ContractionFamily, pairs: PairSource,
               mode: str = "plain", scenario: str = "adhoc") -> CertificationReport:
    """Certify the edge-gated inequality by the indicator-alpha reduction.

    Pairs outside E(G) enter with alpha = 0 and are tallied in the report's
    vacuous-pairs count; the report is identical to the corresponding plain
    or generalized alpha certification.
    """
    alpha = indicator_alpha(gs)
    if mode == "plain":
        return certify_plain(gs.space, tmap, alpha, fam, pairs, scenario=scenario)
    if mode == "generalized":
        return certify_generalized(gs.space, tmap, alpha, fam, pairs, scenario=scenario)
    raise InputError(f"unknown certification mode {mode!r}")


def _declared_check(name: str, gs: GraphSpace, declared) -> CheckReport:
    if gs.space.is_finite:
        return make_report(name, len(gs.space.labels), (),
                           notes=("automatic on finite spaces",))
    if declared is None:
        raise InputError(f"{name} must be declared for interval spaces")
    witnesses = () if declared else (Witness("declared", ("false",)),)
    return make_report(name, 0, witnesses, notes=("declared attribute, not checked",))


def eg_completeness(gs: GraphSpace, declared: bool | None = None) -> CheckReport:
    """Edge-gated completeness: automatic on finite spaces, declared otherwise."""
    return _declared_check("eg-complete", gs, declared)


def eg_continuity(gs: GraphSpace, declared: bool | None = None) -> CheckReport:
    """Edge-gated continuity of the map: automatic on finite spaces, declared
    otherwise."""
    return _declared_check("eg-continuous", gs, declared)
