"""Certification of the contraction inequalities over enumerable pair sets.

The inequality zeta(alpha(x,y) * H(Tx, Ty), s) >= C_G — with s = d(x, y) in
plain mode and s = M(x, y) in generalized mode — is evaluated exactly at
every ordered pair x != y drawn from a pair source.  Finite spaces are
checked exhaustively (a complete decision restricted to that space); interval
spaces use a rational-step grid that always includes branch-boundary-adjacent
points, and the report records the step so CERTIFIED-ON-PAIRS is never read
as a universal claim.  Violations re-evaluate exactly and are reported in
lexicographic order, capped deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .admissibility import AlphaFn, MultiMap
from .contraction import ContractionFamily, eval_zeta
from .errors import DomainError, EvaluationError, InputError
from .hyperspace import Point, Space, dist, exact, hausdorff, point_to_set

MAX_VIOLATIONS = 32
DEFAULT_BOUNDARY_OFFSET = Fraction(1, 100)

CERTIFIED = "CERTIFIED-ON-PAIRS"
VIOLATED = "VIOLATED"


def compute_m(space: Space, tmap: MultiMap, x: Point, y: Point) -> Fraction:
    """max of d(x,y), d(x,Tx), d(y,Ty), and (d(x,Ty)+d(y,Tx))/2, exact."""
    tx = tmap.image(x)
    ty = tmap.image(y)
    d_xy = dist(space, x, y)
    d_x_tx = point_to_set(space, x, tx).value
    d_y_ty = point_to_set(space, y, ty).value
    cross = (point_to_set(space, x, ty).value + point_to_set(space, y, tx).value) / 2
    return max(d_xy, d_x_tx, d_y_ty, cross)


@dataclass(frozen=True)
class PairSource:
    """The points whose ordered distinct pairs a certification sweeps."""

    points: tuple[Point, ...]
    description: str

    @classmethod
    def exhaustive(cls, space: Space) -> "PairSource":
        if not space.is_finite:
            raise InputError("exhaustive pair sources need a finite space")
        return cls(points=space.labels, description="exhaustive-finite")

    @classmethod
    def grid(cls, space: Space, tmap: MultiMap, step,
             alpha: AlphaFn | None = None,
             boundary_offset=DEFAULT_BOUNDARY_OFFSET) -> "PairSource":
        """Rational-step lattice over the space plus boundary-adjacent points.

        Branch endpoints of the map (and region endpoints of an indicator
        alpha), together with their +-offset neighbours, are always included
        regardless of the step.
        """
        if space.is_finite:
            return cls.exhaustive(space)
        step = exact(step)
        if step <= 0:
            raise InputError("grid step must be positive")
        bounds = space.bounds
        if isinstance(bounds.lo, float) or isinstance(bounds.hi, float):
            raise InputError("grid pair sources need a bounded space")
        offset = exact(boundary_offset)
        points = set()
        k = -(-bounds.lo // step)  # ceil division
        while k * step <= bounds.hi:
            candidate = k * step
            if space.contains(candidate):
                points.add(candidate)
            k += 1
        specials = set(tmap.boundary_points())
        if alpha is not None and alpha.kind == "indicator" and not alpha.region.space.is_finite:
            for lo, hi in alpha.region.intervals:
                specials.update((lo, hi))
        for value in specials:
            for candidate in (value - offset, value, value + offset):
                if space.contains(candidate):
                    points.add(candidate)
        return cls(points=tuple(sorted(points)),
                   description=f"rational-grid step={step}")


@dataclass(frozen=True)
class ViolationRecord:
    """One failing pair with every quantity needed to re-verify it."""

    x: Point
    y: Point
    t: Fraction  # alpha(x,y) * H(Tx, Ty)
    s: Fraction  # d(x,y) or M(x,y)
    zeta_value: Fraction
    cg: Fraction

    def to_record(self) -> str:
        return (f"violation x={self.x} y={self.y} t={self.t} s={self.s} "
                f"zeta={self.zeta_value} cg={self.cg}")


@dataclass(frozen=True)
class CertificationReport:
    scenario: str
    mode: str  # "plain" | "generalized"
    pair_source: str
    verdict: str
    pairs_checked: int
    vacuous_pairs: int  # pairs with alpha(x, y) = 0
    violation_count: int
    violations: tuple[ViolationRecord, ...]
    truncated: bool

    @property
    def certified(self) -> bool:
        return self.verdict == CERTIFIED

    def to_records(self) -> list[str]:
        lines = [
            f"report scenario={self.scenario} mode={self.mode} pairs={self.pair_source}",
            f"verdict {self.verdict}",
            f"pairs-checked {self.pairs_checked}",
            f"vacuous-pairs {self.vacuous_pairs}",
            f"violations {self.violation_count}",
        ]
        lines.extend(v.to_record() for v in self.violations)
        if self.truncated:
            lines.append(f"violations-truncated showing={len(self.violations)}")
        return lines

    def to_text(self) -> str:
        lines = [
            f"certification of scenario '{self.scenario}' ({self.mode}, {self.pair_source})",
            f"verdict: {self.verdict}",
            f"pairs checked: {self.pairs_checked} ({self.vacuous_pairs} with alpha = 0)",
        ]
        if self.violations:
            shown = len(self.violations)
            header = f"violations ({self.violation_count} total"
            header += f", first {shown} lexicographically):" if self.truncated else "):"
            lines.append(header)
            for v in self.violations:
                lines.append(f"  x={v.x} y={v.y}: zeta(t={v.t}, s={v.s}) = "
                             f"{v.zeta_value} < cg={v.cg}")
        return "\n".join(lines)


def _certify(space, tmap, alpha, fam, pairs, mode, scenario, max_violations):
    points = pairs.points
    if not points:
        raise InputError("pair source is empty")
    images = {x: tmap.image(x) for x in points}
    self_dist = {x: point_to_set(space, x, images[x]).value for x in points}
    zero = Fraction(0)
    violations = []
    total_violations = 0
    checked = 0
    vacuous = 0
    for x in points:
        for y in points:
            if x == y:
                continue
            checked += 1
            a = alpha(x, y)
            if a == 0:
                vacuous += 1
                t = zero  # alpha kills the left argument; H is not needed
            else:
                t = a * hausdorff(space, images[x], images[y])
            d_xy = dist(space, x, y)
            if mode == "plain":
                s = d_xy
            else:
                cross = (point_to_set(space, x, images[y]).value
                         + point_to_set(space, y, images[x]).value) / 2
                s = max(d_xy, self_dist[x], self_dist[y], cross)
            try:
                value = eval_zeta(fam, t, s)
            except EvaluationError as exc:
                raise EvaluationError(f"{exc} at pair x={x}, y={y}") from exc
            if value < fam.cg:
                total_violations += 1
                if len(violations) < max_violations:
                    violations.append(ViolationRecord(x, y, t, s, value, fam.cg))
    return CertificationReport(
        scenario=scenario,
        mode=mode,
        pair_source=pairs.description,
        verdict=VIOLATED if total_violations else CERTIFIED,
        pairs_checked=checked,
        vacuous_pairs=vacuous,
        violation_count=total_violations,
        violations=tuple(violations),
        truncated=total_violations > len(violations),
    )


def certify_plain(space: Space, tmap: MultiMap, alpha: AlphaFn, fam: ContractionFamily,
                  pairs: PairSource, scenario: str = "adhoc",
                  max_violations: int = MAX_VIOLATIONS) -> CertificationReport:
    """Certify zeta(alpha(x,y)*H(Tx,Ty), d(x,y)) >= C_G over all pairs x != y."""
    return _certify(space, tmap, alpha, fam, pairs, "plain", scenario, max_violations)


def certify_generalized(space: Space, tmap: MultiMap, alpha: AlphaFn, fam: ContractionFamily,
                        pairs: PairSource, scenario: str = "adhoc",
                        max_violations: int = MAX_VIOLATIONS) -> CertificationReport:
    """As certify_plain with the second argument replaced by M(x, y)."""
    return _certify(space, tmap, alpha, fam, pairs, "generalized", scenario, max_violations)
