"""Constructive orbit iteration and fixed-point enumeration.

The iterator builds x_{n+1} in T x_n with a nearest-point selection (the
attained witness of d(x_n, T x_n), leftmost on ties), which realizes the
step bound d(x_n, x_{n+1}) <= H(T x_{n-1}, T x_n) on every produced orbit.
Runs are gated by alpha: the first consecutive pair with alpha < 1 stops the
orbit, since the admissibility hypotheses no longer cover it.

Termination statuses:

  FIXED-POINT-FOUND     d(x_n, Tx_n) = 0 exactly, or <= tol;
  CONVERGED-TO          the Cauchy window (last 8 gaps summing < tol) fired,
                        or a tolerance-level residual was refined to an
                        exactly-verified limit (see below);
  MAX-ITER              iteration budget exhausted;
  ADMISSIBILITY-BROKEN  an orbit pair had alpha < 1;
  LEFT-DOMAIN           an iterate fell outside the declared space.

When consecutive gaps decay geometrically, the true limit can lie outside
the reachable iterates (for instance a strict contraction toward an endpoint
never attains it).  At termination time the solver therefore attempts an
exact geometric extrapolation of the last three iterates; the candidate is
only ever reported when it is a member of the space and its residual
re-evaluates to exactly 0, so the refinement cannot introduce false claims.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .admissibility import AlphaFn, MultiMap
from .errors import DomainError, InputError
from .expressions import affine_coefficients
from .hyperspace import Piece, Point, PointSet, Space, dist, exact, hausdorff, point_to_set

CAUCHY_WINDOW = 8
DEFAULT_TOL = Fraction(1, 10**9)
DEFAULT_MAX_ITER = 500

FIXED_POINT_FOUND = "FIXED-POINT-FOUND"
CONVERGED_TO = "CONVERGED-TO"
MAX_ITER = "MAX-ITER"
ADMISSIBILITY_BROKEN = "ADMISSIBILITY-BROKEN"
LEFT_DOMAIN = "LEFT-DOMAIN"


@dataclass
class Orbit:
    """An iteration trace x_0, x_1, ... with per-edge records.

    gaps[n] = d(x_n, x_{n+1}), hs[n] = H(Tx_n, Tx_{n+1}) and
    alphas[n] = alpha(x_n, x_{n+1}); all three run one shorter than points.
    """

    points: list[Point]
    gaps: list[Fraction]
    hs: list[Fraction]
    alphas: list[Fraction]
    status: str
    fixed_point: Point | None
    residual: Fraction | None
    route: str
    iv_prime_ok: bool | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def steps(self) -> int:
        return len(self.points) - 1

    def to_records(self, scenario: str = "adhoc") -> list[str]:
        lines = []
        for n, x in enumerate(self.points):
            parts = [f"step n={n} x={x}"]
            if n < len(self.gaps):
                parts.append(f"gap={self.gaps[n]}")
                parts.append(f"h={self.hs[n]}")
                parts.append(f"alpha={self.alphas[n]}")
            lines.append(" ".join(parts))
        summary = (f"summary scenario={scenario} route={self.route} status={self.status} "
                   f"steps={self.steps}")
        if self.fixed_point is not None:
            summary += f" fixed-point={self.fixed_point}"
        if self.residual is not None:
            summary += f" residual={self.residual}"
        if self.iv_prime_ok is not None:
            summary += f" iv-prime-check={'PASS' if self.iv_prime_ok else 'FAIL'}"
        lines.append(summary)
        return lines

    def to_text(self, scenario: str = "adhoc") -> str:
        lines = [f"orbit for scenario '{scenario}' (route {self.route})",
                 f"status: {self.status}",
                 f"steps: {self.steps}"]
        if self.fixed_point is not None:
            lines.append(f"fixed point: {self.fixed_point} (residual {self.residual})")
        elif self.residual is not None:
            lines.append(f"final residual: {self.residual}")
        if self.iv_prime_ok is not None:
            lines.append(f"limit admissibility check: {'PASS' if self.iv_prime_ok else 'FAIL'}")
        for note in self.notes:
            lines.append(f"note: {note}")
        show = min(len(self.points), 12)
        for n in range(show):
            row = f"  n={n} x={self.points[n]}"
            if n < len(self.gaps):
                row += f" gap={self.gaps[n]} h={self.hs[n]} alpha={self.alphas[n]}"
            lines.append(row)
        if show < len(self.points):
            lines.append(f"  ... ({len(self.points) - show} more points)")
        return "\n".join(lines)


def select_next(space: Space, tmap: MultiMap, x: Point, policy: str = "nearest",
                rng: random.Random | None = None) -> Point:
    """Pick the next iterate from T x.

    "nearest" (default) returns the attained nearest point, leftmost on
    ties, so d(x, next) = d(x, Tx).  "supremum" takes the largest point of
    the image; "random" draws from it (seeded rng required for
    reproducibility).
    """
    image = tmap.image(x)
    if policy == "nearest":
        return point_to_set(space, x, image).witness
    if policy == "supremum":
        return image.members[-1] if space.is_finite else image.max_value()
    if policy == "random":
        rng = rng or random.Random(0)
        if space.is_finite:
            return rng.choice(image.members)
        lo, hi = rng.choice(image.intervals)
        return lo + (hi - lo) * Fraction(rng.randint(0, 1000), 1000)
    raise InputError(f"unknown selection policy {policy!r}")


def _geometric_limit(points: list[Point]) -> Fraction | None:
    """Exact Aitken extrapolation of the last three iterates, if defined."""
    if len(points) < 3:
        return None
    a, b, c = (exact(p) for p in points[-3:])
    denominator = a - 2 * b + c
    if denominator == 0:
        return None
    return (a * c - b * b) / denominator


def iterate(space: Space, tmap: MultiMap, alpha: AlphaFn, x0: Point,
            x1: Point | None = None, tol=DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
            route: str = "continuity", policy: str = "nearest",
            rng: random.Random | None = None) -> Orbit:
    """Build an orbit from x0 (and optional explicit x1 in T x0).

    Starting at a point whose residual is already 0 terminates immediately
    with that point.  With route="iv-prime" the final report also checks
    alpha(x_n, u) >= 1 for every recorded iterate against the claimed limit.
    """
    space.require_member(x0)
    tol = exact(tol)
    if tol < 0:
        raise InputError("tolerance must be nonnegative")
    if max_iter < 1:
        raise InputError("max_iter must be at least 1")
    if route not in ("continuity", "iv-prime"):
        raise InputError(f"unknown route {route!r}")

    orbit = Orbit(points=[x0], gaps=[], hs=[], alphas=[], status=MAX_ITER,
                  fixed_point=None, residual=None, route=route)

    def finalize(status, fixed=None, residual=None):
        orbit.status = status
        orbit.fixed_point = fixed
        orbit.residual = residual
        if route == "iv-prime" and fixed is not None:
            orbit.iv_prime_ok = all(alpha.gates(p, fixed) for p in orbit.points)
        return orbit

    image_cur = tmap.image(x0)
    residual = point_to_set(space, x0, image_cur).value
    if residual <= tol:
        return finalize(FIXED_POINT_FOUND, x0, residual)

    if x1 is None:
        x1 = select_next(space, tmap, x0, policy, rng)
    elif not image_cur.contains(x1):
        raise InputError(f"x1={x1} is not in the image of x0={x0}")

    def record_edge(x_from, image_from, x_to):
        if not space.contains(x_to):
            orbit.points.append(x_to)
            return None
        image_to = tmap.image(x_to)
        orbit.gaps.append(dist(space, x_from, x_to))
        orbit.hs.append(hausdorff(space, image_from, image_to))
        orbit.alphas.append(alpha(x_from, x_to))
        orbit.points.append(x_to)
        return image_to

    def refine_limit():
        if space.is_finite:
            return None
        candidate = _geometric_limit(orbit.points)
        if candidate is None or not space.contains(candidate):
            return None
        if point_to_set(space, candidate, tmap.image(candidate)).value != 0:
            return None
        return candidate

    image_next = record_edge(x0, image_cur, x1)
    if image_next is None:
        return finalize(LEFT_DOMAIN)
    if orbit.alphas[-1] < 1:
        return finalize(ADMISSIBILITY_BROKEN)
    x_cur, image_cur = x1, image_next

    while True:
        residual = point_to_set(space, x_cur, image_cur).value
        if residual == 0:
            return finalize(FIXED_POINT_FOUND, x_cur, residual)
        if residual <= tol:
            limit = refine_limit()
            if limit is not None:
                return finalize(CONVERGED_TO, limit, Fraction(0))
            return finalize(FIXED_POINT_FOUND, x_cur, residual)
        if len(orbit.gaps) >= CAUCHY_WINDOW and sum(orbit.gaps[-CAUCHY_WINDOW:]) < tol:
            limit = refine_limit()
            if limit is not None:
                return finalize(CONVERGED_TO, limit, Fraction(0))
            return finalize(CONVERGED_TO, x_cur, residual)
        if orbit.steps >= max_iter:
            return finalize(MAX_ITER, None, residual)
        x_next = select_next(space, tmap, x_cur, policy, rng)
        image_next = record_edge(x_cur, image_cur, x_next)
        if image_next is None:
            return finalize(LEFT_DOMAIN)
        if orbit.alphas[-1] < 1:
            return finalize(ADMISSIBILITY_BROKEN)
        x_cur, image_cur = x_next, image_next


def enumerate_fixed_points(space: Space, tmap: MultiMap, grid_step=None):
    """Probe points with d(x, Tx) = 0 exactly, as (point, residual) pairs.

    Finite spaces are enumerated exhaustively; interval spaces require a
    rational grid step and also probe the branch boundary points.
    """
    if space.is_finite:
        candidates = space.labels
    else:
        if grid_step is None:
            raise InputError("interval spaces need a grid step (or use the analytic solver)")
        step = exact(grid_step)
        if step <= 0:
            raise InputError("grid step must be positive")
        bounds = space.bounds
        if isinstance(bounds.lo, float) or isinstance(bounds.hi, float):
            raise InputError("grid enumeration needs a bounded space")
        found = set(tmap.boundary_points())
        k = -(-bounds.lo // step)
        while k * step <= bounds.hi:
            if space.contains(k * step):
                found.add(k * step)
            k += 1
        candidates = sorted(found)
    hits = []
    for x in candidates:
        residual = point_to_set(space, x, tmap.image(x)).value
        if residual == 0:
            hits.append((x, residual))
    return hits


def _clip_closed(piece: Piece, lo=None, hi=None) -> Piece | None:
    """Intersect a piece with closed half-lines x >= lo and/or x <= hi."""
    new_lo, new_lo_closed = piece.lo, piece.lo_closed
    new_hi, new_hi_closed = piece.hi, piece.hi_closed
    if lo is not None and lo > new_lo:
        new_lo, new_lo_closed = lo, True
    if hi is not None and hi < new_hi:
        new_hi, new_hi_closed = hi, True
    if new_lo > new_hi or (new_lo == new_hi and not (new_lo_closed and new_hi_closed)):
        return None
    return Piece(new_lo, new_hi, new_lo_closed, new_hi_closed)


def _half_line(coeff, bound):
    """Solve coeff * x >= bound: ("ge"|"le", value), "all", or "empty"."""
    if coeff > 0:
        return ("ge", bound / coeff)
    if coeff < 0:
        return ("le", bound / coeff)
    return "all" if bound <= 0 else "empty"


def analytic_fixed_points(space: Space, tmap: MultiMap) -> list[Piece]:
    """Exact per-branch solution of x in T(x) for piecewise-affine maps.

    Set images solve x = e_i(x) per expression; interval images solve the
    pair of linear inequalities e1(x) <= x <= e2(x).  Returns sorted
    solution pieces (degenerate pieces are single points); contiguous pieces
    are merged.
    """
    if space.is_finite:
        raise InputError("analytic solving applies to interval spaces")
    solutions: list[Piece] = []
    for branch in tmap.branches:
        coeffs = [affine_coefficients(e, "x") for e in branch.exprs]
        for piece in branch.pieces:
            if branch.image_kind == "set":
                for slope, intercept in coeffs:
                    if slope == 1:
                        if intercept == 0:
                            solutions.append(piece)
                        continue
                    root = intercept / (1 - slope)
                    if piece.contains(root):
                        solutions.append(Piece(root, root))
                continue
            (s1, i1), (s2, i2) = coeffs
            # e1(x) <= x  <=>  (1 - s1) x >= i1 ; x <= e2(x)  <=>  (s2 - 1) x >= -i2
            constraints = [_half_line(1 - s1, i1), _half_line(s2 - 1, -i2)]
            if "empty" in constraints:
                continue
            lo = hi = None
            for constraint in constraints:
                if constraint == "all":
                    continue
                kind, value = constraint
                if kind == "ge":
                    lo = value if lo is None else max(lo, value)
                else:
                    hi = value if hi is None else min(hi, value)
            clipped = _clip_closed(piece, lo, hi)
            if clipped is not None:
                solutions.append(clipped)
    solutions.sort(key=lambda p: (p.lo, p.hi))
    merged: list[Piece] = []
    for piece in solutions:
        if merged:
            last = merged[-1]
            touching = last.hi == piece.lo and (last.hi_closed or piece.lo_closed)
            if piece.lo < last.hi or touching:
                merged[-1] = Piece(last.lo, max(last.hi, piece.hi), last.lo_closed,
                                   piece.hi_closed if piece.hi >= last.hi else last.hi_closed)
                continue
        merged.append(piece)
    return merged
