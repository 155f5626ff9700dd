"""Alpha gating functions, set-valued maps, and admissibility checks.

Alpha functions come in three kinds: an indicator of a region (1 when both
arguments lie in the region, else 0), a full nonnegative table over a finite
space, and a constant.  Set-valued maps are piecewise over interval spaces
(branch domains partition the space exactly; images are finite sets of
affine expressions or affine-bounded intervals) or explicit tables over
finite spaces.

Decision procedures are exact on finite spaces.  On interval spaces the
outer points range over a probe set (reports say so), while the inner
"for all z in Ty" quantifiers are decided exactly for indicator alphas via
canonical containment.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, InputError, UnsupportedCombinationError
from .expressions import Expr, affine_coefficients, evaluate, parse_expression
from .hyperspace import INF, Piece, Point, PointSet, Space, exact
from .reports import Witness, make_report

_ONE = Fraction(1)
_ZERO = Fraction(0)
DEFAULT_PROBE_PER_BRANCH = 128
DEFAULT_SEED = 0


@dataclass(frozen=True)
class AlphaFn:
    """A map alpha : X x X -> [0, inf) in one of three exact representations."""

    kind: str  # "indicator" | "table" | "constant"
    region: PointSet | None = None
    space: Space | None = None
    table: tuple = ()
    value: Fraction | None = None

    @classmethod
    def indicator(cls, region: PointSet) -> "AlphaFn":
        return cls(kind="indicator", region=region)

    @classmethod
    def from_table(cls, space: Space, entries: dict) -> "AlphaFn":
        """entries maps ordered label pairs to values; missing pairs are 0."""
        if not space.is_finite:
            raise UnsupportedCombinationError("table alphas require a finite space")
        n = len(space.labels)
        matrix = [[_ZERO] * n for _ in range(n)]
        for (a, b), value in entries.items():
            value = exact(value)
            if value < 0:
                raise InputError(f"alpha({a},{b}) must be nonnegative")
            matrix[space.label_index(a)][space.label_index(b)] = value
        return cls(kind="table", space=space,
                   table=tuple(tuple(row) for row in matrix))

    @classmethod
    def constant(cls, value) -> "AlphaFn":
        value = exact(value)
        if value < 0:
            raise InputError("a constant alpha must be nonnegative")
        return cls(kind="constant", value=value)

    def __call__(self, x: Point, y: Point) -> Fraction:
        if self.kind == "constant":
            return self.value
        if self.kind == "indicator":
            return _ONE if self.region.contains(x) and self.region.contains(y) else _ZERO
        return self.table[self.space.label_index(x)][self.space.label_index(y)]

    def gates(self, x: Point, y: Point) -> bool:
        return self(x, y) >= 1


def alpha_star(alpha: AlphaFn, aset: PointSet, bset: PointSet) -> Fraction:
    """inf of alpha(a, b) over a in A, b in B, computed exactly.

    Indicator alphas reduce to containment of both sets in the region;
    table alphas enumerate finite sets.  Other combinations over infinite
    sets are not decidable here and raise.
    """
    if alpha.kind == "constant":
        return alpha.value
    if alpha.kind == "indicator":
        region = alpha.region
        both = region.superset_of(aset) and region.superset_of(bset)
        return _ONE if both else _ZERO
    if alpha.kind == "table":
        if not (aset.space.is_finite and bset.space.is_finite):
            raise UnsupportedCombinationError(
                "table alpha over interval-space sets is not decidable")
        return min(alpha(a, b) for a in aset.members for b in bset.members)
    raise UnsupportedCombinationError(f"unknown alpha kind {alpha.kind!r}")


@dataclass(frozen=True)
class Branch:
    """One piece of a piecewise map: domain pieces and an image recipe.

    image_kind "set" holds one affine expression per image point;
    "interval" holds exactly (lower, upper) affine bound expressions.
    """

    pieces: tuple[Piece, ...]
    image_kind: str
    exprs: tuple[Expr, ...]

    @classmethod
    def build(cls, pieces, image_kind, exprs) -> "Branch":
        exprs = tuple(parse_expression(e, variables=("x",)) if isinstance(e, str) else e
                      for e in exprs)
        if image_kind not in ("set", "interval"):
            raise InputError(f"unknown image kind {image_kind!r}")
        if image_kind == "interval" and len(exprs) != 2:
            raise InputError("an interval image needs exactly two bound expressions")
        if image_kind == "set" and not exprs:
            raise InputError("a set image needs at least one expression")
        if isinstance(pieces, Piece):
            pieces = (pieces,)
        return cls(pieces=tuple(pieces), image_kind=image_kind, exprs=exprs)


def _affine_range(slope: Fraction, intercept: Fraction, piece: Piece):
    """(min, min_attained, max, max_attained) of slope*x+intercept over piece.

    Infinite bounds come back as float infinities; attained flags are exact
    (a bound is attained iff it occurs at a closed endpoint, or the function
    is constant).
    """
    if slope == 0:
        return intercept, True, intercept, True
    ends = []
    for value, closed in ((piece.lo, piece.lo_closed), (piece.hi, piece.hi_closed)):
        if isinstance(value, float):
            ends.append((INF if (value > 0) == (slope > 0) else -INF, False))
        else:
            ends.append((slope * value + intercept, closed))
    (v1, a1), (v2, a2) = ends
    if v1 <= v2:
        return v1, a1, v2, a2
    return v2, a2, v1, a1


def _check_image_inside(space: Space, slope, intercept, piece: Piece, what: str) -> None:
    """Affine image values must lie in the (possibly open-ended) space for
    every x in the branch piece.  Touching an open space bound is allowed
    only in the limit at an open piece end."""
    lo_val, lo_att, hi_val, hi_att = _affine_range(slope, intercept, piece)
    bounds = space.bounds
    if not isinstance(bounds.hi, float):
        if hi_val > bounds.hi or (hi_val == bounds.hi and not bounds.hi_closed and hi_att):
            raise DomainError(f"{what} leaves the space at the upper bound {bounds.hi}")
    if not isinstance(bounds.lo, float):
        if lo_val < bounds.lo or (lo_val == bounds.lo and not bounds.lo_closed and lo_att):
            raise DomainError(f"{what} leaves the space at the lower bound {bounds.lo}")


@dataclass(frozen=True)
class MultiMap:
    """A set-valued self-map T : X -> CB(X), exactly evaluable."""

    space: Space
    branches: tuple[Branch, ...] = ()
    images: tuple[PointSet, ...] = ()  # finite spaces, indexed like labels

    @classmethod
    def piecewise(cls, space: Space, branches) -> "MultiMap":
        """Validate that branch domains partition the space and that every
        image stays inside it (affine images are checked on whole pieces via
        endpoint monotonicity)."""
        if space.is_finite:
            raise DomainError("piecewise maps require an interval space")
        branches = tuple(b if isinstance(b, Branch) else Branch.build(*b) for b in branches)
        pieces = [p for b in branches for p in b.pieces]
        if not pieces:
            raise InputError("a map needs at least one branch")
        pieces.sort(key=lambda p: (p.lo, not p.lo_closed))
        bounds = space.bounds
        expect, expect_closed = bounds.lo, bounds.lo_closed
        for piece in pieces:
            if piece.lo < expect or (piece.lo == expect and piece.lo_closed and not expect_closed):
                raise DomainError(f"branches overlap at {_edge_name(piece.lo)}")
            if piece.lo > expect or (piece.lo == expect and expect_closed and not piece.lo_closed):
                raise DomainError(f"branches leave a gap at {_edge_name(expect)}")
            expect, expect_closed = piece.hi, not piece.hi_closed
        if expect != bounds.hi or expect_closed != (not bounds.hi_closed):
            raise DomainError(f"branches leave a gap at {_edge_name(expect)}")
        for branch in branches:
            coeffs = [affine_coefficients(e, "x") for e in branch.exprs]
            for piece in branch.pieces:
                for (slope, intercept), expr in zip(coeffs, branch.exprs):
                    _check_image_inside(space, slope, intercept, piece, "image expression")
                if branch.image_kind == "interval":
                    (s1, i1), (s2, i2) = coeffs
                    lo_val, _, _, _ = _affine_range(s2 - s1, i2 - i1, piece)
                    if lo_val < 0:
                        raise DomainError(
                            "interval image has upper bound below lower bound "
                            f"on branch {piece}")
        return cls(space=space, branches=branches)

    @classmethod
    def from_table(cls, space: Space, mapping: dict) -> "MultiMap":
        """mapping sends every label to an iterable of labels (or a PointSet)."""
        if not space.is_finite:
            raise DomainError("table maps require a finite space")
        images = []
        for label in space.labels:
            if label not in mapping:
                raise DomainError(f"map has no branch for point {label!r}")
            image = mapping[label]
            if not isinstance(image, PointSet):
                image = PointSet.of_points(space, image)
            images.append(image)
        return cls(space=space, images=tuple(images))

    def image(self, x: Point) -> PointSet:
        """Evaluate Tx as a canonical point set."""
        self.space.require_member(x)
        if self.space.is_finite:
            return self.images[self.space.label_index(x)]
        x = exact(x)
        for branch in self.branches:
            if any(piece.contains(x) for piece in branch.pieces):
                values = [evaluate(e, {"x": x}) for e in branch.exprs]
                if branch.image_kind == "set":
                    return PointSet.of_points(self.space, values)
                return PointSet.of_intervals(self.space, [(values[0], values[1])])
        raise DomainError(f"no branch matches {x} (partition violation)")

    def boundary_points(self) -> tuple[Fraction, ...]:
        """Finite branch endpoints that are members of the space."""
        if self.space.is_finite:
            return ()
        found = set()
        for branch in self.branches:
            for piece in branch.pieces:
                for value in (piece.lo, piece.hi):
                    if not isinstance(value, float) and self.space.contains(value):
                        found.add(value)
        return tuple(sorted(found))


def _edge_name(value) -> str:
    return str(value)


def apply_map(tmap: MultiMap, x: Point) -> PointSet:
    return tmap.image(x)


def default_probe(space: Space, tmap: MultiMap, per_branch: int = DEFAULT_PROBE_PER_BRANCH,
                  seed: int = DEFAULT_SEED) -> tuple[Point, ...]:
    """Probe points: all labels on finite spaces; on interval spaces the
    branch endpoints, piece midpoints, and a seeded rational sample per
    branch piece (unbounded pieces are sampled on a width-16 window)."""
    if space.is_finite:
        return space.labels
    rng = random.Random(seed)
    points = set()
    for branch in tmap.branches:
        for piece in branch.pieces:
            lo, hi = piece.lo, piece.hi
            if isinstance(lo, float):
                lo = hi - 16 if not isinstance(hi, float) else Fraction(-8)
            if isinstance(hi, float):
                hi = lo + 16
            for candidate in (lo, hi, (lo + hi) / 2):
                if space.contains(candidate):
                    points.add(exact(candidate))
            for _ in range(per_branch):
                q = rng.randint(2, 1000)
                p = rng.randint(1, q - 1)
                candidate = lo + (hi - lo) * Fraction(p, q)
                if space.contains(candidate):
                    points.add(candidate)
    return tuple(sorted(points))


def _domain_points(space, tmap, domain):
    if domain is not None:
        points = tuple(domain)
        for p in points:
            space.require_member(p)
        return points, False
    if space.is_finite:
        return space.labels, True
    return default_probe(space, tmap), False


def _probe_notes(exhaustive: bool, count: int) -> tuple[str, ...]:
    if exhaustive:
        return (f"exhaustive over the finite space ({count} points)",)
    return (f"on probe set ({count} points); inner set quantifiers exact for indicator alpha",)


def _leftmost(image: PointSet) -> Point:
    return image.members[0] if image.space.is_finite else image.min_value()


def _image_alpha_witness(alpha: AlphaFn, y: Point, image: PointSet):
    """Some z in the image with alpha(y, z) < 1, or None.

    For indicator alphas this is decided exactly on canonical sets; finite
    spaces enumerate.
    """
    if alpha.kind == "constant":
        return None if alpha.value >= 1 else _leftmost(image)
    if alpha.kind == "indicator":
        if not alpha.region.contains(y):
            return _leftmost(image)
        if alpha.region.superset_of(image):
            return None
        return image.first_point_not_in(alpha.region)
    for z in image.members:
        if not alpha.gates(y, z):
            return z
    return None


def is_alpha_admissible_mv(tmap: MultiMap, alpha: AlphaFn, domain=None):
    """For probed x and y in Tx with alpha(x, y) >= 1, every z in Ty must
    have alpha(y, z) >= 1.  Witnesses are (x, y, z) triples."""
    space = tmap.space
    points, exhaustive = _domain_points(space, tmap, domain)
    witnesses = []
    checked = 0
    for x in points:
        tx = tmap.image(x)
        for y in points:
            if not tx.contains(y) or not alpha.gates(x, y):
                continue
            checked += 1
            z = _image_alpha_witness(alpha, y, tmap.image(y))
            if z is not None:
                witnesses.append(Witness("admissible", (x, y, z)))
    return make_report("alpha-admissible-mv", checked, witnesses,
                       notes=_probe_notes(exhaustive, len(points)))


def _triangle_witness(tmap, alpha, x, y):
    """Some z in Ty with alpha(y, z) >= 1 but alpha(x, z) < 1, or None.

    Only called once alpha(x, y) >= 1 holds.
    """
    if alpha.kind == "constant":
        return None  # alpha(x, z) equals alpha(y, z); the gates agree
    if alpha.kind == "indicator":
        # the hypothesis put x and y in the region; gated z are exactly the
        # part of Ty inside it, so alpha(x, z) = 1 throughout
        return None
    for z in tmap.image(y).members:
        if alpha.gates(y, z) and not alpha.gates(x, z):
            return z
    return None


def is_triangular_alpha_admissible_mv(tmap: MultiMap, alpha: AlphaFn, domain=None):
    """Admissibility as above plus the chain rule: alpha(x, y) >= 1 and
    alpha(y, z) >= 1 for z in Ty imply alpha(x, z) >= 1."""
    space = tmap.space
    points, exhaustive = _domain_points(space, tmap, domain)
    base = is_alpha_admissible_mv(tmap, alpha, domain=points)
    witnesses = list(base.witnesses)
    checked = base.checked
    for x in points:
        for y in points:
            if not alpha.gates(x, y):
                continue
            checked += 1
            z = _triangle_witness(tmap, alpha, x, y)
            if z is not None:
                witnesses.append(Witness("triangle", (x, y, z)))
    return make_report("triangular-alpha-admissible-mv", checked, witnesses,
                       notes=_probe_notes(exhaustive, len(points)))


def is_triangular_alpha_star_admissible(tmap: MultiMap, alpha: AlphaFn, domain=None):
    """Star version: alpha(x, y) >= 1 must force alpha_*(Tx, Ty) >= 1, and
    together they must force alpha(x, z) >= 1 for all z in Ty."""
    space = tmap.space
    points, exhaustive = _domain_points(space, tmap, domain)
    witnesses = []
    checked = 0
    for x in points:
        tx = tmap.image(x)
        for y in points:
            if not alpha.gates(x, y):
                continue
            checked += 1
            ty = tmap.image(y)
            star = alpha_star(alpha, tx, ty)
            if star < 1:
                witnesses.append(Witness("star-admissible", (x, y)))
                continue
            if alpha.kind == "table":
                for z in ty.members:
                    if not alpha.gates(x, z):
                        witnesses.append(Witness("triangle", (x, y, z)))
                        break
            elif alpha.kind == "indicator":
                # alpha_* >= 1 gives Ty inside the region and alpha(x,y) >= 1
                # gives x in the region, so alpha(x, z) = 1 for all z in Ty
                pass
    return make_report("triangular-alpha-star-admissible", checked, witnesses,
                       notes=_probe_notes(exhaustive, len(points)))


def orbit_chain(alpha: AlphaFn, points: Sequence[Point]):
    """Check alpha(x_n, x_m) >= 1 for every n < m along an orbit trace.

    Witnesses are the failing index pairs (n, m).
    """
    points = list(points)
    if len(points) < 2:
        raise InputError("orbit chaining needs an orbit of length >= 2")
    witnesses = []
    checked = 0
    for n in range(len(points)):
        for m in range(n + 1, len(points)):
            checked += 1
            if not alpha.gates(points[n], points[m]):
                witnesses.append(Witness("chain", (n, m)))
    return make_report("orbit-chain", checked, witnesses)
