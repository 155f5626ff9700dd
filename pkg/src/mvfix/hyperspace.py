"""Metric spaces over exact rationals and their closed bounded subsets.

Two space representations are supported: finite label spaces with an explicit
distance table (validated against the metric axioms at construction), and
intervals of the rational line under the absolute-difference metric.  Subsets
are kept canonical — sorted labels, or sorted unions of disjoint, non-touching
closed intervals — so membership, containment, and the Hausdorff distance are
decided exactly, with attained witnesses.

All values are pure and immutable; every operation is safe to call
concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Union

from .errors import DomainError, InputError

INF = float("inf")

# interval-space points are Fractions, finite-space points are string labels
Point = Union[Fraction, int, str]
Endpoint = Union[Fraction, int, float]

_ZERO = Fraction(0)


def exact(value) -> Fraction:
    """Coerce int/Fraction to Fraction; floats are rejected as inexact."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise InputError(f"expected an exact rational, got {value!r}")


def _extended(value) -> Endpoint:
    if isinstance(value, float):
        if value == INF or value == -INF:
            return value
        raise InputError(f"finite endpoints must be exact rationals, got {value!r}")
    return exact(value)


def _fmt_endpoint(value: Endpoint) -> str:
    if isinstance(value, float):
        return "inf" if value > 0 else "-inf"
    return str(value)


@dataclass(frozen=True)
class Piece:
    """Interval of the rational line with individually open or closed ends.

    Degenerate pieces (lo == hi, both ends closed) encode single points.
    Infinite endpoints are allowed and are necessarily open.
    """

    lo: Endpoint
    hi: Endpoint
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lo", _extended(self.lo))
        object.__setattr__(self, "hi", _extended(self.hi))
        if isinstance(self.lo, float) and self.lo_closed:
            raise InputError("an infinite endpoint must be open")
        if isinstance(self.hi, float) and self.hi_closed:
            raise InputError("an infinite endpoint must be open")
        if self.lo > self.hi or (self.lo == self.hi and not (self.lo_closed and self.hi_closed)):
            raise InputError(f"empty interval piece {self}")

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi

    @property
    def bounded(self) -> bool:
        return not isinstance(self.lo, float) and not isinstance(self.hi, float)

    def midpoint(self) -> Fraction:
        if not self.bounded:
            raise InputError("midpoint of an unbounded piece")
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        if x < self.lo or (x == self.lo and not self.lo_closed):
            return False
        if x > self.hi or (x == self.hi and not self.hi_closed):
            return False
        return True

    def __str__(self) -> str:
        if self.degenerate:
            return f"{{{self.lo}}}"
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{_fmt_endpoint(self.lo)}, {_fmt_endpoint(self.hi)}{right}"


@dataclass(frozen=True)
class Space:
    """A metric space: finite with a distance table, or a rational interval."""

    kind: str  # "finite" | "interval"
    labels: tuple[str, ...] = ()
    table: tuple[tuple[Fraction, ...], ...] = ()
    bounds: Piece | None = None

    @classmethod
    def finite(cls, distances: dict) -> "Space":
        """Build from {(a, b): distance}; the metric axioms are checked.

        Unordered pairs may be given in either order; (a, a) entries, when
        present, must be 0.
        """
        labels = sorted({label for pair in distances for label in pair})
        if len(labels) < 1:
            raise DomainError("a finite space needs at least one point")
        index = {label: i for i, label in enumerate(labels)}
        n = len(labels)
        cells: list[list[Fraction | None]] = [[None] * n for _ in range(n)]
        for i in range(n):
            cells[i][i] = _ZERO
        for (a, b), value in distances.items():
            value = exact(value)
            i, j = index[a], index[b]
            if i == j:
                if value != 0:
                    raise DomainError(f"d({a},{a}) must be 0")
                continue
            if cells[i][j] is not None and cells[i][j] != value:
                raise DomainError(f"conflicting distances for pair ({a},{b})")
            if value <= 0:
                raise DomainError(f"d({a},{b}) must be positive for distinct points")
            cells[i][j] = value
            cells[j][i] = value
        for i in range(n):
            for j in range(n):
                if cells[i][j] is None:
                    raise DomainError(f"missing distance for pair ({labels[i]},{labels[j]})")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if cells[i][j] > cells[i][k] + cells[k][j]:
                        raise DomainError(
                            "triangle inequality fails at "
                            f"({labels[i]},{labels[j]},{labels[k]})"
                        )
        return cls(kind="finite", labels=tuple(labels),
                   table=tuple(tuple(row) for row in cells))

    @classmethod
    def interval(cls, lo, hi, lo_closed=False, hi_closed=False) -> "Space":
        bounds = Piece(lo, hi, lo_closed, hi_closed)
        if bounds.degenerate:
            raise DomainError("interval space needs lo < hi")
        return cls(kind="interval", bounds=bounds)

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def label_index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise DomainError(f"{label!r} is not a point of this space") from None

    def contains(self, x) -> bool:
        if self.is_finite:
            return isinstance(x, str) and x in self.labels
        if isinstance(x, str) or isinstance(x, float):
            return False
        return self.bounds.contains(exact(x))

    def require_member(self, x) -> None:
        if not self.contains(x):
            raise DomainError(f"{x!r} is not a member of {self}")

    def __str__(self) -> str:
        if self.is_finite:
            return f"finite space {{{', '.join(self.labels)}}}"
        return f"interval space {self.bounds}"


def dist(space: Space, x: Point, y: Point) -> Fraction:
    """Exact metric value; 0 iff x == y."""
    space.require_member(x)
    space.require_member(y)
    if space.is_finite:
        return space.table[space.label_index(x)][space.label_index(y)]
    return abs(exact(x) - exact(y))


@dataclass(frozen=True)
class PointSet:
    """A nonempty closed bounded subset of a space, in canonical form.

    Finite spaces store sorted labels.  Interval spaces store a sorted tuple
    of pairwise-disjoint, non-touching closed intervals (degenerate intervals
    encode points); constructors merge overlapping or touching input
    intervals to restore canonical form.
    """

    space: Space
    members: tuple = ()
    intervals: tuple = ()

    @classmethod
    def of_points(cls, space: Space, points: Iterable) -> "PointSet":
        points = list(points)
        if not points:
            raise DomainError("a point set must be nonempty")
        if space.is_finite:
            for p in points:
                space.require_member(p)
            return cls(space=space, members=tuple(sorted(set(points))))
        return cls.of_intervals(space, [(p, p) for p in points])

    @classmethod
    def of_intervals(cls, space: Space, pairs: Iterable) -> "PointSet":
        if space.is_finite:
            raise DomainError("interval sets require an interval space")
        cleaned = []
        for lo, hi in pairs:
            lo, hi = exact(lo), exact(hi)
            if lo > hi:
                raise InputError(f"interval [{lo}, {hi}] has lo > hi")
            cleaned.append((lo, hi))
        if not cleaned:
            raise DomainError("a point set must be nonempty")
        cleaned.sort()
        merged = [cleaned[0]]
        for lo, hi in cleaned[1:]:
            last_lo, last_hi = merged[-1]
            if lo <= last_hi:
                merged[-1] = (last_lo, max(last_hi, hi))
            else:
                merged.append((lo, hi))
        for lo, hi in merged:
            # open ambient ends reject boundary-touching sets
            space.require_member(lo)
            space.require_member(hi)
        return cls(space=space, intervals=tuple(merged))

    @property
    def is_points(self) -> bool:
        if self.space.is_finite:
            return True
        return all(lo == hi for lo, hi in self.intervals)

    def points(self) -> tuple:
        """The elements, for sets that are finite collections of points."""
        if self.space.is_finite:
            return self.members
        if not self.is_points:
            raise InputError(f"{self} is not a finite point collection")
        return tuple(lo for lo, _ in self.intervals)

    def contains(self, x) -> bool:
        if self.space.is_finite:
            return x in self.members
        if isinstance(x, (str, float)):
            return False
        x = exact(x)
        return any(lo <= x <= hi for lo, hi in self.intervals)

    def superset_of(self, other: "PointSet") -> bool:
        if self.space != other.space:
            raise DomainError("sets from different spaces")
        if self.space.is_finite:
            return set(other.members) <= set(self.members)
        j = 0
        for lo, hi in other.intervals:
            while j < len(self.intervals) and self.intervals[j][1] < lo:
                j += 1
            if j == len(self.intervals):
                return False
            big_lo, big_hi = self.intervals[j]
            if not (big_lo <= lo and hi <= big_hi):
                return False
        return True

    def first_point_not_in(self, other: "PointSet") -> Point | None:
        """Some concrete element of self outside other; None if contained."""
        if self.space.is_finite:
            for label in self.members:
                if label not in other.members:
                    return label
            return None
        for lo, hi in self.intervals:
            if not other.contains(lo):
                return lo
            # lo is covered; find the covering component and look past it
            cover_hi = next(h for (l, h) in other.intervals if l <= lo <= h)
            if cover_hi >= hi:
                continue
            nxt = [l for (l, h) in other.intervals if l > cover_hi]
            edge = min(nxt[0] if nxt else hi, hi)
            return (cover_hi + edge) / 2
        return None

    def min_value(self) -> Fraction:
        if self.space.is_finite:
            raise InputError("min_value needs an interval-space set")
        return self.intervals[0][0]

    def max_value(self) -> Fraction:
        if self.space.is_finite:
            raise InputError("max_value needs an interval-space set")
        return self.intervals[-1][1]

    def __str__(self) -> str:
        if self.space.is_finite:
            return "{" + ", ".join(self.members) + "}"
        parts = []
        for lo, hi in self.intervals:
            parts.append(f"{{{lo}}}" if lo == hi else f"[{lo}, {hi}]")
        return " ∪ ".join(parts)


class Witnessed(NamedTuple):
    """A distance value together with a point attaining it."""

    value: Fraction
    witness: Point


def _require_same_space(space: Space, *sets: PointSet) -> None:
    for s in sets:
        if s.space != space:
            raise DomainError("point set does not belong to the given space")


def point_to_set(space: Space, a: Point, bset: PointSet) -> Witnessed:
    """inf over b in B of d(a, b), with the attaining b (sets are closed).

    Ties are broken toward the leftmost (or lexicographically smallest)
    attaining point.
    """
    space.require_member(a)
    _require_same_space(space, bset)
    if space.is_finite:
        best = None
        for label in bset.members:
            d = dist(space, a, label)
            if best is None or d < best.value:
                best = Witnessed(d, label)
        return best
    a = exact(a)
    best = None
    for lo, hi in bset.intervals:
        if lo <= a <= hi:
            return Witnessed(_ZERO, a)
        nearest = lo if a < lo else hi
        d = abs(a - nearest)
        if best is None or d < best.value:
            best = Witnessed(d, nearest)
    return best


def set_to_set(space: Space, aset: PointSet, bset: PointSet) -> Fraction:
    """inf over pairs (a, b) of d(a, b) — the gap between the sets."""
    _require_same_space(space, aset, bset)
    if space.is_finite:
        return min(point_to_set(space, a, bset).value for a in aset.members)
    best = None
    for a_lo, a_hi in aset.intervals:
        for b_lo, b_hi in bset.intervals:
            if a_lo <= b_hi and b_lo <= a_hi:
                return _ZERO
            gap = b_lo - a_hi if b_lo > a_hi else a_lo - b_hi
            if best is None or gap < best:
                best = gap
    return best


def directed_hausdorff(space: Space, aset: PointSet, bset: PointSet) -> Witnessed:
    """sup over a in A of d(a, B), with a maximizing a.

    On interval unions the maximizer of the piecewise-linear map
    a -> d(a, B) lies in a finite candidate set: the endpoints of A's
    intervals plus the midpoints of B's complementary gaps that fall inside
    A.  The supremum is computed exactly from those candidates, never by
    sampling.
    """
    _require_same_space(space, aset, bset)
    if space.is_finite:
        best = None
        for a in aset.members:
            d = point_to_set(space, a, bset).value
            if best is None or d > best.value:
                best = Witnessed(d, a)
        return best
    candidates = set()
    for lo, hi in aset.intervals:
        candidates.add(lo)
        candidates.add(hi)
    bint = bset.intervals
    for i in range(len(bint) - 1):
        mid = (bint[i][1] + bint[i + 1][0]) / 2
        if aset.contains(mid):
            candidates.add(mid)
    best = None
    for a in sorted(candidates):
        d = point_to_set(space, a, bset).value
        if best is None or d > best.value:
            best = Witnessed(d, a)
    return best


def hausdorff(space: Space, aset: PointSet, bset: PointSet) -> Fraction:
    """max of the two directed distances — the Hausdorff metric, exact."""
    forward = directed_hausdorff(space, aset, bset).value
    backward = directed_hausdorff(space, bset, aset).value
    return max(forward, backward)
