"""Exact scalars, canonical interval/point sets and the Hausdorff metric.

All geometry is carried out on arbitrary-precision rationals
(:class:`fractions.Fraction`); floating point enters only when logarithms
are taken for dimension slopes.  Sets are immutable values after
construction and safe to share between threads.
"""

from __future__ import annotations

import decimal
import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import EmptySet, MalformedInterval, ParseError

# Exact rationals are the one scalar type used for geometry.  Fraction
# already guarantees the invariants we need: lowest terms, positive
# denominator, exact arithmetic and ordering.
ExactScalar = Fraction

#: Absolute precision used when an irrational value has to be converted
#: to an exact scalar (far below any length scale the library tests).
CONVERSION_PRECISION = Fraction(1, 2**96)


def as_scalar(value: Union[int, str, Fraction]) -> Fraction:
    """Coerce an int, Fraction or "p/q" string to an exact scalar."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational: {value!r}") from exc
    raise ParseError(f"cannot interpret {value!r} as an exact scalar")


def format_scalar(value: Fraction) -> str:
    """Serialize as "p/q", or "p" when the denominator is one."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def scalar_from_decimal(value: decimal.Decimal,
                        precision: Fraction = CONVERSION_PRECISION) -> Fraction:
    """Round an arbitrary-precision decimal to the nearest multiple of
    ``precision``.  Used at the few sites that admit irrational inputs."""
    exact = Fraction(value)
    steps = exact / precision
    # round half away from zero; the tie direction is irrelevant at 2^-96
    whole, rem = divmod(steps.numerator, steps.denominator)
    if 2 * rem >= steps.denominator:
        whole += 1
    return whole * precision


def power_float(q: Fraction, s: float) -> float:
    """q**s through logarithms of the exact integer parts, stable even
    when q is far below float range."""
    if s == 0:
        return 1.0
    return math.exp(s * (math.log(q.numerator) - math.log(q.denominator)))


def log_float(q: Fraction) -> float:
    """log q from the exact integer parts."""
    return math.log(q.numerator) - math.log(q.denominator)


@dataclass(frozen=True, order=True)
class Interval:
    """Closed interval [lo, hi]; a degenerate point interval is allowed."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise MalformedInterval(f"lo {self.lo} > hi {self.hi}")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi


@dataclass(frozen=True)
class IntervalSet:
    """Canonical finite union of closed intervals.

    Intervals are sorted and strictly separated (touching or overlapping
    inputs merge on construction), so equality of values is equality of
    the underlying point sets.
    """

    intervals: tuple[Interval, ...]

    @property
    def length(self) -> Fraction:
        return sum((iv.length for iv in self.intervals), Fraction(0))

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def support(self) -> Interval:
        if self.is_empty:
            raise EmptySet("empty interval set has no support")
        return Interval(self.intervals[0].lo, self.intervals[-1].hi)

    def segments(self) -> list[tuple[Fraction, Fraction]]:
        return [(iv.lo, iv.hi) for iv in self.intervals]

    def __contains__(self, x: Fraction) -> bool:
        los = [iv.lo for iv in self.intervals]
        j = bisect_right(los, x) - 1
        return j >= 0 and x <= self.intervals[j].hi

    def __len__(self) -> int:
        return len(self.intervals)


@dataclass(frozen=True)
class PointSet:
    """Strictly increasing, duplicate-free finite set of exact points."""

    points: tuple[Fraction, ...]

    @property
    def is_empty(self) -> bool:
        return not self.points

    def segments(self) -> list[tuple[Fraction, Fraction]]:
        return [(p, p) for p in self.points]

    def __contains__(self, x: Fraction) -> bool:
        j = bisect_right(self.points, x) - 1
        return j >= 0 and self.points[j] == x

    def __len__(self) -> int:
        return len(self.points)


SetLike = Union[IntervalSet, PointSet]


def interval_set_normalize(raw: Iterable[Union[Interval, tuple]]) -> IntervalSet:
    """Canonicalize a collection of intervals: sort, merge touching or
    overlapping ones.  The union of points is unchanged."""
    items: list[Interval] = []
    for entry in raw:
        if isinstance(entry, Interval):
            items.append(entry)
        else:
            lo, hi = entry
            items.append(Interval(as_scalar(lo), as_scalar(hi)))
    items.sort()
    merged: list[Interval] = []
    for iv in items:
        if merged and iv.lo <= merged[-1].hi:
            if iv.hi > merged[-1].hi:
                merged[-1] = Interval(merged[-1].lo, iv.hi)
        else:
            merged.append(iv)
    return IntervalSet(tuple(merged))


def point_set(points: Iterable[Union[int, str, Fraction]]) -> PointSet:
    """Build a canonical PointSet (sorted, deduplicated)."""
    return PointSet(tuple(sorted(set(as_scalar(p) for p in points))))


def unit_interval() -> IntervalSet:
    return interval_set_normalize([(Fraction(0), Fraction(1))])


# ---------------------------------------------------------------------------
# example set factories


def inverse_power_points(n_max: int, alpha: Union[int, Fraction]) -> PointSet:
    """The truncation {n^-alpha : 1 <= n <= n_max} together with 0.

    Integer alpha stays exact; a non-integer exponent is evaluated in
    high-precision decimal and rounded to ``CONVERSION_PRECISION``.
    """
    if n_max < 1:
        raise EmptySet("n_max must be at least 1")
    alpha = as_scalar(alpha)
    pts: list[Fraction] = [Fraction(0)]
    if alpha.denominator == 1:
        a = alpha.numerator
        pts.extend(Fraction(1, n**a) for n in range(1, n_max + 1))
    else:
        with decimal.localcontext() as ctx:
            ctx.prec = 60
            exponent = decimal.Decimal(alpha.numerator) / decimal.Decimal(alpha.denominator)
            for n in range(1, n_max + 1):
                approx = decimal.Decimal(n) ** (-exponent)
                pts.append(scalar_from_decimal(approx))
    return point_set(pts)


def dyadic_gap_points(n_max: int) -> PointSet:
    """The set {0, 1} together with {2^-n : 1 <= n <= n_max}."""
    if n_max < 1:
        raise EmptySet("n_max must be at least 1")
    pts = [Fraction(0), Fraction(1)]
    pts.extend(Fraction(1, 2**n) for n in range(1, n_max + 1))
    return point_set(pts)


# ---------------------------------------------------------------------------
# Hausdorff semi-distance and distance


def _distance_to_set(x: Fraction, segs: Sequence[tuple[Fraction, Fraction]],
                     los: Sequence[Fraction]) -> Fraction:
    """Exact distance from a point to a union of closed segments."""
    j = bisect_right(los, x) - 1
    best = None
    if j >= 0:
        lo, hi = segs[j]
        if x <= hi:
            return Fraction(0)
        best = x - hi
    if j + 1 < len(segs):
        d = segs[j + 1][0] - x
        best = d if best is None or d < best else best
    return best


def _require_nonempty(s: SetLike, side: str) -> list[tuple[Fraction, Fraction]]:
    segs = s.segments()
    if not segs:
        raise EmptySet(f"{side} operand is empty")
    return segs


def hausdorff_semidistance(a: SetLike, b: SetLike) -> Fraction:
    """sup over x in A of the distance from x to B, exactly.

    The supremum is attained either at an endpoint of a segment of A or
    at the midpoint of a gap of B falling inside A, so those finitely
    many candidates are enumerated.
    """
    asegs = _require_nonempty(a, "first")
    bsegs = _require_nonempty(b, "second")
    blos = [lo for lo, _ in bsegs]

    candidates: list[Fraction] = []
    for lo, hi in asegs:
        candidates.append(lo)
        if hi != lo:
            candidates.append(hi)
    alos = [lo for lo, _ in asegs]
    for (_, prev_hi), (next_lo, _) in zip(bsegs, bsegs[1:]):
        mid = (prev_hi + next_lo) / 2
        j = bisect_right(alos, mid) - 1
        if j >= 0 and mid <= asegs[j][1]:
            candidates.append(mid)

    return max(_distance_to_set(x, bsegs, blos) for x in candidates)


def hausdorff_distance(a: SetLike, b: SetLike) -> Fraction:
    """Symmetric Hausdorff distance: zero iff the closed sets coincide."""
    return max(hausdorff_semidistance(a, b), hausdorff_semidistance(b, a))
