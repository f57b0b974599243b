"""Exact covering and packing numbers for finite unions of segments.

Covering uses the classical left-to-right greedy, which is optimal in one
dimension; a dynamic-programming oracle over small point sets provides an
independent cross-check.  Balls are closed throughout, so a packing needs
center gaps strictly greater than twice the radius.

The sweep kernels are generic over the scalar type: they run on exact
rationals, or on plain integers after rescaling by a common denominator
(see :class:`ScaledGeometry`), which is what the grid-evaluation hot
paths use.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import PointSet, SetLike
from .errors import (CenterNotInSet, EmptySet, InvariantViolation,
                     NonPositiveScale, ScaleOrderViolation, TooLarge)

Seg = tuple  # (lo, hi) pairs, ints or Fractions


@dataclass(frozen=True)
class CoverCount:
    """An exact count together with its witness centers.

    For a covering the closed balls around the centers cover the set;
    for a packing they are pairwise disjoint.  Centers always lie in
    the set itself.
    """

    count: int
    centers: tuple[Fraction, ...]


# ---------------------------------------------------------------------------
# generic sweep kernels (segments sorted, disjoint, lo <= hi)


def _cover_sweep(segs: Sequence[Seg], los: Sequence, radius):
    """Greedy minimum cover by closed balls of the given radius.

    Repeatedly takes the infimum of the uncovered region and centers a
    ball at the largest point of the set not beyond it by more than the
    radius.  Returns (count, centers).
    """
    centers = []
    target = segs[0][0]
    n = len(segs)
    while True:
        reach = target + radius
        j = bisect_right(los, reach) - 1
        hi = segs[j][1]
        center = hi if hi <= reach else reach
        centers.append(center)
        covered = center + radius
        k = bisect_right(los, covered)
        if k > 0 and segs[k - 1][1] > covered:
            target = covered
        elif k < n:
            target = segs[k][0]
        else:
            return len(centers), centers


def _strict_floor_div(span, step) -> int:
    """Largest integer m with m * step < span, for span > 0."""
    q, r = divmod(span, step)
    q = int(q)
    return q - 1 if r == 0 else q


def _packing_runs(segs: Sequence[Seg], radius):
    """Maximal packing by closed balls: count plus per-segment runs.

    A run records where centers land inside one segment; positions are
    kept at their left-most (infimum) placements, with gaps of exactly
    twice the radius, to be inflated into strict witnesses afterwards.
    """
    two = radius + radius
    threshold = None  # next center must lie strictly beyond this
    runs = []  # (base, attained, count, seg_hi)
    total = 0
    for lo, hi in segs:
        if threshold is not None and hi <= threshold:
            continue
        attained = threshold is None or lo > threshold
        base = lo if attained else threshold
        span = hi - base
        count = 1 if span == 0 else _strict_floor_div(span, two) + 1
        runs.append((base, attained, count, hi))
        total += count
        threshold = base + count * two
    return total, runs


def _realize_packing(runs, radius) -> list:
    """Turn infimum-placed packing runs into explicit strict witnesses.

    Every center except an attained run head is nudged right by an
    accumulating global margin, chosen small enough to stay inside its
    segment and to keep all gaps strictly above twice the radius.
    """
    two = radius + radius
    total = sum(count for _, _, count, _ in runs)
    constraints = []
    threshold = None
    for base, attained, count, hi in runs:
        if attained and threshold is not None:
            constraints.append(base - threshold)
        last_nominal = base + (count - 1) * two
        if not (attained and count == 1):
            constraints.append(hi - last_nominal)
        threshold = base + count * two
    margin = min(constraints) / (2 * total) if constraints else 0
    centers = []
    shifts = 0
    for base, attained, count, _ in runs:
        for k in range(count):
            nominal = base + k * two
            if attained and k == 0:
                centers.append(nominal)
            else:
                shifts += 1
                centers.append(nominal + shifts * margin)
    return centers


# ---------------------------------------------------------------------------
# public operations (exact rationals)


def _segments_checked(f: SetLike) -> list[Seg]:
    segs = f.segments()
    if not segs:
        raise EmptySet("set is empty")
    return segs


def _check_radius(delta: Fraction) -> None:
    if delta <= 0:
        raise NonPositiveScale(f"scale must be positive, got {delta}")


def covering_number(f: SetLike, delta: Fraction) -> CoverCount:
    """Exact minimum number of closed delta-balls with centers in F
    whose union contains F."""
    segs = _segments_checked(f)
    _check_radius(delta)
    count, centers = _cover_sweep(segs, [s[0] for s in segs], delta)
    return CoverCount(count, tuple(centers))


def packing_number(f: SetLike, delta: Fraction) -> CoverCount:
    """Exact maximum number of pairwise disjoint closed delta-balls with
    centers in F."""
    segs = _segments_checked(f)
    _check_radius(delta)
    count, runs = _packing_runs(segs, delta)
    return CoverCount(count, tuple(_realize_packing(runs, delta)))


def _clip_segments(segs: Sequence[Seg], los: Sequence, lo, hi) -> list[Seg]:
    out = []
    i = bisect_right(los, lo)
    if i > 0 and segs[i - 1][1] >= lo:
        i -= 1
    n = len(segs)
    while i < n:
        a, b = segs[i]
        if a > hi:
            break
        c = a if a > lo else lo
        d = b if b < hi else hi
        if c <= d:
            out.append((c, d))
        i += 1
    return out


def _member(segs: Sequence[Seg], los: Sequence, x) -> bool:
    j = bisect_right(los, x) - 1
    return j >= 0 and x <= segs[j][1]


def _window_cover_sweep(segs: Sequence[Seg], los: Sequence, his: Sequence,
                        wlo, whi, radius):
    """Greedy cover of the set intersected with [wlo, whi], without
    materializing the intersection.  Returns (count, centers); zero for
    an empty window."""
    n = len(segs)
    # first point of the window
    i = bisect_right(los, wlo)
    if i > 0 and segs[i - 1][1] >= wlo:
        target = wlo
    elif i < n:
        target = segs[i][0]
    else:
        return 0, []
    if target > whi:
        return 0, []

    centers = []
    while True:
        reach = target + radius
        j = bisect_right(los, reach) - 1
        center = segs[j][1] if segs[j][1] <= reach else reach
        if center > whi:
            # largest window point instead: whi if inside a segment,
            # otherwise the last segment end below it
            k = bisect_right(los, whi) - 1
            center = whi if segs[k][1] >= whi else segs[k][1]
            if center < target:
                center = target
        centers.append(center)
        covered = center + radius
        if covered >= whi:
            return len(centers), centers
        k = bisect_right(los, covered)
        if k > 0 and segs[k - 1][1] > covered:
            target = covered
        elif k < n:
            target = segs[k][0]
        else:
            return len(centers), centers
        if target > whi:
            return len(centers), centers


def _local_count(segs: Sequence[Seg], los: Sequence, his: Sequence,
                 x, delta, rho) -> int:
    """Covering number of the window around x; no scale-order check so
    that degenerate windows resolve to one ball."""
    return _window_cover_sweep(segs, los, his, x - delta, x + delta, rho)[0]


def local_covering_number(f: SetLike, x: Fraction, delta: Fraction,
                          rho: Fraction) -> CoverCount:
    """Exact covering number of B_delta(x) intersected with F, at scale
    rho, with ball centers constrained to the intersection."""
    segs = _segments_checked(f)
    _check_radius(delta)
    _check_radius(rho)
    if rho >= delta:
        raise ScaleOrderViolation(f"rho {rho} must be below delta {delta}")
    los = [s[0] for s in segs]
    if not _member(segs, los, x):
        raise CenterNotInSet(f"{x} is not a point of the set")
    his = [s[1] for s in segs]
    count, centers = _window_cover_sweep(segs, los, his, x - delta, x + delta, rho)
    return CoverCount(count, tuple(centers))


def covering_number_bruteforce(f: PointSet, delta: Fraction) -> CoverCount:
    """Exact minimum cover of a small point set by dynamic programming.

    Considers every admissible center for the leftmost uncovered point
    and recurses; independent of the greedy sweep, used as its oracle.
    """
    if not isinstance(f, PointSet):
        raise TooLarge("brute-force oracle only accepts point sets")
    pts = f.points
    if not pts:
        raise EmptySet("set is empty")
    _check_radius(delta)
    if len(pts) > 24:
        raise TooLarge(f"{len(pts)} points exceeds the oracle limit of 24")

    n = len(pts)
    memo: dict[int, tuple[int, tuple]] = {n: (0, ())}

    def solve(i: int) -> tuple[int, tuple]:
        if i in memo:
            return memo[i]
        best: Optional[tuple[int, tuple]] = None
        # try every center within delta to the right of the first
        # uncovered point (anything further left is dominated)
        j = i
        while j < n and pts[j] <= pts[i] + delta:
            center = pts[j]
            nxt = bisect_right(pts, center + delta)
            sub_count, sub_centers = solve(nxt)
            if best is None or 1 + sub_count < best[0]:
                best = (1 + sub_count, (center,) + sub_centers)
            j += 1
        memo[i] = best
        return best

    count, centers = solve(0)
    return CoverCount(count, centers)


def verify_cover_packing_sandwich(f: SetLike, delta: Fraction) -> bool:
    """Check N(F, 2d) <= P(F, d) <= N(F, d) on exact counts.

    Any maximal packing of d-balls leaves no point of F further than 2d
    from a packing center, so doubling the radii yields a cover; and no
    d-ball can hold two packing centers.  (With P evaluated at 2d instead
    of d the left inequality fails for sparse sets, e.g. two points at
    distance 3d.)
    """
    n_coarse = covering_number(f, 2 * delta).count
    p_mid = packing_number(f, delta).count
    n_fine = covering_number(f, delta).count
    return n_coarse <= p_mid <= n_fine


def verify_refinement(f: SetLike, x: Fraction, delta: Fraction, r: Fraction,
                      rho: Fraction) -> bool:
    """Check the local-cover refinement inequality: covering the window
    at rho never needs more than covering it at r times the largest
    r-window cover at rho, the latter taken over the sampled candidate
    centers."""
    segs = _segments_checked(f)
    for scale in (delta, r, rho):
        _check_radius(scale)
    los = [s[0] for s in segs]
    his = [s[1] for s in segs]
    if not _member(segs, los, x):
        raise CenterNotInSet(f"{x} is not a point of the set")
    left = _local_count(segs, los, his, x, delta, rho)
    mid = _local_count(segs, los, his, x, delta, r)
    sup = max(_local_count(segs, los, his, y, r, rho)
              for y in candidate_centers(f))
    return left <= mid * sup


def candidate_centers(f: SetLike) -> list[Fraction]:
    """Default family of local-cover centers: segment endpoints plus
    midpoints for interval sets, every point for point sets.

    Sampled suprema/infima over this family are one-sided: a reported
    sup is a lower bound for the true supremum and a reported inf an
    upper bound for the true infimum.
    """
    if isinstance(f, PointSet):
        return list(f.points)
    out: set[Fraction] = set()
    for iv in f.intervals:
        out.add(iv.lo)
        out.add(iv.hi)
        out.add(iv.midpoint)
    return sorted(out)


# ---------------------------------------------------------------------------
# rescaled evaluation context for grid hot paths


class ScaledGeometry:
    """Evaluates covering numbers over a fixed grid of scales cheaply.

    When the common denominator of every endpoint and scale is small the
    geometry is rescaled once to plain integers, making the sweeps pure
    int arithmetic; otherwise it falls back to exact rationals.  Results
    are identical either way.
    """

    _LCM_BIT_LIMIT = 1024

    def __init__(self, f: SetLike, scalars: Sequence[Fraction]):
        segs = _segments_checked(f)
        lcm = 1
        for value in [x for seg in segs for x in seg] + list(scalars):
            d = value.denominator
            lcm = lcm * d // math.gcd(lcm, d)
            if lcm.bit_length() > self._LCM_BIT_LIMIT:
                lcm = None
                break
        if lcm is None:
            self.scale: Optional[int] = None
            self.segs: list[Seg] = segs
        else:
            self.scale = lcm
            self.segs = [((lo * lcm).numerator, (hi * lcm).numerator)
                         for lo, hi in segs]
        self.los = [s[0] for s in self.segs]
        self.his = [s[1] for s in self.segs]

    def lift(self, value: Fraction):
        if self.scale is None:
            return value
        scaled = value * self.scale
        if scaled.denominator != 1:
            raise InvariantViolation(
                f"scalar {value} not representable on the common grid")
        return scaled.numerator

    def member(self, x) -> bool:
        return _member(self.segs, self.los, x)

    def local_count(self, x, delta, rho) -> int:
        """x, delta, rho already lifted through :meth:`lift`."""
        return _local_count(self.segs, self.los, self.his, x, delta, rho)

    def global_count(self, delta) -> int:
        return _cover_sweep(self.segs, self.los, delta)[0]
