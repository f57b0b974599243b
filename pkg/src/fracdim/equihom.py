"""Equi-homogeneity certification and regularity checks.

A set is equi-homogeneous when, at each scale pair, the largest local
cover over all positions exceeds the smallest only by a uniform factor
(after adjusting the comparison scales by constants c1 >= 1 >= c2).
Finite grids cannot prove this, so verdicts are trichotomous: bounded,
growing, or inconclusive.  Ratios reported from sampled centers are
certified lower bounds for the true uniformity constant.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import SetLike, log_float, power_float
from .dims import LocalCoverProfile, _scale_pairs, _tail, local_cover_profile
from .errors import (ExponentMismatch, NotAutonomous, ParseError,
                     ScaleOrderViolation, TooFewScales)
from .ifs import (IndexedSystem, OpenIntervalSet, Word, cylinder_decomposition,
                  fixed_point, moran_exponent, verify_mosc, word_map)


@dataclass(frozen=True)
class EquihomReport:
    """Evidence table for the uniform sup/inf local-cover comparison.

    ``max_ratio`` is the largest observed sup/inf ratio (a lower bound
    for the true constant); ``growth_fit`` is the least-squares slope of
    log ratio against log(1/rho).
    """

    profile: LocalCoverProfile
    comparison: LocalCoverProfile
    c1: Fraction
    c2: Fraction
    rows: tuple[tuple[Fraction, Fraction, float], ...]  # (delta, rho, ratio)
    max_ratio: float
    growth_fit: float
    verdict: str


def _least_squares_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    n = len(xs)
    if n < 2:
        return 0.0
    mx = sum(xs) / n
    my = sum(ys) / n
    var = sum((x - mx) ** 2 for x in xs)
    if var == 0:
        return 0.0
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / var


def _verdict(trend: Sequence[float], growth_fit: float) -> str:
    """Trichotomous call from the per-rho max ratios, rho decreasing."""
    tail = _tail(list(trend))
    monotone = all(a <= b + 1e-12 for a, b in zip(tail, tail[1:]))
    if growth_fit > 0.1 and monotone:
        return "growing"
    mean = sum(tail) / len(tail)
    if all(0.9 * mean <= v <= 1.1 * mean for v in tail):
        return "bounded"
    return "inconclusive"


def equihom_certify(f: SetLike, delta_grid, ratio_grid,
                    c1: Fraction = Fraction(1), c2: Fraction = Fraction(1),
                    centers: Optional[Sequence[Fraction]] = None,
                    paired: bool = False) -> EquihomReport:
    """Compare the largest local cover at (delta, rho) with the smallest
    at (c1*delta, c2*rho) over the candidate family, for every grid pair.
    """
    if not 0 < c2 <= 1 <= c1:
        raise ScaleOrderViolation("need 0 < c2 <= 1 <= c1")
    pairs = _scale_pairs(delta_grid, ratio_grid, paired)
    deltas = [d for d, _ in pairs]
    rhos = [r for _, r in pairs]
    profile = local_cover_profile(f, deltas, rhos, centers=centers,
                                  paired=True)
    if c1 == 1 and c2 == 1:
        comparison = profile
    else:
        comparison = local_cover_profile(
            f, [c1 * d for d in deltas], [c2 * r for r in rhos],
            centers=centers, paired=True)

    rows = tuple(
        (top.delta, top.rho, top.sup_count / bottom.inf_count)
        for top, bottom in zip(profile.rows, comparison.rows))
    max_ratio = max(r for _, _, r in rows)

    per_rho: dict[Fraction, float] = {}
    for _, rho, ratio in rows:
        per_rho[rho] = max(per_rho.get(rho, 0.0), ratio)
    ordered = sorted(per_rho.items(), key=lambda kv: kv[0], reverse=True)
    growth_fit = _least_squares_slope(
        [-log_float(rho) for rho, _ in ordered],
        [math.log(ratio) for _, ratio in ordered])

    return EquihomReport(profile, comparison, c1, c2, rows, max_ratio,
                         growth_fit,
                         _verdict([ratio for _, ratio in ordered], growth_fit))


def equihom_singlepoint_assouad(f: SetLike, x: Fraction, delta_grid,
                                ratio_grid, paired: bool = False) -> float:
    """Assouad estimate from the local-cover scaling at one point:
    largest tail slope of log count against log(delta/rho).

    Only meaningful when the set is equi-homogeneous (or assumed so);
    then the scaling at any single point determines the dimension.
    """
    profile = local_cover_profile(f, delta_grid, ratio_grid, centers=[x],
                                  paired=paired)
    by_ratio: dict[Fraction, int] = {}
    for row in profile.rows:
        ratio = row.delta / row.rho
        by_ratio[ratio] = max(by_ratio.get(ratio, 0), row.sup_count)
    ordered = sorted(by_ratio.items())
    if len(ordered) < 2:
        raise TooFewScales("need at least two distinct delta/rho ratios")
    slopes = [
        (math.log(n1) - math.log(n0)) / (log_float(r1) - log_float(r0))
        for (r0, n0), (r1, n1) in zip(ordered, ordered[1:])
    ]
    return max(_tail(slopes))


# ---------------------------------------------------------------------------
# Ahlfors-David style regularity via the natural measure


@dataclass(frozen=True)
class RegularitySample:
    x: Fraction
    delta: Fraction
    outer: float  # cylinder-sum upper bracket for mu(B_delta(x))
    inner: float  # cylinder-sum lower bracket
    ratio_outer: float  # outer / delta^s
    ratio_inner: float


@dataclass(frozen=True)
class RegularityReport:
    """Bracketed natural-measure ratios mu(B_delta(x)) / delta^s.

    ``c_observed`` is the smallest constant with every sampled bracket
    inside [1/C, C]; small stable values support s-regularity.
    """

    s: float
    samples: tuple[RegularitySample, ...]
    c_observed: float


def _sample_points(sys: IndexedSystem, depth: int) -> list[Fraction]:
    """Cylinder images of the map fixed points down to the given depth;
    all of them lie on the attractor."""
    base = sorted({fixed_point(f) for f in sys.level_maps(1)})
    points = set(base)
    words = [((), Fraction(1))]
    for level in range(1, depth + 1):
        words = [(entries + ((level, idx),), ratio * f.ratio)
                 for entries, ratio in words
                 for idx, f in enumerate(sys.level_maps(level))]
    for entries, ratio in words:
        mapping = word_map(sys, Word(entries, ratio, 0, depth))
        points.update(mapping(b) for b in base)
    return sorted(points)


def _bracket_descend(sys: IndexedSystem, s: float, mapping, level: int,
                     ratio: Fraction, hull0, lo_edge, hi_edge,
                     eps: float, depth_left: int) -> tuple[float, float]:
    """(inner, outer) natural-measure bracket of one cylinder against the
    window, splitting boundary cylinders until they resolve or become
    lighter than eps."""
    piece = mapping.map_interval(hull0)
    if piece.lo >= lo_edge and piece.hi <= hi_edge:
        w = power_float(ratio, s)
        return w, w
    if piece.lo >= hi_edge or piece.hi <= lo_edge:
        # touching at a single endpoint carries zero measure
        return 0.0, 0.0
    w = power_float(ratio, s)
    if depth_left == 0 or w <= eps:
        return 0.0, w
    inner = outer = 0.0
    for child in sys.level_maps(level + 1):
        ci, co = _bracket_descend(sys, s, mapping.compose(child), level + 1,
                                  ratio * child.ratio, hull0,
                                  lo_edge, hi_edge, eps, depth_left - 1)
        inner += ci
        outer += co
    return inner, outer


def ahlfors_regularity_check(sys: IndexedSystem, s: float, sample_depth: int,
                             open_set: Optional[OpenIntervalSet] = None
                             ) -> RegularityReport:
    """Estimate the regularity constant of an autonomous attractor.

    The measure of each ball is bracketed between the natural-measure
    weights of the cylinders contained in it and of those meeting its
    interior; boundary cylinders are split recursively so both brackets
    converge onto the true measure.
    """
    if not sys.cyclic:
        raise NotAutonomous("regularity check needs an autonomous system")
    solved = moran_exponent([f.ratio for f in sys.level_maps(1)])
    if abs(solved - s) > 1e-9:
        raise ExponentMismatch(
            f"supplied exponent {s} but the ratios solve to {solved}")
    if open_set is None:
        open_set = OpenIntervalSet.build([(Fraction(0), Fraction(1))])
    cert = verify_mosc(sys, [open_set, open_set], open_set.length)
    if not cert.passed:
        raise ParseError("the open set fails the Moran condition")

    hull0 = open_set.closure_hull
    eta = open_set.closure_diameter
    xs = _sample_points(sys, min(4, sample_depth))
    sigma_up = sys.sigma_star_upper

    samples = []
    c_observed = 1.0
    for j in range(1, sample_depth + 1):
        delta = eta * sigma_up**j
        cylinders = cylinder_decomposition(sys, 0, delta, eta)
        pieces = sorted(
            ((word_map(sys, w), w) for w in cylinders),
            key=lambda mw: mw[0].map_interval(hull0).lo)
        hulls = [m.map_interval(hull0) for m, _ in pieces]
        los = [iv.lo for iv in hulls]
        his = [iv.hi for iv in hulls]
        prefix = [0.0]
        for _, w in pieces:
            prefix.append(prefix[-1] + power_float(w.ratio, s))
        delta_s = power_float(delta, s)
        eps = delta_s * 1e-3

        for x in xs:
            lo_edge, hi_edge = x - delta, x + delta
            # hulls are sorted and non-overlapping, so the contained and
            # interior-meeting cylinders form contiguous index ranges
            meet_hi = bisect_left(los, hi_edge)
            meet_lo = bisect_right(his, lo_edge)
            in_lo = max(bisect_left(los, lo_edge), meet_lo)
            in_hi = min(bisect_right(his, hi_edge), meet_hi)
            if in_hi > in_lo:
                inner = outer = prefix[in_hi] - prefix[in_lo]
                boundary = list(range(meet_lo, in_lo)) + list(range(in_hi, meet_hi))
            else:
                inner = outer = 0.0
                boundary = list(range(meet_lo, meet_hi))
            for idx in boundary:
                mapping, w = pieces[idx]
                ci, co = _bracket_descend(sys, s, mapping, w.end_level,
                                          w.ratio, hull0, lo_edge, hi_edge,
                                          eps, 40)
                inner += ci
                outer += co
            if inner <= 0:
                continue
            r_out = outer / delta_s
            r_in = inner / delta_s
            samples.append(RegularitySample(x, delta, outer, inner,
                                            r_out, r_in))
            c_observed = max(c_observed, r_out, 1.0 / r_in)

    return RegularityReport(s, tuple(samples), c_observed)
