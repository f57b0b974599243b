"""Dimension estimation from exact covering counts.

Counts stay exact integers; floating point enters only in the logarithms
of the slope estimators.  Limit superior / inferior behaviour is
approximated by the extreme two-point slopes over the last half of a
grid, and the full slope sequences are kept for diagnostics.

Sampled local suprema and infima are one-sided: a reported sup is a
lower bound for the true supremum and a reported inf an upper bound for
the true infimum, so reported sup/inf ratios certify lower bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from .core import SetLike, log_float, power_float
from .covers import CenterNotInSet, ScaledGeometry, candidate_centers
from .errors import (EmptySet, NonPositiveScale, ScaleOrderViolation,
                     TooFewScales)


@dataclass(frozen=True)
class ScaleGrid:
    """Geometric grid delta_j = base * factor^j for j = 0..depth-1."""

    base: Fraction
    factor: Fraction
    depth: int

    def __post_init__(self) -> None:
        if self.base <= 0:
            raise NonPositiveScale("grid base must be positive")
        if not 0 < self.factor < 1:
            raise ScaleOrderViolation("grid factor must lie in (0, 1)")
        if self.depth < 1:
            raise TooFewScales("grid needs at least one scale")

    def scales(self) -> list[Fraction]:
        out, current = [], self.base
        for _ in range(self.depth):
            out.append(current)
            current *= self.factor
        return out


def _as_scales(grid) -> list[Fraction]:
    if isinstance(grid, ScaleGrid):
        return grid.scales()
    scales = list(grid)
    if not scales:
        raise TooFewScales("empty scale grid")
    return scales


def box_counts(f: SetLike, grid) -> list[tuple[Fraction, int]]:
    """Exact global covering number at every grid scale."""
    scales = _as_scales(grid)
    if not f.segments():
        raise EmptySet("set is empty")
    geom = ScaledGeometry(f, scales)
    return [(delta, geom.global_count(geom.lift(delta))) for delta in scales]


def two_point_slopes(counts: Sequence[tuple[Fraction, int]]) -> list[float]:
    """Slopes of log count against log(1/delta) between consecutive
    scales, finest scales last."""
    ordered = sorted(counts, key=lambda row: row[0], reverse=True)
    out = []
    for (d0, n0), (d1, n1) in zip(ordered, ordered[1:]):
        dx = log_float(d0) - log_float(d1)  # log(1/d1) - log(1/d0)
        out.append((math.log(n1) - math.log(n0)) / dx)
    return out


def _tail(values: Sequence[float]) -> Sequence[float]:
    return values[len(values) // 2:]


def box_dimension_estimate(counts: Sequence[tuple[Fraction, int]]) -> tuple[float, float]:
    """(lower, upper) box-counting estimates: extreme two-point slopes
    over the tail of the grid."""
    if len(counts) < 4:
        raise TooFewScales("need at least four scales")
    slopes = _tail(two_point_slopes(counts))
    return min(slopes), max(slopes)


# ---------------------------------------------------------------------------
# local cover profiles


@dataclass(frozen=True)
class ProfileRow:
    delta: Fraction
    rho: Fraction
    sup_count: int
    inf_count: int
    argmax_center: Fraction
    argmin_center: Fraction

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.sup_count, self.inf_count)


@dataclass(frozen=True)
class LocalCoverProfile:
    """Exact sup/inf local covering counts over a (delta, rho) grid."""

    rows: tuple[ProfileRow, ...]
    center_family: str


def _scale_pairs(delta_grid, ratio_grid, paired: bool) -> list[tuple[Fraction, Fraction]]:
    deltas = _as_scales(delta_grid)
    rhos = _as_scales(ratio_grid)
    if paired:
        if len(deltas) != len(rhos):
            raise ScaleOrderViolation(
                "paired grids must have equal lengths")
        pairs = list(zip(deltas, rhos))
    else:
        pairs = list(product(deltas, rhos))
    for delta, rho in pairs:
        if rho <= 0 or delta <= 0:
            raise NonPositiveScale("scales must be positive")
        if rho >= delta:
            raise ScaleOrderViolation(f"rho {rho} not below delta {delta}")
    pairs.sort()
    return pairs


def local_cover_profile(f: SetLike, delta_grid, ratio_grid,
                        centers: Optional[Sequence[Fraction]] = None,
                        paired: bool = False) -> LocalCoverProfile:
    """Evaluate local covering numbers at every scale pair over the
    candidate-center family, recording exact sup and inf with witnesses.
    """
    pairs = _scale_pairs(delta_grid, ratio_grid, paired)
    if centers is None:
        cands = candidate_centers(f)
        family = f"default endpoints+midpoints ({len(cands)} centers)"
    else:
        cands = list(centers)
        family = f"user-supplied ({len(cands)} centers)"
    if not cands:
        raise EmptySet("no candidate centers")

    scalars = [s for pair in pairs for s in pair] + cands
    geom = ScaledGeometry(f, scalars)
    lifted = [(x, geom.lift(x)) for x in cands]
    for x, lx in lifted:
        if not geom.member(lx):
            raise CenterNotInSet(f"candidate {x} is not a point of the set")

    rows = []
    for delta, rho in pairs:
        ld, lr = geom.lift(delta), geom.lift(rho)
        sup = inf = None
        argmax = argmin = None
        for x, lx in lifted:
            count = geom.local_count(lx, ld, lr)
            if sup is None or count > sup:
                sup, argmax = count, x
            if inf is None or count < inf:
                inf, argmin = count, x
        rows.append(ProfileRow(delta, rho, sup, inf, argmax, argmin))
    return LocalCoverProfile(tuple(rows), family)


def _ratio_envelope(profile: LocalCoverProfile) -> list[tuple[Fraction, int, int]]:
    """Group rows by delta/rho: extreme counts per distinct ratio,
    sorted by increasing ratio."""
    grouped: dict[Fraction, list[int]] = {}
    for row in profile.rows:
        ratio = row.delta / row.rho
        entry = grouped.setdefault(ratio, [row.sup_count, row.inf_count])
        entry[0] = max(entry[0], row.sup_count)
        entry[1] = min(entry[1], row.inf_count)
    return [(r, grouped[r][0], grouped[r][1]) for r in sorted(grouped)]


def _envelope_slopes(envelope, pick) -> list[float]:
    out = []
    for (r0, *c0), (r1, *c1) in zip(envelope, envelope[1:]):
        dx = log_float(r1) - log_float(r0)
        out.append((math.log(pick(c1)) - math.log(pick(c0))) / dx)
    return out


def assouad_estimate(profile: LocalCoverProfile) -> float:
    """Largest tail slope of log sup-count against log(delta/rho)."""
    envelope = _ratio_envelope(profile)
    if len(envelope) < 4:
        raise TooFewScales("need at least four distinct delta/rho ratios")
    return max(_tail(_envelope_slopes(envelope, lambda c: c[0])))


def lower_assouad_estimate(profile: LocalCoverProfile) -> float:
    """Smallest tail slope of log inf-count against log(delta/rho)."""
    envelope = _ratio_envelope(profile)
    if len(envelope) < 4:
        raise TooFewScales("need at least four distinct delta/rho ratios")
    return min(_tail(_envelope_slopes(envelope, lambda c: c[1])))


# ---------------------------------------------------------------------------
# attainment and the dimension chain


def attainment_check(f: SetLike, dim_value: float, grid) -> tuple[float, float]:
    """Smallest constants (C_low, C_high) with
    C_low^-1 * delta^-dim <= N(F, delta) <= C_high * delta^-dim
    across the grid; small stable values signal attainment."""
    counts = box_counts(f, grid)
    c_high = max(n * power_float(d, dim_value) for d, n in counts)
    c_low = max(power_float(d, -dim_value) / n for d, n in counts)
    return c_low, c_high


@dataclass(frozen=True)
class DimensionReport:
    """The four estimated dimensions with slope diagnostics."""

    lower_box: float
    upper_box: float
    assouad: float
    lower_assouad: float
    box_slopes: tuple[float, ...] = ()
    attainment_constants: Optional[tuple[float, float]] = None


def dimension_chain_check(report: DimensionReport, slack: float = 0.05) -> bool:
    """lower Assouad <= lower box <= upper box <= Assouad, within the
    estimator tolerance."""
    return (report.lower_assouad <= report.lower_box + slack
            and report.lower_box <= report.upper_box + slack
            and report.upper_box <= report.assouad + slack)


def dimension_report(f: SetLike, box_grid, delta_grid, ratio_grid,
                     attainment_dim: Optional[float] = None) -> DimensionReport:
    """Convenience assembly of the full four-dimension report."""
    counts = box_counts(f, box_grid)
    lower_box, upper_box = box_dimension_estimate(counts)
    profile = local_cover_profile(f, delta_grid, ratio_grid)
    constants = None
    if attainment_dim is not None:
        constants = attainment_check(f, attainment_dim, box_grid)
    return DimensionReport(
        lower_box, upper_box,
        assouad_estimate(profile), lower_assouad_estimate(profile),
        tuple(two_point_slopes(counts)), constants)
