"""Non-autonomous iterated function systems of 1-D similarities.

A system is a list of levels, each holding finitely many contracting
similarities; autonomous systems mark themselves cyclic and repeat their
levels forever.  The module provides exact composition chains, pullback
approximation with certified geometric decay, Moran open-set
verification, Moran-exponent solving, stopping-time cylinder
decompositions and the natural measure weights they carry.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .core import (Interval, IntervalSet, SetLike, as_scalar, format_scalar,
                   hausdorff_distance, interval_set_normalize, power_float)
from .errors import (DecayViolation, EmptyRatios, HorizonExceeded,
                     LevelOutOfRange, ParseError, RatioOutOfRange,
                     ScaleOrderViolation)


@dataclass(frozen=True)
class Similarity1D:
    """x -> ratio * (orientation * x) + offset with ratio in (0, 1)."""

    ratio: Fraction
    offset: Fraction
    orientation: int = 1

    def __post_init__(self) -> None:
        if not 0 < self.ratio < 1:
            raise RatioOutOfRange(f"ratio {self.ratio} outside (0, 1)")
        if self.orientation not in (1, -1):
            raise ParseError("orientation must be +1 or -1")

    def __call__(self, x: Fraction) -> Fraction:
        return self.ratio * (self.orientation * x) + self.offset

    def map_interval(self, iv: Interval) -> Interval:
        a, b = self(iv.lo), self(iv.hi)
        return Interval(a, b) if a <= b else Interval(b, a)

    def compose(self, inner: "Similarity1D") -> "Similarity1D":
        """The similarity x -> self(inner(x))."""
        return Similarity1D(
            self.ratio * inner.ratio,
            self.ratio * self.orientation * inner.offset + self.offset,
            self.orientation * inner.orientation,
        )


def fixed_point(f: Similarity1D) -> Fraction:
    """The unique x with f(x) = x."""
    if f.orientation == 1:
        return f.offset / (1 - f.ratio)
    return f.offset / (1 + f.ratio)


@dataclass(frozen=True)
class IndexedSystem:
    """Levels of similarities I_1, I_2, ... plus cached contraction data.

    ``sigma_star_lower``/``sigma_star_upper`` are the extreme ratios over
    all defined levels and ``fixed_point_bound`` the largest fixed-point
    magnitude; together they drive the absorbing-ball radius and every
    geometric decay estimate.
    """

    levels: tuple[tuple[Similarity1D, ...], ...]
    cyclic: bool
    sigma_star_lower: Fraction
    sigma_star_upper: Fraction
    fixed_point_bound: Fraction

    @staticmethod
    def build(levels: Sequence[Sequence[Similarity1D]],
              cyclic: bool = False) -> "IndexedSystem":
        frozen = tuple(tuple(level) for level in levels)
        if not frozen or any(not level for level in frozen):
            raise ParseError("every level must hold at least one map")
        ratios = [f.ratio for level in frozen for f in level]
        bound = max(abs(fixed_point(f)) for level in frozen for f in level)
        return IndexedSystem(frozen, cyclic, min(ratios), max(ratios), bound)

    @property
    def horizon(self) -> Optional[int]:
        """Largest defined level index; None when cyclic (unbounded)."""
        return None if self.cyclic else len(self.levels)

    def level_maps(self, k: int) -> tuple[Similarity1D, ...]:
        if k < 1:
            raise LevelOutOfRange("levels are 1-based")
        if self.cyclic:
            return self.levels[(k - 1) % len(self.levels)]
        if k > len(self.levels):
            raise LevelOutOfRange(
                f"level {k} beyond defined horizon {len(self.levels)}")
        return self.levels[k - 1]


def apply_level(sys: IndexedSystem, k: int, b: SetLike) -> IntervalSet:
    """Union of the level-(k+1) similarity images of B, normalized."""
    maps = sys.level_maps(k + 1)
    segs = b.segments()
    images = [f.map_interval(Interval(lo, hi)) for f in maps
              for lo, hi in segs]
    return interval_set_normalize(images)


def compose_chain(sys: IndexedSystem, k: int, l: int, b: SetLike) -> IntervalSet:
    """The l-k fold composition applied to B; the identity when k = l."""
    if k > l:
        raise LevelOutOfRange(f"need k <= l, got {k} > {l}")
    if isinstance(b, IntervalSet):
        current = b
    else:
        current = interval_set_normalize(b.segments())
    for level in range(l - 1, k - 1, -1):
        current = apply_level(sys, level, current)
    return current


def attractor_seed_radius(sys: IndexedSystem) -> Fraction:
    """Radius R of the forward-absorbing ball [-R, R]."""
    up = sys.sigma_star_upper
    return 2 * (1 + up) * sys.fixed_point_bound / (1 - up)


@dataclass(frozen=True)
class PullbackResult:
    """Iterates of a pullback approximation with their decay trace.

    ``decay[j]`` is the exact Hausdorff distance between iterates j and
    j+1 and is certified against the geometric bound
    (sigma*)^j * 2R at construction.
    """

    iterates: tuple[IntervalSet, ...]
    decay: tuple[Fraction, ...]
    radius: Fraction

    @property
    def final(self) -> IntervalSet:
        return self.iterates[-1]


def pullback_approximation(sys: IndexedSystem, k: int, m: int,
                           seed: Optional[SetLike] = None) -> PullbackResult:
    """Approximates the level-k attractor by composing m levels into the
    absorbing ball (or a user seed inside it)."""
    if m < 1:
        raise LevelOutOfRange("need at least one pullback step")
    radius = attractor_seed_radius(sys)
    if seed is None:
        seed = interval_set_normalize([(-radius, radius)])
    iterates = [compose_chain(sys, k, k + j, seed) for j in range(m + 1)]
    decay = tuple(hausdorff_distance(iterates[j], iterates[j + 1])
                  for j in range(m))
    bound_base = 2 * radius
    up = sys.sigma_star_upper
    for j, d in enumerate(decay):
        if d > up**j * bound_base:
            raise DecayViolation(
                f"step {j}: decay {d} exceeds {up}^{j} * {bound_base}")
    return PullbackResult(tuple(iterates), decay, radius)


# ---------------------------------------------------------------------------
# open sets and the Moran open-set condition


@dataclass(frozen=True)
class OpenIntervalSet:
    """Finite union of disjoint open intervals; touching components are
    kept separate (their shared endpoint is outside the set)."""

    intervals: tuple[tuple[Fraction, Fraction], ...]

    @staticmethod
    def build(raw: Iterable[tuple]) -> "OpenIntervalSet":
        items = sorted((as_scalar(lo), as_scalar(hi)) for lo, hi in raw)
        for lo, hi in items:
            if lo >= hi:
                raise ParseError(f"open interval ({lo}, {hi}) is empty")
        for (_, prev_hi), (next_lo, _) in zip(items, items[1:]):
            if next_lo < prev_hi:
                raise ParseError("open intervals overlap")
        return OpenIntervalSet(tuple(items))

    @property
    def length(self) -> Fraction:
        return sum((hi - lo for lo, hi in self.intervals), Fraction(0))

    @property
    def closure_diameter(self) -> Fraction:
        return self.intervals[-1][1] - self.intervals[0][0]

    @property
    def closure_hull(self) -> Interval:
        return Interval(self.intervals[0][0], self.intervals[-1][1])

    def map(self, f: Similarity1D) -> "OpenIntervalSet":
        return OpenIntervalSet.build(
            [(f(lo), f(hi)) if f.orientation == 1 else (f(hi), f(lo))
             for lo, hi in self.intervals])

    def contains_open(self, lo: Fraction, hi: Fraction) -> bool:
        los = [a for a, _ in self.intervals]
        j = bisect_right(los, lo) - 1
        return j >= 0 and hi <= self.intervals[j][1]


@dataclass(frozen=True)
class LevelCheck:
    """Verdicts for one level transition of the open-set condition."""

    level: int
    containment_ok: bool
    disjoint_ok: bool
    measure_ok: bool
    overlap_witness: Optional[tuple[Fraction, Fraction]] = None

    @property
    def passed(self) -> bool:
        return self.containment_ok and self.disjoint_ok and self.measure_ok


@dataclass(frozen=True)
class MoranCertificate:
    """Outcome of the open-set verification, with exact witnesses.

    ``eta`` is the largest closure diameter among the open sets; the
    disjointness convention actually checked is recorded so downstream
    consumers know which reading of the condition was used.
    """

    open_sets: tuple[OpenIntervalSet, ...]
    epsilon0: Fraction
    eta: Fraction
    checks: tuple[LevelCheck, ...]
    convention: str = ("images of the level-(k+1) open set under the "
                       "level-(k+1) maps are pairwise disjoint")

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def verify_mosc(sys: IndexedSystem, open_sets: Sequence[OpenIntervalSet],
                epsilon0: Fraction) -> MoranCertificate:
    """Check the Moran open-set condition exactly, level by level.

    ``open_sets[j]`` plays the role of the level-j open set; the list
    length fixes the verification horizon.  Failures are recorded in the
    certificate, never raised.
    """
    if epsilon0 <= 0:
        raise ParseError("epsilon0 must be positive")
    if len(open_sets) < 2:
        raise ParseError("need open sets for at least two levels")
    checks = []
    for k in range(len(open_sets) - 1):
        u_next = open_sets[k + 1]
        u_here = open_sets[k]
        images = [u_next.map(f) for f in sys.level_maps(k + 1)]

        containment = all(
            u_here.contains_open(lo, hi)
            for image in images for lo, hi in image.intervals)

        pieces = sorted(
            (lo, hi, idx)
            for idx, image in enumerate(images)
            for lo, hi in image.intervals)
        disjoint, witness = True, None
        max_hi, owner = None, None
        for lo, hi, idx in pieces:
            if max_hi is not None and lo < max_hi and idx != owner:
                disjoint = False
                witness = (lo, min(max_hi, hi))
                break
            if max_hi is None or hi > max_hi:
                max_hi, owner = hi, idx

        measure = u_here.length >= epsilon0 and u_next.length >= epsilon0
        checks.append(LevelCheck(k, containment, disjoint, measure, witness))

    eta = max(u.closure_diameter for u in open_sets)
    return MoranCertificate(tuple(open_sets), epsilon0, eta, tuple(checks))


# ---------------------------------------------------------------------------
# Moran exponent and its per-level / windowed verification


def moran_exponent(ratios: Sequence[Fraction]) -> float:
    """The unique s >= 0 with sum(r_i^s) = 1, by bisection to 1e-12.

    A single ratio yields s = 0 (its zeroth power is the whole sum).
    """
    ratios = list(ratios)
    if not ratios:
        raise EmptyRatios("need at least one ratio")
    for r in ratios:
        if not 0 < r < 1:
            raise RatioOutOfRange(f"ratio {r} outside (0, 1)")
    if len(ratios) == 1:
        return 0.0
    vals = [float(r) for r in ratios]

    def total(s: float) -> float:
        return sum(v**s for v in vals)

    hi = 1.0
    while total(hi) > 1:
        hi *= 2
    lo = 0.0
    while hi - lo > 1e-13:
        mid = (lo + hi) / 2
        if total(mid) > 1:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


@dataclass(frozen=True)
class LevelSumReport:
    """Per-level residuals of sum(sigma_i^s) - 1."""

    s: float
    residuals: tuple[tuple[int, float], ...]
    tolerance: float = 1e-9

    @property
    def passed(self) -> bool:
        return all(abs(r) <= self.tolerance for _, r in self.residuals)


def moran_level_check(sys: IndexedSystem, s: float, horizon: int) -> LevelSumReport:
    """Residual of the per-level Moran sum at exponent s, for levels
    1..horizon."""
    if s < 0:
        raise RatioOutOfRange("exponent must be non-negative")
    residuals = []
    for k in range(1, horizon + 1):
        level_sum = sum(power_float(f.ratio, s) for f in sys.level_maps(k))
        residuals.append((k, level_sum - 1.0))
    return LevelSumReport(s, tuple(residuals))


@dataclass(frozen=True)
class WindowSumReport:
    """Composition-window sums of sigma_alpha^s and the smallest constant
    bounding them away from zero and infinity."""

    s: float
    n0: int
    l_observed: float
    rows: tuple[tuple[int, int, float], ...]  # (k, n, window sum)


def averaged_moran_check(sys: IndexedSystem, s: float, n0: int,
                         horizon: int) -> WindowSumReport:
    """Window sums over all words spanning levels k+1..k+n, computed via
    the per-level factorization, for every window of length >= n0 inside
    the horizon."""
    if n0 < 1:
        raise ParseError("n0 must be at least 1")
    level_sums = [sum(power_float(f.ratio, s) for f in sys.level_maps(k))
                  for k in range(1, horizon + 1)]
    rows = []
    l_observed = 1.0
    for k in range(0, horizon - n0 + 1):
        window = 1.0
        for n in range(1, horizon - k + 1):
            window *= level_sums[k + n - 1]
            if n >= n0:
                rows.append((k, n, window))
                l_observed = max(l_observed, window, 1.0 / window)
    return WindowSumReport(s, n0, l_observed, tuple(rows))


# ---------------------------------------------------------------------------
# words, stopping-time cylinder decompositions, natural measure


@dataclass(frozen=True)
class Word:
    """A composition over consecutive levels start_level+1..end_level.

    ``entries`` lists (level, index-within-level); ``ratio`` is the exact
    product of the entry ratios.
    """

    entries: tuple[tuple[int, int], ...]
    ratio: Fraction
    start_level: int
    end_level: int

    def __len__(self) -> int:
        return len(self.entries)

    def truncation(self, sys: IndexedSystem) -> "Word":
        """Drop the last entry; the empty truncation has ratio one."""
        if not self.entries:
            raise LevelOutOfRange("the empty word has no truncation")
        last_level, last_idx = self.entries[-1]
        last_ratio = sys.level_maps(last_level)[last_idx].ratio
        return Word(self.entries[:-1], self.ratio / last_ratio,
                    self.start_level, self.end_level - 1)


def word_map(sys: IndexedSystem, word: Word) -> Similarity1D:
    """The composed similarity of a non-empty word (outermost first)."""
    if not word.entries:
        raise LevelOutOfRange("cannot compose the empty word")
    composed: Optional[Similarity1D] = None
    for level, idx in word.entries:
        f = sys.level_maps(level)[idx]
        composed = f if composed is None else composed.compose(f)
    return composed


def cylinder_decomposition(sys: IndexedSystem, k: int, delta: Fraction,
                           eta: Fraction) -> list[Word]:
    """Stopping-time antichain of words starting at level k+1.

    Each branch is extended depth-first until its ratio first satisfies
    sigma * eta <= delta; branches always descend at least one level, so
    at delta = eta the decomposition is exactly the length-one words.
    Words come back in lexicographic (level, index) order.
    """
    if not 0 < delta <= eta:
        raise ScaleOrderViolation(f"need 0 < delta <= eta, got {delta}, {eta}")

    out: list[Word] = []

    def extend(entries: tuple, sigma: Fraction) -> None:
        level = k + len(entries) + 1
        try:
            maps = sys.level_maps(level)
        except LevelOutOfRange as exc:
            raise HorizonExceeded(
                f"stopping at scale {delta} needs levels beyond the "
                f"horizon") from exc
        for idx, f in enumerate(maps):
            ratio = sigma * f.ratio
            branch = entries + ((level, idx),)
            if ratio * eta <= delta:
                out.append(Word(branch, ratio, k, level))
            else:
                extend(branch, ratio)

    extend((), Fraction(1))
    return out


@dataclass(frozen=True)
class NaturalMeasureWeight:
    word: Word
    s: float
    weight: float


def natural_measure_weight(word: Word, s: float) -> NaturalMeasureWeight:
    """Weight (sigma_alpha)^s the natural measure gives the word's
    cylinder; the empty word carries the whole unit mass."""
    if s < 0:
        raise RatioOutOfRange("exponent must be non-negative")
    return NaturalMeasureWeight(word, s, power_float(word.ratio, s))


@dataclass(frozen=True)
class CylinderCountBounds:
    """Diagnostic constants bounding stopping-time cardinalities.

    Computed for ambient dimension one, where the unit ball has length
    two; they certify card ~ delta^-s up to these factors, not sharp
    constants.
    """

    kappa0: float
    kappa1: float
    kappa2: float
    s: float

    def range(self, delta: Fraction) -> tuple[float, float]:
        inv = power_float(delta, -self.s)
        return self.kappa1 * inv, self.kappa2 * inv


def cylinder_count_bounds(eta: Fraction, epsilon0: Fraction,
                          sigma_lower: Fraction, s: float) -> CylinderCountBounds:
    kappa0 = 2.0 * float(2 * eta / sigma_lower) / float(epsilon0)
    kappa1 = float(eta) ** s
    kappa2 = kappa0 * float(eta / sigma_lower) ** s
    return CylinderCountBounds(kappa0, kappa1, kappa2, s)


# ---------------------------------------------------------------------------
# JSON form


def system_to_json(sys: IndexedSystem) -> dict:
    return {
        "cyclic": sys.cyclic,
        "levels": [
            [{"ratio": format_scalar(f.ratio),
              "offset": format_scalar(f.offset),
              "orientation": f.orientation} for f in level]
            for level in sys.levels
        ],
    }


def system_from_json(data: dict) -> IndexedSystem:
    try:
        levels = [
            [Similarity1D(as_scalar(f["ratio"]), as_scalar(f["offset"]),
                          int(f.get("orientation", 1))) for f in level]
            for level in data["levels"]
        ]
        return IndexedSystem.build(levels, cyclic=bool(data.get("cyclic", False)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed system spec: {exc}") from exc
