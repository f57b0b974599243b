"""Generalised Cantor sets with per-step contraction ratios.

A construction is described by a rule k -> c_k (1-based) of ratios in
(0, 1/2) together with a usable index horizon.  Prefractals, shifted
families, exact length products and the closed-form box-dimension
sequence all derive from the rule; conversion to a two-map-per-level
non-autonomous system lives here as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .core import Interval, IntervalSet, interval_set_normalize, unit_interval
from .errors import HorizonExceeded, ParseError, RatioOutOfRange
from .ifs import IndexedSystem, Similarity1D

ONE_HALF = Fraction(1, 2)


def _check_ratio(c: Fraction, k: Optional[int] = None) -> Fraction:
    if not 0 < c < ONE_HALF:
        where = f" at index {k}" if k is not None else ""
        raise RatioOutOfRange(f"ratio {c}{where} outside (0, 1/2)")
    return c


@dataclass(frozen=True)
class CantorSpec:
    """Ratio rule c_k plus the maximum usable index.

    ``kind`` and ``payload`` carry the serializable description so a
    parsed spec round-trips exactly.
    """

    rule: Callable[[int], Fraction] = field(compare=False)
    horizon: int = 0
    kind: str = "explicit"
    payload: tuple = ()
    _prefix: list = field(default_factory=lambda: [Fraction(1)],
                          compare=False, repr=False)

    def ratio(self, k: int) -> Fraction:
        if not 1 <= k <= self.horizon:
            raise HorizonExceeded(f"index {k} beyond horizon {self.horizon}")
        return _check_ratio(self.rule(k), k)

    def prefix_product(self, n: int) -> Fraction:
        """c_1 * ... * c_n, cached incrementally."""
        if n > self.horizon:
            raise HorizonExceeded(f"index {n} beyond horizon {self.horizon}")
        prefix = self._prefix
        while len(prefix) <= n:
            prefix.append(prefix[-1] * self.ratio(len(prefix)))
        return prefix[n]


def constant_spec(c: Fraction, horizon: int) -> CantorSpec:
    """Every step removes the same middle proportion."""
    _check_ratio(c)
    return CantorSpec(lambda k: c, horizon, kind="constant", payload=(c,))


def explicit_spec(ratios: list[Fraction], horizon: Optional[int] = None) -> CantorSpec:
    ratios = tuple(ratios)
    horizon = len(ratios) if horizon is None else horizon
    if horizon > len(ratios):
        raise ParseError("explicit spec shorter than its declared horizon")
    for i, c in enumerate(ratios):
        _check_ratio(c, i + 1)
    return CantorSpec(lambda k: ratios[k - 1], horizon,
                      kind="explicit", payload=ratios)


def dyadic_block_ratio(k: int) -> Fraction:
    """1/3 on index blocks [4^(n-1), 2*4^(n-1)), 1/9 on the complementary
    dyadic blocks: the run lengths double at every block boundary."""
    if k < 1:
        raise HorizonExceeded("indices are 1-based")
    return Fraction(1, 3) if k.bit_length() % 2 == 1 else Fraction(1, 9)


def dyadic_block_spec(horizon: int) -> CantorSpec:
    """Cantor set whose box and Assouad dimensions provably differ."""
    if horizon < 1:
        raise HorizonExceeded("horizon must be at least 1")
    return CantorSpec(dyadic_block_ratio, horizon, kind="dyadic-blocks")


@dataclass(frozen=True)
class PiProduct:
    """Shifted length product c_{k+1} * ... * c_{k+n}."""

    k: int
    n: int
    value: Fraction


def gen_step(c: IntervalSet, ratio: Fraction) -> IntervalSet:
    """Remove the open middle (1 - 2*ratio) proportion of every interval."""
    _check_ratio(ratio)
    out = []
    for iv in c.intervals:
        step = ratio * iv.length
        out.append(Interval(iv.lo, iv.lo + step))
        out.append(Interval(iv.hi - step, iv.hi))
    return interval_set_normalize(out)


def cantor_prefractal(spec: CantorSpec, k: int, n: int) -> IntervalSet:
    """Depth-n prefractal of the k-shifted construction: n successive
    generation steps with ratios c_{k+1}, ..., c_{k+n} applied to [0,1].
    Has exactly 2^n intervals, each of exact length pi(k, n)."""
    if k + n > spec.horizon:
        raise HorizonExceeded(
            f"depth {k}+{n} beyond horizon {spec.horizon}")
    current = unit_interval()
    for j in range(k + 1, k + n + 1):
        current = gen_step(current, spec.ratio(j))
    return current


def pi_product(spec: CantorSpec, k: int, n: int) -> PiProduct:
    """Exact shifted product; multiplicative over depth splits."""
    if k + n > spec.horizon:
        raise HorizonExceeded(
            f"index {k}+{n} beyond horizon {spec.horizon}")
    value = spec.prefix_product(k + n) / spec.prefix_product(k)
    return PiProduct(k, n, value)


def cantor_box_sequence(spec: CantorSpec, k: int,
                        n_max: int) -> list[tuple[int, float]]:
    """The sequence s_n = n*log 2 / log(1/pi(k, n)) for n = 1..n_max.

    Tail extrema of this sequence estimate the upper and lower
    box-counting dimensions of the construction.
    """
    if k + n_max > spec.horizon:
        raise HorizonExceeded(
            f"index {k}+{n_max} beyond horizon {spec.horizon}")
    base = spec.prefix_product(k)
    out = []
    log2 = math.log(2)
    for n in range(1, n_max + 1):
        pi = spec.prefix_product(k + n) / base
        # log of a huge rational straight from its integer parts
        log_inv = math.log(pi.denominator) - math.log(pi.numerator)
        out.append((n, n * log2 / log_inv))
    return out


def cantor_to_ifs(spec: CantorSpec) -> IndexedSystem:
    """Two similarities per level: x -> c_k x and x -> c_k x + 1 - c_k.

    A constant-ratio spec maps to an autonomous (cyclic) system; the
    pullback prefractals of the result coincide exactly with
    :func:`cantor_prefractal`.
    """
    def level(c: Fraction) -> list[Similarity1D]:
        return [Similarity1D(c, Fraction(0), 1),
                Similarity1D(c, 1 - c, 1)]

    if spec.kind == "constant":
        return IndexedSystem.build([level(spec.ratio(1))], cyclic=True)
    levels = [level(spec.ratio(kk)) for kk in range(1, spec.horizon + 1)]
    return IndexedSystem.build(levels, cyclic=False)


# ---------------------------------------------------------------------------
# JSON form: {"kind": ..., "ratios": [...], "horizon": N}


def spec_to_json(spec: CantorSpec) -> dict:
    from .core import format_scalar

    data: dict = {"kind": spec.kind, "horizon": spec.horizon}
    if spec.kind == "constant":
        data["ratios"] = [format_scalar(spec.payload[0])]
    elif spec.kind == "explicit":
        data["ratios"] = [format_scalar(c) for c in spec.payload]
    elif spec.kind == "dyadic-blocks":
        data["ratios"] = []
    else:
        raise ParseError(f"unknown cantor spec kind {spec.kind!r}")
    return data


def spec_from_json(data: dict) -> CantorSpec:
    from .core import as_scalar

    try:
        kind = data["kind"]
        horizon = int(data["horizon"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed cantor spec: {exc}") from exc
    if kind == "constant":
        ratios = data.get("ratios", [])
        if len(ratios) != 1:
            raise ParseError("constant spec needs exactly one ratio")
        return constant_spec(as_scalar(ratios[0]), horizon)
    if kind == "explicit":
        return explicit_spec([as_scalar(c) for c in data.get("ratios", [])],
                             horizon)
    if kind == "dyadic-blocks":
        return dyadic_block_spec(horizon)
    raise ParseError(f"unknown cantor spec kind {kind!r}")
