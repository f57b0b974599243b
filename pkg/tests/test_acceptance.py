"""Acceptance suite: one check per shipped guarantee, printed pass/fail.

Run with `pytest tests/test_acceptance.py -v -s` to see one line per
criterion.  Checks use exact counts wherever the guarantee is exact and
the stated tolerance where it is an estimate.

Known red: criterion 4's single-point slope threshold (see the test's
comment for the exact counting argument).
"""

import math
import random
import time
from fractions import Fraction

import pytest

import fracdim as fd
from fracdim.ifs import IndexedSystem, Similarity1D

F = Fraction
LOG23 = math.log(2) / math.log(3)
BLOCK_LIMIT = 0.6 * LOG23  # 0.3785578521...


def check(name: str, ok: bool, detail: str) -> None:
    print(f"[acceptance] {name}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"{name}: {detail}"


def block_subsequence_tail_max(spec) -> float:
    """Largest s_n over the second half of n = 4^1..4^5."""
    sequence = dict(fd.cantor_box_sequence(spec, 0, 1024))
    values = [sequence[4**m] for m in range(1, 6)]
    tail = values[(len(values) + 1) // 2:]
    return max(tail)


def test_criterion_1_block_box_dimension_tail(block_spec):
    start = time.perf_counter()
    tail_max = block_subsequence_tail_max(block_spec)
    elapsed = time.perf_counter() - start
    ok = abs(tail_max - BLOCK_LIMIT) <= 0.002 and elapsed < 1.0
    check("1 box-dimension tail of the doubling-block construction", ok,
          f"tail_max={tail_max:.10f}, target={BLOCK_LIMIT:.10f}, "
          f"elapsed={elapsed:.3f}s")


def test_criterion_2_block_assouad_exceeds_box(block_spec):
    start = time.perf_counter()
    prefractal = fd.cantor_prefractal(block_spec, 0, 12)
    # critical scale pairs resolvable at depth 12: window/refinement
    # lengths taken at depths (1, 2) and (4, 8)
    deltas = [fd.pi_product(block_spec, 0, 1).value,
              fd.pi_product(block_spec, 0, 4).value]
    rhos = [fd.pi_product(block_spec, 0, 2).value,
            fd.pi_product(block_spec, 0, 8).value]
    slope = fd.equihom_singlepoint_assouad(prefractal, F(0), deltas, rhos,
                                           paired=True)
    box = block_subsequence_tail_max(block_spec)
    elapsed = time.perf_counter() - start
    ok = slope >= 0.60 and slope - box >= 0.2 and elapsed < 30.0
    check("2 single-point Assouad slope exceeds the box estimate", ok,
          f"slope={slope:.4f}, box={box:.4f}, gap={slope - box:.4f}, "
          f"elapsed={elapsed:.1f}s")


def test_criterion_3_inverse_power_dimension_triple():
    start = time.perf_counter()
    f1 = fd.inverse_power_points(10**4, 1)

    box_grid = fd.ScaleGrid(F(1, 8), F(1, 4), 6)  # 2^-3, 2^-5, ..., 2^-13
    lower_box, upper_box = fd.box_dimension_estimate(fd.box_counts(f1, box_grid))

    profile = fd.local_cover_profile(f1, [F(1, 4)],
                                     [F(1, 2**k) for k in range(5, 9)])
    lower_assouad = fd.lower_assouad_estimate(profile)

    ks = [4, 8, 16, 32, 64]
    trend = fd.equihom_singlepoint_assouad(
        f1, F(0), [F(1, k) for k in ks],
        [F(1, 2 * k * (2 * k + 1)) for k in ks], paired=True)
    elapsed = time.perf_counter() - start

    ok = (lower_assouad <= 0.05
          and abs(lower_box - 0.5) <= 0.05 and abs(upper_box - 0.5) <= 0.05
          and trend >= 0.9 and elapsed < 60.0)
    check("3 inverse-power set dimension triple", ok,
          f"lower_assouad={lower_assouad:.3f}, box=({lower_box:.3f}, "
          f"{upper_box:.3f}), assouad_trend={trend:.3f}, elapsed={elapsed:.1f}s")


def test_criterion_4_gap_set_equihomogeneity_fails(gap_set):
    rhos = [F(1, 2**k) for k in range(4, 13)]
    report = fd.equihom_certify(gap_set, [F(1, 4)], rhos)
    ratio_ok = all(ratio >= (rho.denominator.bit_length() - 1) - 2
                   for _, rho, ratio in report.rows)
    ok = report.verdict == "growing" and ratio_ok
    check("4a gap set: sup/inf local-cover ratio grows like log(1/rho)", ok,
          f"verdict={report.verdict}, max_ratio={report.max_ratio:.1f}")


def test_criterion_4_gap_set_singlepoint_slope(gap_set):
    # Exact counts on this window: covering B_{1/4}(0) with radius 2^-K
    # balls takes exactly K-2 balls (one ball absorbs the tail below
    # 2^-(K-1), each point above it is isolated at that scale), so the
    # count equals log2(delta/rho) on every tested row.  Consecutive
    # two-point slopes are log((u+1)/u)/log 2 for u = 2..9, all of which
    # exceed 0.152 > 0.15, and every slope-style estimator (least
    # squares, endpoint chord, any tail extremum) is a convex combination
    # of them.  The 0.15 threshold is therefore unattainable on the
    # stated window; the honest value for the tail-max estimator is
    # log(7/6)/log 2 = 0.2224.
    slope = fd.equihom_singlepoint_assouad(
        gap_set, F(0), [F(1, 4)], [F(1, 2**k) for k in range(4, 13)])
    ok = slope <= 0.15
    check("4b gap set: single-point slope within the stated threshold", ok,
          f"slope={slope:.4f}, threshold=0.15")


def test_criterion_5_middle_third_full_chain(third_spec, third_system, c10):
    start = time.perf_counter()
    lower_box, upper_box = fd.box_dimension_estimate(
        fd.box_counts(c10, fd.ScaleGrid(F(1, 9), F(1, 3), 9)))
    profile = fd.local_cover_profile(c10, [F(1, 9)],
                                     [F(1, 3**b) for b in range(4, 9)])
    assouad = fd.assouad_estimate(profile)
    lower_assouad = fd.lower_assouad_estimate(profile)
    dims_ok = all(abs(v - LOG23) <= 0.03 for v in
                  (lower_box, upper_box, assouad, lower_assouad))

    exponent = fd.moran_exponent([F(1, 3), F(1, 3)])
    exponent_ok = abs(exponent - LOG23) <= 1e-12

    unit_open = fd.OpenIntervalSet.build([(0, 1)])
    cert = fd.verify_mosc(third_system, [unit_open] * 5, F(1))

    equihom = fd.equihom_certify(c10, [F(1, 3**a) for a in (2, 3, 4)],
                                 [F(1, 3**b) for b in range(5, 10)])
    equihom_ok = equihom.verdict == "bounded" and equihom.max_ratio <= 6

    regularity = fd.ahlfors_regularity_check(third_system, LOG23, 8)
    elapsed = time.perf_counter() - start

    ok = (dims_ok and exponent_ok and cert.passed and equihom_ok
          and regularity.c_observed <= 4 and elapsed < 30.0)
    check("5 middle-third full chain", ok,
          f"dims=({lower_assouad:.4f}, {lower_box:.4f}, {upper_box:.4f}, "
          f"{assouad:.4f}), exponent_err={abs(exponent - LOG23):.2e}, "
          f"mosc={cert.passed}, equihom={equihom.verdict}"
          f"/{equihom.max_ratio:.2f}, C={regularity.c_observed:.2f}, "
          f"elapsed={elapsed:.1f}s")


def test_criterion_6_pullback_convergence(block_spec):
    sys = fd.cantor_to_ifs(block_spec)
    run = fd.pullback_approximation(sys, 0, 13)  # decay indices 0..12
    radius = run.radius
    bound_ok = all(d <= F(1, 3)**j * 2 * radius
                   for j, d in enumerate(run.decay))

    from_unit = fd.pullback_approximation(sys, 0, 12, fd.unit_interval())
    distance = fd.hausdorff_distance(run.iterates[12], from_unit.final)
    uniq_ok = distance <= F(1, 3)**12 * 8

    ok = bound_ok and radius == 4 and uniq_ok
    check("6 pullback decay and finite-depth uniqueness", ok,
          f"radius={radius}, decay_bounded={bound_ok}, "
          f"seed_distance={float(distance):.2e} <= {float(F(8, 3**12)):.2e}")


def test_criterion_7_oracle_equivalence_and_sandwich():
    rng = random.Random(20250809)
    for _ in range(500):
        pts = sorted({F(rng.randint(0, 400), rng.randint(1, 40))
                      for _ in range(rng.randint(1, 15))})
        f = fd.point_set(pts)
        delta = F(rng.randint(1, 60), rng.randint(1, 24))
        greedy = fd.covering_number(f, delta).count
        oracle = fd.covering_number_bruteforce(f, delta).count
        assert greedy == oracle, (pts, delta)

    failures = 0
    for trial in range(1000):
        if trial % 2:
            pairs = []
            for _ in range(rng.randint(1, 6)):
                a = F(rng.randint(0, 200), rng.randint(1, 20))
                pairs.append((a, a + F(rng.randint(0, 60), rng.randint(1, 20))))
            f = fd.interval_set_normalize(pairs)
        else:
            f = fd.point_set({F(rng.randint(0, 400), rng.randint(1, 40))
                              for _ in range(rng.randint(1, 15))})
        delta = F(rng.randint(1, 40), rng.randint(1, 16))
        if not fd.verify_cover_packing_sandwich(f, delta):
            failures += 1
    check("7 greedy/oracle equivalence and cover-packing sandwich",
          failures == 0, f"500 oracle trials exact, sandwich failures={failures}/1000")


def test_criterion_8_moran_machinery(third_system):
    level = fd.moran_level_check(IndexedSystem.build(
        [[Similarity1D(F(1, 2), F(0)), Similarity1D(F(1, 4), F(1, 2)),
          Similarity1D(F(1, 4), F(3, 4))]], cyclic=True), 1.0, 6)
    residual_ok = all(r == 0.0 for _, r in level.residuals)

    alternating = IndexedSystem.build(
        [[Similarity1D(F(1, 2), F(0)), Similarity1D(F(1, 2), F(1, 2))],
         [Similarity1D(F(1, 4), F(i, 4)) for i in range(4)]], cyclic=True)
    window = fd.averaged_moran_check(alternating, 1.0, 1, 12)
    window_ok = abs(window.l_observed - 1.0) <= 1e-9

    bounds = fd.cylinder_count_bounds(F(1), F(1), F(1, 3), LOG23)
    cylinders_ok = True
    for j in range(1, 11):
        card = len(fd.cylinder_decomposition(third_system, 0, F(1, 3**j), F(1)))
        lo, hi = bounds.range(F(1, 3**j))
        if card != 2**j or not lo * (1 - 1e-9) <= card <= hi * (1 + 1e-9):
            cylinders_ok = False

    ok = residual_ok and window_ok and cylinders_ok
    check("8 Moran machinery: level sums, window sums, cylinder counts", ok,
          f"unit-sum residual exact={residual_ok}, "
          f"L_observed={window.l_observed}, cylinder counts 2^j with "
          f"bounds={cylinders_ok}")
