"""Dimension estimators over exact counts."""

import math
from fractions import Fraction

import pytest

import fracdim as fd
from fracdim.errors import (CenterNotInSet, ScaleOrderViolation,
                            TooFewScales)

F = Fraction
LOG23 = math.log(2) / math.log(3)


class TestScaleGrid:
    def test_scales(self):
        grid = fd.ScaleGrid(F(1, 2), F(1, 2), 4)
        assert grid.scales() == [F(1, 2), F(1, 4), F(1, 8), F(1, 16)]

    def test_validation(self):
        with pytest.raises(ScaleOrderViolation):
            fd.ScaleGrid(F(1, 2), F(2), 4)
        with pytest.raises(TooFewScales):
            fd.ScaleGrid(F(1, 2), F(1, 2), 0)


class TestBoxCounts:
    def test_unit_interval_doubling(self, unit):
        counts = fd.box_counts(unit, fd.ScaleGrid(F(1, 2), F(1, 2), 4))
        assert [n for _, n in counts] == [1, 2, 4, 8]

    def test_single_point(self):
        counts = fd.box_counts(fd.point_set([F(1, 7)]),
                               fd.ScaleGrid(F(1, 2), F(1, 2), 5))
        assert all(n == 1 for _, n in counts)

    def test_prefractal_matches_branch_count(self, third_spec):
        for j in (3, 5, 7):
            pre = fd.cantor_prefractal(third_spec, 0, j + 1)
            count = fd.covering_number(pre, F(1, 3**j)).count
            assert 2**j <= count <= 2**(j + 1)


class TestBoxEstimate:
    def test_unit_interval_is_one(self, unit):
        counts = fd.box_counts(unit, fd.ScaleGrid(F(1, 2), F(1, 2), 10))
        lo, up = fd.box_dimension_estimate(counts)
        assert lo == pytest.approx(1.0, abs=1e-9)
        assert up == pytest.approx(1.0, abs=1e-9)

    def test_middle_third_prefractal(self, third_spec):
        pre = fd.cantor_prefractal(third_spec, 0, 12)
        counts = fd.box_counts(pre, fd.ScaleGrid(F(1, 9), F(1, 3), 9))
        lo, up = fd.box_dimension_estimate(counts)
        assert lo == pytest.approx(LOG23, abs=0.03)
        assert up == pytest.approx(LOG23, abs=0.03)

    def test_inverse_power_truncation(self):
        f1 = fd.inverse_power_points(2000, 1)
        counts = fd.box_counts(f1, fd.ScaleGrid(F(1, 8), F(1, 4), 5))
        _, up = fd.box_dimension_estimate(counts)
        assert up == pytest.approx(0.5, abs=0.05)

    def test_too_few_scales(self, unit):
        counts = fd.box_counts(unit, fd.ScaleGrid(F(1, 2), F(1, 2), 3))
        with pytest.raises(TooFewScales):
            fd.box_dimension_estimate(counts)


class TestProfile:
    def test_unit_interval_boundary_halving(self, unit):
        prof = fd.local_cover_profile(unit, [F(1, 4)], [F(1, 64)])
        row = prof.rows[0]
        assert row.sup_count == 16  # interior window tiles exactly
        assert row.inf_count == 8   # boundary window is half as wide
        assert row.argmin_center in (F(0), F(1))

    def test_gap_set_extremes(self, gap_set):
        prof = fd.local_cover_profile(gap_set, [F(1, 4)], [F(1, 2**10)])
        row = prof.rows[0]
        assert row.inf_count == 1
        assert row.argmin_center == 1
        assert row.sup_count >= 8

    def test_rows_sorted_and_bounded(self, c10):
        rhos = [F(1, 3**b) for b in (5, 6, 7)]
        prof = fd.local_cover_profile(c10, [F(1, 9), F(1, 27)], rhos)
        assert [(r.delta, r.rho) for r in prof.rows] == \
            sorted((r.delta, r.rho) for r in prof.rows)
        for row in prof.rows:
            assert 1 <= row.inf_count <= row.sup_count
            global_count = fd.covering_number(c10, row.rho).count
            assert row.sup_count <= global_count

    def test_custom_centers_must_lie_in_set(self, c10):
        with pytest.raises(CenterNotInSet):
            fd.local_cover_profile(c10, [F(1, 9)], [F(1, 27)],
                                   centers=[F(1, 2)])

    def test_paired_grids(self, c10):
        prof = fd.local_cover_profile(c10, [F(1, 9), F(1, 27)],
                                      [F(1, 81), F(1, 243)], paired=True)
        assert len(prof.rows) == 2
        with pytest.raises(ScaleOrderViolation):
            fd.local_cover_profile(c10, [F(1, 9)], [F(1, 81), F(1, 243)],
                                   paired=True)

    def test_product_grid_rejects_inverted_pair(self, c10):
        with pytest.raises(ScaleOrderViolation):
            fd.local_cover_profile(c10, [F(1, 9), F(1, 81)], [F(1, 27)])


class TestAssouadEstimates:
    def test_middle_third(self, c10):
        prof = fd.local_cover_profile(c10, [F(1, 9)],
                                      [F(1, 3**b) for b in range(4, 9)])
        assert fd.assouad_estimate(prof) == pytest.approx(LOG23, abs=0.03)
        assert fd.lower_assouad_estimate(prof) == pytest.approx(LOG23, abs=0.03)

    def test_unit_interval(self, unit):
        prof = fd.local_cover_profile(unit, [F(1, 4)],
                                      [F(1, 2**b) for b in range(4, 9)])
        assert fd.assouad_estimate(prof) == pytest.approx(1.0, abs=0.02)
        assert fd.lower_assouad_estimate(prof) == pytest.approx(1.0, abs=0.05)

    def test_gap_set_lower_estimate_pinned_at_zero(self, gap_set):
        prof = fd.local_cover_profile(gap_set, [F(1, 4)],
                                      [F(1, 2**b) for b in range(4, 9)])
        assert fd.lower_assouad_estimate(prof) == pytest.approx(0.0, abs=1e-9)

    def test_needs_four_ratios(self, unit):
        prof = fd.local_cover_profile(unit, [F(1, 4)],
                                      [F(1, 16), F(1, 32), F(1, 64)])
        with pytest.raises(TooFewScales):
            fd.assouad_estimate(prof)


class TestAttainment:
    def test_middle_third_constant_small(self, third_spec):
        pre = fd.cantor_prefractal(third_spec, 0, 11)
        _, c_high = fd.attainment_check(pre, LOG23,
                                        fd.ScaleGrid(F(1, 3), F(1, 3), 10))
        assert c_high <= 4

    def test_unit_interval(self, unit):
        c_low, c_high = fd.attainment_check(unit, 1.0,
                                            fd.ScaleGrid(F(1, 2), F(1, 2), 8))
        assert c_high <= 1 + 1e-9
        assert c_low <= 2 + 1e-9

    def test_gap_set_non_attainment_signal(self, gap_set):
        shallow = fd.attainment_check(gap_set, 0.0,
                                      fd.ScaleGrid(F(1, 2), F(1, 2), 6))[1]
        deep = fd.attainment_check(gap_set, 0.0,
                                   fd.ScaleGrid(F(1, 2), F(1, 2), 12))[1]
        assert deep >= shallow * 1.5  # constant keeps growing: not attained


class TestChain:
    def test_known_reports(self):
        good = fd.DimensionReport(0.5, 0.5, 1.0, 0.0)
        assert fd.dimension_chain_check(good)
        flat = fd.DimensionReport(LOG23, LOG23, LOG23, LOG23)
        assert fd.dimension_chain_check(flat)
        bad = fd.DimensionReport(0.5, 0.4, 1.0, 0.0)
        assert not fd.dimension_chain_check(bad)

    def test_full_report_on_middle_third(self, c10):
        report = fd.dimension_report(
            c10, fd.ScaleGrid(F(1, 9), F(1, 3), 8),
            [F(1, 9)], [F(1, 3**b) for b in range(4, 9)],
            attainment_dim=LOG23)
        assert fd.dimension_chain_check(report)
        for value in (report.lower_box, report.upper_box,
                      report.assouad, report.lower_assouad):
            assert value == pytest.approx(LOG23, abs=0.03)
        assert report.attainment_constants[1] <= 4
