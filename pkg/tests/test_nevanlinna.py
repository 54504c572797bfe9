import math

import numpy as np
import pytest

from engine.entire_curves import load_curve
from engine.errors import DomainError, InputError, PreconditionError
from engine.nevanlinna import (
    basepoint_bound_check,
    basepoint_constant,
    characteristic,
    characteristic_based,
    characteristic_double_integral,
    characteristic_profile,
    compact_basepoint_check,
    growth_estimate_check,
    projective_basepoint_bound,
    section_independence,
    verify_fmt,
    zero_count_bound_check,
)
from engine.sections import PolynomialSection, section_from_expression


class TestCharacteristic:
    @pytest.mark.parametrize("r", [0.5, 1.0, 2.0, 5.0])
    def test_identity_closed_form(self, identity_curve, r):
        est = characteristic(identity_curve, r, tol=1e-10)
        assert est.value == pytest.approx(0.5 * math.log(1 + r * r), abs=1e-9)
        assert est.error < 1e-8

    def test_exp_grows_like_r_over_pi(self, exp_curve):
        assert characteristic(exp_curve, 20.0).value == pytest.approx(20 / math.pi - 0.5 * math.log(2), abs=0.02)

    def test_profile_sorted_and_monotone(self, exp_curve):
        profile = characteristic_profile(exp_curve, [3, 1, 2, 0.5])
        assert profile.radii == [0.5, 1.0, 2.0, 3.0]
        assert profile.monotone
        assert all(v >= 0 for v in profile.values)

    def test_interpolation_curves_at_radius_one(self, interpolation_curve, lacunary_curve):
        for curve in (interpolation_curve, lacunary_curve):
            est = characteristic(curve, 1.0, tol=1e-10)
            assert math.isfinite(est.value) and est.value > 0
        # the lacunary series agrees with 1 + z up to a term of size 1e-7 on the unit disk
        chord = load_curve({"name": "chord", "kind": "affine", "components": ["z", "1 + z"]})
        assert characteristic(lacunary_curve, 1.0, tol=1e-10).value == pytest.approx(
            characteristic(chord, 1.0, tol=1e-10).value, abs=1e-6
        )

    def test_based_at_origin_matches_standard(self, exp_curve):
        assert characteristic_based(exp_curve, 0j, 2.0).value == pytest.approx(characteristic(exp_curve, 2.0).value)

    def test_base_point_must_lie_inside(self, identity_curve):
        with pytest.raises(DomainError):
            characteristic_based(identity_curve, 3.0, 2.0)
        with pytest.raises(DomainError):
            characteristic(identity_curve, 0.0)

    @pytest.mark.slow
    @pytest.mark.parametrize("w0", [0j, 0.4 + 0.3j])
    def test_double_integral_agrees_with_circle_form(self, exp_curve, w0):
        circle = characteristic_based(exp_curve, w0, 1.5, tol=1e-9)
        double = characteristic_double_integral(exp_curve, 1.5, tol=1e-6, w0=w0)
        assert double.value == pytest.approx(circle.value, abs=1e-5)


class TestFirstMainTheorem:
    @pytest.mark.parametrize("a,r", [(0.4, 1.0), (1.5, 2.0)])
    @pytest.mark.parametrize("w0_frac", [0.0, 0.3])
    def test_identity_line(self, identity_curve, a, r, w0_frac):
        s = PolynomialSection.linear([-a, 1], name="x1 - a*x0")
        report = verify_fmt(identity_curve, s, w0_frac * r, r, tol=1e-10)
        assert report.zeros == 1
        assert abs(report.residual) < 1e-8
        assert report.passed

    def test_exp_three_zeros(self, exp_curve):
        s = section_from_expression("x1 - x0", 2)
        report = verify_fmt(exp_curve, s, 0.5, 7.0, tol=1e-9)
        assert report.zeros == 3
        assert abs(report.residual) < 1e-6

    def test_section_vanishing_at_base_point(self, exp_curve):
        s = section_from_expression("x1 - x0", 2)
        with pytest.raises(PreconditionError):
            verify_fmt(exp_curve, s, 0j, 2.0)

    def test_row_is_flat(self, identity_curve):
        row = verify_fmt(identity_curve, PolynomialSection.linear([-0.5, 1]), 0j, 1.0).row()
        assert set(row) >= {"proximity", "characteristic", "zero_sum", "base_value", "residual", "passed"}


class TestBasepoint:
    def test_constant(self, line_curve):
        assert basepoint_constant(line_curve, 0.5) == pytest.approx(4.0)

    @pytest.mark.parametrize("epsilon", [0.5, 1.0])
    def test_line_sweep_passes(self, line_curve, epsilon):
        report = basepoint_bound_check(line_curve, 1.0, epsilon, grid_size=12)
        assert report.passed
        assert 0 < report.worst_ratio <= 1

    @pytest.mark.parametrize("name,r,epsilon", [("line_curve", 2.0, 1.0), ("exp_affine_curve", 3.0, 0.5)])
    def test_sweep_at_larger_radii(self, request, name, r, epsilon):
        report = basepoint_bound_check(request.getfixturevalue(name), r, epsilon, grid_size=15)
        assert report.r == r
        assert report.violations == 0

    @pytest.mark.slow
    @pytest.mark.parametrize("name,r,epsilon", [("line_curve", 2.0, 1.0), ("exp_affine_curve", 3.0, 0.5)])
    def test_full_grid_at_larger_radii(self, request, name, r, epsilon):
        report = basepoint_bound_check(request.getfixturevalue(name), r, epsilon, grid_size=50)
        assert report.values.size == 2500
        assert report.passed

    def test_requires_affine(self, identity_curve):
        with pytest.raises(InputError):
            basepoint_bound_check(identity_curve, 1.0, 0.5)

    def test_projective_bound_not_applicable_for_small_radius(self, exp_curve):
        disks, report = projective_basepoint_bound(exp_curve, 0.5)
        assert report.status == "not_applicable"
        assert report.passed
        assert len(disks) == 0

    @pytest.mark.slow
    def test_projective_bound_for_exp(self, exp_curve):
        disks, report = projective_basepoint_bound(exp_curve, 5.0, samples=40)
        assert report.T_r > 1
        assert report.radii_sum <= report.radii_bound
        assert report.passed, report


class TestZeroCounts:
    def test_fit_covers_every_row(self, identity_curve):
        sections = [PolynomialSection.linear([-0.5, 1]), PolynomialSection.linear([-1.5, 1])]
        report = zero_count_bound_check(identity_curve, 1, 0.5, sections, [0.25, 1.0, 2.0])
        assert report.degrees == ((0, 1, 1), (0, 0, 1))
        assert report.C2 == 0
        assert report.passed

    def test_degree_mismatch(self, identity_curve):
        with pytest.raises(InputError):
            zero_count_bound_check(identity_curve, 2, 0.5, [PolynomialSection.linear([1, 1])], [1.0])

    def test_independence_of_identical_fits(self, identity_curve):
        report = zero_count_bound_check(identity_curve, 1, 0.5, [PolynomialSection.linear([-0.5, 1])], [1.0, 2.0])
        assert section_independence([report, report]) == 0.0


class TestSurrogates:
    def test_growth_for_polynomial_coordinates(self, polynomial_curve):
        report = growth_estimate_check(polynomial_curve, [0.5, 1.0, 3.0], circle_points=1024)
        assert len(report.rows) == 6
        assert report.passed

    def test_compact_ratios_have_bounded_spread(self, identity_curve):
        base_points = np.array([0j, 0.2, -0.3j])
        report = compact_basepoint_check(identity_curve, 0.5, 0.5, [1.0, 2.0, 4.0], base_points)
        lo, hi = report.interval
        assert lo > 0
        assert report.passed

    def test_compact_needs_radii_beyond_r0(self, identity_curve):
        with pytest.raises(InputError):
            compact_basepoint_check(identity_curve, 2.0, 0.5, [1.0, 2.0])
