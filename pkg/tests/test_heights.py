import math
from fractions import Fraction

import pytest

from engine.disk_geometry import Disk, DiskSet
from engine.errors import CapabilityError, InputError
from engine.heights import (
    HeightedPoint,
    RationalPoint,
    coordinate_heights,
    enumerate_points,
    height,
    liouville_check,
    random_points,
    scan_points,
    split_exceptional,
)
from engine.sections import PolynomialSection, random_sections


class TestRationalPoint:
    def test_normalisation(self):
        assert RationalPoint.from_projective([-2, 4, 6]).coords == (1, -2, -3)
        assert RationalPoint.from_projective([0, Fraction(-1, 2), Fraction(1, 3)]).coords == (0, 3, -2)

    def test_affine_round_trip(self):
        p = RationalPoint.from_affine([Fraction(1, 2), Fraction(3, 4)])
        assert p.coords == (4, 2, 3)
        assert p.affine() == (Fraction(1, 2), Fraction(3, 4))

    @pytest.mark.parametrize("coords", [(0, 0), (2, 4)])
    def test_rejects_non_primitive(self, coords):
        with pytest.raises(InputError):
            RationalPoint(coords)

    def test_point_at_infinity_has_no_affine_form(self):
        with pytest.raises(InputError):
            RationalPoint((0, 1)).affine()

    def test_random_points_are_primitive(self):
        pts = random_points(3, 50, seed=3, bound=5)
        assert len(pts) == 50
        assert all(max(abs(c) for c in p.coords) <= 5 for p in pts)


class TestHeights:
    def test_values(self):
        h_fs, h_max = height(RationalPoint((3, 4)))
        assert h_fs == pytest.approx(math.log(5))
        assert h_max == pytest.approx(math.log(4))

    def test_max_height_below_fubini_study(self):
        for p in random_points(4, 30, seed=1):
            h_fs, h_max = height(p)
            assert h_max <= h_fs <= h_max + 0.5 * math.log(4) + 1e-12

    def test_coordinate_heights(self):
        p = RationalPoint.from_affine([Fraction(1, 2), Fraction(-3, 4)])
        assert coordinate_heights(p) == pytest.approx([math.log(2), math.log(4)])


class TestLiouville:
    def test_sharp_case_has_zero_margin(self):
        report = liouville_check(PolynomialSection.linear([0, 1]), RationalPoint((2, 1)), samples=4000)
        assert report.margin == pytest.approx(0.0, abs=1e-12)
        assert report.passed

    def test_vacuous_on_zero_locus(self):
        report = liouville_check(PolynomialSection.linear([1, -1]), RationalPoint((1, 1)))
        assert report.status == "vacuous"
        assert report.passed

    def test_random_sections_and_points(self):
        sections = random_sections(3, 2, 10, seed=5)
        points = random_points(3, 10, seed=6)
        for s in sections:
            sup = s.sampled_sup(samples=2000)
            for p in points:
                assert liouville_check(s, p, sup=sup).passed

    def test_rejects_rational_coefficients(self):
        with pytest.raises(InputError):
            liouville_check(PolynomialSection.linear([Fraction(1, 2), 1]), RationalPoint((1, 1)))

    def test_variable_mismatch(self):
        with pytest.raises(InputError):
            liouville_check(PolynomialSection.linear([1, 1]), RationalPoint((1, 1, 1)))


class TestEnumeration:
    def test_line_points(self, line_curve):
        assert [hp.preimage for hp in scan_points(line_curve, 1.0, math.log(2))] == [Fraction(0)]
        found = scan_points(line_curve, 1.0, math.log(3))
        assert [hp.preimage for hp in found] == [Fraction(0), Fraction(1, 2), Fraction(-1, 2)]
        assert all(hp.h_fs <= math.log(3) for hp in found)

    def test_threads_do_not_change_the_result(self, polynomial_curve):
        serial = scan_points(polynomial_curve, 2.0, math.log(12))
        threaded = scan_points(polynomial_curve, 2.0, math.log(12), jobs=4)
        assert [hp.point for hp in serial] == [hp.point for hp in threaded]

    def test_negative_height(self, line_curve):
        assert scan_points(line_curve, 1.0, -1.0) == []

    def test_transcendental_curve_has_no_locus(self, exp_affine_curve):
        with pytest.raises(CapabilityError):
            scan_points(exp_affine_curve, 1.0, 2.0)

    def test_exceptional_split(self, line_curve):
        points = scan_points(line_curve, 1.0, math.log(3))
        disks = DiskSet((Disk(0.5 + 0j, 0.1),), "exceptional")
        kept, excluded = split_exceptional(points, disks)
        assert [hp.preimage for hp in excluded] == [Fraction(1, 2)]
        assert len(kept) == 2
        assert len(enumerate_points(line_curve, 1.0, math.log(3), disks)) == 2

    def test_heighted_row(self):
        row = HeightedPoint.of(RationalPoint((2, 1)), Fraction(1, 2)).row()
        assert row["w_num"] == 1 and row["w_den"] == 2
        assert row["coords"] == "2 1"
