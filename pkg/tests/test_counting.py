import math
from fractions import Fraction

import pytest

from engine.counting import (
    CountRecord,
    bp_envelope_check,
    brute_force_counts,
    chain_spans,
    closest_pair,
    count_table,
    counts_monotone,
    cover_counts,
    default_d0,
    diameter_threshold,
    envelope_rows,
    small_diam_vanishing_test,
    subgeometric_chains,
    subset_size_window,
    window_scan,
)
from engine.errors import DomainError, InputError, PreconditionError
from engine.heights import enumerate_points

R_GRID = [0.5, 1.0, 2.0]
H_GRID = [math.log(5), math.log(10), math.log(20)]


def record(T_r, H, count, r=1.0):
    return CountRecord(r, H, T_r, T_r, T_r, count, 0, 0.5)


class TestThresholds:
    @pytest.mark.parametrize("n,eps,expected", [(2, 0.5, 3), (2, 4.0, 1), (3, 0.3, 2), (1, 2.0, 1)])
    def test_default_d0(self, n, eps, expected):
        assert default_d0(n, eps) == expected

    def test_default_d0_impossible(self):
        with pytest.raises(DomainError):
            default_d0(1, 0.5)

    def test_threshold_increases_with_degree(self):
        values = [diameter_threshold(1.0, 2.0, d, 2) for d in range(1, 6)]
        assert values == sorted(values)
        assert all(0 < v < 1 for v in values)


class TestCountTable:
    def test_matches_brute_force(self, polynomial_curve):
        records = count_table(polynomial_curve, R_GRID, H_GRID, 0.5)
        oracle = brute_force_counts(polynomial_curve, R_GRID, H_GRID)
        assert {(rec.r, rec.H): rec.count for rec in records} == oracle
        assert [(rec.r, rec.H) for rec in records] == sorted(oracle)

    @pytest.mark.slow
    def test_lacunary_matches_brute_force(self, lacunary_curve):
        records = count_table(lacunary_curve, R_GRID, H_GRID, 0.5, jobs=2)
        oracle = brute_force_counts(lacunary_curve, R_GRID, H_GRID)
        assert {(rec.r, rec.H): rec.count for rec in records} == oracle

    @pytest.mark.slow
    def test_interpolation_matches_brute_force_up_to_height_fifty(self, interpolation_curve):
        heights = H_GRID + [math.log(50)]
        records = count_table(interpolation_curve, R_GRID, heights, 0.5, jobs=2)
        oracle = brute_force_counts(interpolation_curve, R_GRID, heights)
        assert {(rec.r, rec.H): rec.count for rec in records} == oracle
        assert counts_monotone(records)
        assert bp_envelope_check(records).ratio_ok

    def test_monotone(self, polynomial_curve):
        records = count_table(polynomial_curve, R_GRID, H_GRID, 0.5)
        assert counts_monotone(records)
        assert all(rec.excluded_count == 0 for rec in records)

    def test_monotone_detects_a_drop(self):
        assert not counts_monotone([record(1.0, 1.0, 5), record(1.0, 2.0, 3)])

    def test_bad_arguments(self, polynomial_curve, exp_curve):
        with pytest.raises(DomainError):
            count_table(polynomial_curve, R_GRID, H_GRID, 0.0)
        with pytest.raises(InputError):
            count_table(polynomial_curve, [], H_GRID, 0.5)
        with pytest.raises(InputError):
            brute_force_counts(exp_curve, R_GRID, H_GRID)


class TestEnvelope:
    def test_kappa_summary(self, polynomial_curve):
        records = count_table(polynomial_curve, R_GRID, H_GRID, 0.5)
        report = bp_envelope_check(records)
        assert len(report.kappas) == 9
        assert report.kappa_max >= report.kappa_median > 0
        assert len(envelope_rows(records)) == 27

    def test_zero_counts_are_left_out_of_the_median(self):
        report = bp_envelope_check([record(1.0, 1.0, 0), record(1.0, 2.0, 4), record(2.0, 2.0, 5, r=2.0)])
        assert len(report.positive) == 2
        assert report.ratio_ok

    def test_epsilon_override(self):
        base = bp_envelope_check([record(1.0, 1.0, 2)])
        wider = bp_envelope_check([record(1.0, 1.0, 2)], epsilon=1.0)
        assert wider.kappa_max < base.kappa_max


class TestChains:
    def test_doubling_sequence_is_one_chain(self):
        assert subgeometric_chains([8, 1, 2, 4, 100], A=1) == [[1, 2, 4, 8]]

    def test_isolated_values_form_no_chain(self):
        assert subgeometric_chains([1, 10, 100], A=1) == []

    def test_spanning(self):
        assert chain_spans([1, 2, 4, 8], 1, 8, 1)
        assert not chain_spans([4, 8], 1, 64, 1)


class TestWindows:
    def test_synthetic_chain_outside_the_window(self):
        table = [record(2.0**k, 0.0, 10**6) for k in range(6)]
        report = window_scan(None, 2.5, 0.5, 1.0, table)
        assert not any(report.members)
        assert report.chains == ((1.0, 2.0, 4.0, 8.0, 16.0, 32.0),)
        assert report.spanning == (True,)
        assert not report.passed

    def test_everything_inside_the_window(self):
        table = [record(2.0**k, 0.0, 0) for k in range(6)]
        report = window_scan(None, 2.5, 0.5, 1.0, table)
        assert all(report.members)
        assert report.chains == ()
        assert report.passed
        assert report.largest_disk == pytest.approx(31.0)

    def test_rows(self):
        report = window_scan(None, 2.5, 0.5, 1.0, [record(1.0, 2.0, 3)])
        assert report.rows() == [{"x": 1.0, "y": 2.0, "norm": 3.0, "C": 3, "member": True}]

    def test_headline_range(self, lacunary_curve):
        assert window_scan(lacunary_curve, 2.5, 0.5, 1.0, [record(1.0, 1.0, 0)]).headline
        assert not window_scan(lacunary_curve, 1.5, 0.5, 1.0, [record(1.0, 1.0, 0)]).headline


class TestSmallDiameter:
    FIXTURE = dict(r=2.5, H=math.log(6), d=2, epsilon=4.0, alpha=1 / 3, sup_samples=2000)

    def test_closest_pair_of_the_lacunary_points(self, lacunary_curve):
        points = enumerate_points(lacunary_curve, 2.5, math.log(6))
        i, j, gap = closest_pair(points, 12.5)
        assert {points[i].preimage, points[j].preimage} == {Fraction(1, 2), Fraction(1, 3)}
        assert gap == pytest.approx(12.5 * (1 / 6) / (12.5**2 - 1 / 6))

    def test_close_pair_fixture_vanishes_on_the_held_out_node(self, lacunary_curve):
        report = small_diam_vanishing_test(lacunary_curve, **self.FIXTURE)
        assert report.status == "pass"
        assert set(report.pair) == {Fraction(1, 2), Fraction(1, 3)}
        assert report.pair_distance <= report.delta
        preimages = {hp.preimage for hp in report.witness}
        assert set(report.pair) <= preimages
        assert report.size_window == (2, 4)
        assert 2 <= report.interpolated <= 4
        assert report.held_out >= 1
        assert all(v == 0 for v in report.held_out_values)
        held_point = next(hp.point for hp in report.witness if hp.preimage == report.pair[1])
        assert held_point not in report.aux.vanishing
        assert report.aux.exact_vanishing

    def test_explicit_pair(self, lacunary_curve):
        report = small_diam_vanishing_test(lacunary_curve, pair=(Fraction(0), Fraction(1)), **self.FIXTURE)
        assert report.pair == (Fraction(0), Fraction(1))
        assert report.status == "pass"
        assert all(v == 0 for v in report.held_out_values)

    def test_pair_outside_the_point_set(self, lacunary_curve):
        with pytest.raises(PreconditionError):
            small_diam_vanishing_test(lacunary_curve, pair=(Fraction(1, 7), Fraction(0)), **self.FIXTURE)

    def test_empty_size_window_is_vacuous(self, lacunary_curve):
        params = {**self.FIXTURE, "alpha": 0.05}
        report = small_diam_vanishing_test(lacunary_curve, **params)
        assert report.size_window == (6, 5)
        assert report.status == "vacuous"
        assert report.held_out == 0
        assert report.passed

    @pytest.mark.parametrize("h0,alpha,window", [(6, 1 / 3, (2, 4)), (6, 0.25, (3, 4)), (10, 0.45, (1, 5)), (15, 0.2, (9, 12))])
    def test_subset_size_window(self, h0, alpha, window):
        assert subset_size_window(h0, alpha) == window

    @pytest.mark.parametrize("alpha", [0.0, 0.5, 0.7])
    def test_subset_size_window_rejects_alpha(self, alpha):
        with pytest.raises(DomainError):
            subset_size_window(6, alpha)

    def test_degree_below_d0(self, lacunary_curve):
        with pytest.raises(PreconditionError):
            small_diam_vanishing_test(lacunary_curve, 2.5, math.log(6), 1, 0.5)

    def test_requires_affine(self, exp_curve):
        with pytest.raises(InputError):
            small_diam_vanishing_test(exp_curve, 1.0, 1.0, 2, 4.0)


def test_cover_counts_partition_the_points(line_curve):
    report = cover_counts(line_curve, 1.0, math.log(3), 1, 1.0)
    assert report.size <= report.bound
    assert report.total == len(enumerate_points(line_curve, 1.0, math.log(3)))
