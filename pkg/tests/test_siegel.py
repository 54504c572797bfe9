import math

import numpy as np
import pytest

from engine.errors import DomainError, InputError, StructuralError
from engine.heights import RationalPoint, random_points
from engine.siegel import (
    EvaluationSystem,
    brute_force_min_sup,
    build_aux_polynomial,
    build_system,
    gromov_check,
    integer_kernel_basis,
    shortest_in_span,
    siegel_small_kernel,
    slope_max,
)


def in_kernel(matrix, v):
    return not np.any(np.array(matrix, dtype=object).dot(np.array(v, dtype=object)))


class TestKernel:
    def test_basis_of_a_single_row(self):
        basis = integer_kernel_basis([[1, 1, 1]])
        assert len(basis) == 2
        assert all(in_kernel([[1, 1, 1]], v) for v in basis)
        assert all(next(x for x in v if x) > 0 for v in basis)

    def test_injective_matrix_has_no_kernel(self):
        assert integer_kernel_basis([[1, 2], [3, 4]]) == []

    def test_large_entries(self):
        matrix = [[10**12 + 1, 10**12, 3, 7]]
        basis = integer_kernel_basis(matrix)
        assert len(basis) == 3
        assert all(in_kernel(matrix, v) for v in basis)

    def test_combination_search_never_worse_than_basis(self):
        basis = integer_kernel_basis([[1, 2, 3, 4, 5]])
        best = shortest_in_span(basis)
        assert max(map(abs, best)) <= min(max(map(abs, v)) for v in basis)


class TestBruteForce:
    @pytest.mark.parametrize("matrix,expected", [([[1, 1, 1]], 1), ([[1, 3]], 3), ([[2, 5, 9]], 2)])
    def test_minimum(self, matrix, expected):
        assert brute_force_min_sup(matrix, cap=10) == expected

    def test_no_kernel_within_cap(self):
        assert brute_force_min_sup([[1, 2], [3, 4]], cap=3) is None

    def test_budget_stops_the_search(self):
        assert brute_force_min_sup([[1000] * 9 + [1]], cap=20, budget=1000) is None


class TestSiegel:
    @pytest.mark.parametrize("row", [[1, 2, 3, 4, 5], [3, 7, 11, 13], [6, 10, 15]])
    def test_small_vector_is_close_to_optimal(self, row):
        result = siegel_small_kernel(EvaluationSystem.from_matrix([row]))
        assert in_kernel([row], result.vector)
        optimum = brute_force_min_sup([row], cap=20)
        assert max(map(abs, result.vector)) <= 2 * optimum
        assert result.audit_ok

    def test_too_many_points(self):
        with pytest.raises(StructuralError):
            siegel_small_kernel(EvaluationSystem.from_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]]))

    def test_alpha_range(self):
        with pytest.raises(DomainError):
            siegel_small_kernel(EvaluationSystem.from_matrix([[1, 2, 3]]), alpha=0.75)

    def test_column_count_must_be_a_monomial_count(self):
        with pytest.raises(InputError):
            EvaluationSystem.from_matrix([[1, 2, 3, 4]], degree=2)

    def test_slope_max(self):
        assert slope_max([0.5, 2.0, 1.0]) == 2.0
        with pytest.raises(DomainError):
            slope_max([])


class TestAuxPolynomial:
    def test_system_of_points(self):
        system = build_system([RationalPoint((1, 2)), RationalPoint((3, -1))], 2)
        assert system.matrix == ((1, 2, 4), (9, -3, 1))
        assert system.n_monomials == 3

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_vanishes_exactly(self, seed):
        points = random_points(3, 4, seed=seed, bound=6)
        aux = build_aux_polynomial(points, 2, alpha=1 / 3, sup_samples=2000)
        assert aux.exact_vanishing
        assert aux.section.is_integral
        assert np.isfinite(aux.empirical_c3)

    def test_degree_too_small(self):
        with pytest.raises(StructuralError):
            build_aux_polynomial(random_points(2, 3, seed=4), 2)


def test_gromov_sup_dominates_l2():
    report = gromov_check([1, 2, 3], trials=3, sup_samples=3000)
    assert report.violations == 0
    assert len(report.rows()) == 9
    assert all(v >= 0 for row in report.log_ratios for v in row)


def test_gromov_log_ratio_grows_at_most_linearly():
    report = gromov_check([1, 2, 4], trials=4, sup_samples=3000)
    assert report.c_max == pytest.approx(0.5 * math.log(3))
    assert report.ceiling_violations == 0
    for d, row in zip(report.degrees, report.log_ratios):
        assert max(row) <= report.c * d + 1e-12
        assert max(row) <= 0.5 * math.log(math.comb(d + 2, 2)) + 1e-12
    assert report.c <= report.c_max + 1e-12
    assert report.passed


def test_gromov_on_the_projective_line():
    report = gromov_check([1, 3], trials=3, sup_samples=2000, n_vars=2)
    assert report.c_max == pytest.approx(0.5 * math.log(2))
    assert report.passed
