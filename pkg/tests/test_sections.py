from fractions import Fraction
from math import comb

import numpy as np
import pytest

from engine.errors import ConfigError, InputError
from engine.sections import PolynomialSection, monomial_exponents, random_sections, section_from_expression


@pytest.mark.parametrize("n_vars,degree", [(2, 1), (2, 4), (3, 2), (4, 3)])
def test_monomial_count(n_vars, degree):
    basis = monomial_exponents(n_vars, degree)
    assert len(basis) == comb(n_vars - 1 + degree, degree)
    assert basis[0] == (degree,) + (0,) * (n_vars - 1)
    assert len(set(basis)) == len(basis)


def test_linear_section_values():
    s = PolynomialSection.linear([1, -2, 3])
    assert s.exact([1, 1, 1]) == 2
    np.testing.assert_allclose(s.raw(np.array([[1.0], [1.0], [1.0]])), [2.0])


def test_norm_is_scale_invariant():
    s = PolynomialSection.linear([0, 1])
    x = np.array([[1.0, 3.0], [1.0, 3.0]])
    np.testing.assert_allclose(s.norm_at(x), [1 / np.sqrt(2)] * 2)


def test_zero_vector_rejected():
    with pytest.raises(InputError):
        PolynomialSection.linear([1, 1]).norm_at(np.zeros((2, 1)))


def test_constructor_validation():
    with pytest.raises(InputError):
        PolynomialSection(1, 2, {(1, 0): Fraction(0)})
    with pytest.raises(InputError):
        PolynomialSection(2, 2, {(1, 0): Fraction(1)})
    with pytest.raises(InputError):
        PolynomialSection.from_vector([1, 2], 2, 2)


def test_l2_norm_of_coordinate():
    # ||x_0||^2 = 1/(N+1) on P^N
    assert PolynomialSection.linear([1, 0]).l2_norm() == pytest.approx(np.sqrt(1 / 2))
    assert PolynomialSection.linear([1, 0, 0]).l2_norm() == pytest.approx(np.sqrt(1 / 3))


@pytest.mark.parametrize("seed", range(5))
def test_sampled_sup_is_below_upper_bound(seed):
    (s,) = random_sections(3, 2, 1, seed=seed)
    sampled = s.sampled_sup(samples=4000)
    assert 0 < sampled <= s.sup_upper_bound() + 1e-12
    assert s.l2_norm() <= sampled + 1e-9


def test_coordinate_sup_is_one():
    assert PolynomialSection.linear([0, 1]).sampled_sup(samples=4000) == pytest.approx(1.0, abs=1e-3)
    assert PolynomialSection.linear([0, 1]).sup_upper_bound() == pytest.approx(1.0)


class TestExpressions:
    def test_homogeneous(self):
        s = section_from_expression("x1 - x0", 2)
        assert s.degree == 1
        assert s.coefficients == {(0, 1): 1, (1, 0): -1}

    def test_dehomogenised_input_gets_x0(self):
        s = section_from_expression("x1^2 + 1/2", 2)
        assert s.degree == 2
        assert s.coefficients == {(0, 2): 1, (2, 0): Fraction(1, 2)}

    @pytest.mark.parametrize("text", ["x0 + x1^2", "sqrt(x1)", "x1 + pi*x0", "x5"])
    def test_rejected(self, text):
        with pytest.raises((ConfigError, InputError)):
            section_from_expression(text, 2)

    def test_identically_zero(self):
        with pytest.raises(InputError):
            section_from_expression("x1 - x1", 2)


def test_random_sections_are_reproducible_and_integral():
    a = random_sections(3, 2, 4, seed=7)
    b = random_sections(3, 2, 4, seed=7)
    assert [s.vector() for s in a] == [s.vector() for s in b]
    assert all(s.is_integral for s in a)
    assert all(1 <= abs(c) <= 9 for s in a for c in s.vector())
