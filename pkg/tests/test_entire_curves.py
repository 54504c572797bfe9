from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from engine.entire_curves import (
    EntireCurve,
    ExpressionComponent,
    NewtonSeriesComponent,
    build_rational_curve,
    evaluate,
    load_curve,
    node,
    node_index,
    parse_component,
    pullback,
    rational_height,
    rational_nodes,
    zariski_rank_check,
)
from engine.errors import CapabilityError, ConfigError, DomainError, InputError
from engine.sections import PolynomialSection


class TestGrammar:
    @pytest.mark.parametrize("text", ["z", "z^2 + 1/2", "exp(z) - 1", "sin(z)*cosh(2*z)", "(1+I)*z/3", "2.5*z**3"])
    def test_accepts_entire_expressions(self, text):
        parse_component(text)

    @pytest.mark.parametrize(
        "text",
        ["", "1/z", "sqrt(z)", "log(z)", "z + w", "gamma(z)", "exp(z", "z^(-1)", "z^(1/2)"],
    )
    def test_rejects_with_config_error(self, text):
        with pytest.raises(ConfigError):
            parse_component(text)

    def test_exact_values_of_polynomials(self):
        comp = ExpressionComponent("z^2 + 1/2")
        assert comp.exact(Fraction(1, 3)) == Fraction(11, 18)
        assert comp.has_exact

    def test_transcendental_has_no_exact_values(self):
        with pytest.raises(CapabilityError):
            ExpressionComponent("exp(z)").exact(Fraction(1))


class TestNodes:
    def test_first_nodes(self):
        assert rational_nodes(7) == [
            Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-1, 2), Fraction(2), Fraction(-2)
        ]

    @settings(max_examples=60, deadline=None)
    @given(st.integers(-40, 40), st.integers(1, 40))
    def test_index_inverts_node(self, a, b):
        q = Fraction(a, b)
        assert node(node_index(q)) == q

    def test_height_order(self):
        heights = [rational_height(q) for q in rational_nodes(200)]
        assert heights == sorted(heights)


class TestNewtonSeries:
    def test_exact_values_at_first_nodes(self):
        f = NewtonSeriesComponent()
        assert f.exact(Fraction(0)) == 1
        assert f.exact(Fraction(1)) == 2
        assert f.exact(Fraction(-1)) == Fraction(1, 2)

    def test_lacunary_nodes_lie_on_a_line(self):
        f = NewtonSeriesComponent(pattern="lacunary")
        for q in rational_nodes(8):
            assert f.exact(q) == 1 + q

    def test_float_matches_exact(self):
        f = NewtonSeriesComponent()
        for q in rational_nodes(20):
            assert complex(f(np.asarray(float(q)))) == pytest.approx(float(f.exact(q)), rel=1e-12, abs=1e-12)

    @pytest.mark.parametrize("decay,pattern", [("factorial", "all"), ("factorial", "lacunary"), (3, "all")])
    def test_exact_matches_the_defining_sum(self, decay, pattern):
        f = NewtonSeriesComponent(decay=decay, pattern=pattern)
        nodes = rational_nodes(40)
        for m, q in enumerate(nodes, start=1):
            total, product = Fraction(0), Fraction(1)
            for n in range(m):
                if n:
                    product *= q - nodes[n - 1]
                total += f.coefficient(n) * product
            assert f.exact(q) == total

    def test_truncation_at_the_origin_keeps_the_constant_term(self):
        assert NewtonSeriesComponent().truncation(0.0, 1e-12) == (0, 0.0)
        assert NewtonSeriesComponent(decay=3).truncation(0.0, 0.0, rel=1e-18) == (0, 0.0)

    @pytest.mark.parametrize("decay,pattern", [("factorial", "all"), ("factorial", "lacunary"), (3, "all")])
    def test_value_at_the_origin_node(self, decay, pattern):
        f = NewtonSeriesComponent(decay=decay, pattern=pattern)
        assert node_index(Fraction(0)) == 1
        assert f.exact(Fraction(0)) == 1
        assert f.small_value(Fraction(0), 5) == 1
        assert complex(f(np.asarray(0j))) == 1
        nodes = [Fraction(0), Fraction(1, 2), Fraction(-1)]
        expected = [float(f.exact(q)) for q in nodes]
        np.testing.assert_allclose(f(np.array([float(q) for q in nodes], dtype=complex)), expected, rtol=1e-12, atol=1e-14)
        assert np.isfinite(f.float_error(0j, 1 + 0j))

    @pytest.mark.parametrize("pattern", ["all", "lacunary"])
    def test_derivative_at_the_origin(self, pattern):
        f = NewtonSeriesComponent(pattern=pattern)
        h = 1e-6
        numeric = (f(np.asarray(h + 0j)) - f(np.asarray(-h + 0j))) / (2 * h)
        assert complex(f.derivative(np.asarray(0j))) == pytest.approx(complex(numeric), rel=1e-6)
        if pattern == "lacunary":
            assert complex(f.derivative(np.asarray(0j))) == pytest.approx(1.0, abs=1e-6)

    def test_derivative_matches_difference_quotient(self):
        f = NewtonSeriesComponent(decay=3)
        z, h = 0.7 + 0.2j, 1e-6
        numeric = (f(np.asarray(z + h)) - f(np.asarray(z - h))) / (2 * h)
        assert complex(f.derivative(np.asarray(z))) == pytest.approx(complex(numeric), rel=1e-6)

    def test_height_budget(self):
        f = NewtonSeriesComponent(height_budget=5)
        with pytest.raises(CapabilityError):
            f.exact(Fraction(1, 7))

    def test_small_value_filter(self):
        f = NewtonSeriesComponent()
        assert f.small_value(Fraction(1), 5) == 2
        assert f.small_value(Fraction(1, 2), 5) is None

    @pytest.mark.parametrize("kwargs", [{"decay": 1}, {"decay": "fast"}, {"pattern": "sparse"}, {"height_budget": 0}])
    def test_invalid_parameters(self, kwargs):
        with pytest.raises(ConfigError):
            NewtonSeriesComponent(**kwargs)


class TestCurves:
    def test_load_curve_defaults(self):
        curve = load_curve({"name": "c", "kind": "projective", "components": ["1", "z", "exp(z)"]})
        assert curve.dimension == 2
        assert curve.n_vars == 3

    @pytest.mark.parametrize(
        "config",
        [
            {"kind": "affine"},
            {"kind": "plane", "components": ["z"]},
            {"kind": "projective", "components": ["z"]},
            {"kind": "projective", "components": ["0", "0"]},
            {"kind": "affine", "components": ["z"], "colour": "red"},
            {"kind": "affine", "components": ["z", {"series": "taylor"}]},
        ],
    )
    def test_bad_configs(self, config):
        with pytest.raises(ConfigError):
            load_curve(config)

    def test_lift_of_affine_curve(self, exp_affine_curve):
        lift = exp_affine_curve.lift(np.array([0j, 1j]))
        np.testing.assert_allclose(lift[0], [1, 1])
        np.testing.assert_allclose(lift[2], np.exp([0j, 1j]))

    def test_log_weight_rejects_common_zero(self):
        curve = EntireCurve("bad", "projective", (ExpressionComponent("z"), ExpressionComponent("z^2")), 1)
        with pytest.raises(DomainError):
            curve.log_weight(np.array([0j]))

    def test_rational_value(self, polynomial_curve, interpolation_curve):
        assert polynomial_curve.rational_value(Fraction(1, 2)) == (Fraction(1, 2), Fraction(3, 4))
        assert interpolation_curve.rational_value(Fraction(1)) == (Fraction(1), Fraction(2))

    def test_no_locus_for_exp(self, exp_curve):
        assert not exp_curve.has_locus
        with pytest.raises(CapabilityError):
            exp_curve.rational_value(Fraction(1))

    def test_evaluate_escalates_for_large_arguments(self, interpolation_curve):
        value = evaluate(interpolation_curve, 0.5, tol=1e-30)
        assert value.precision.startswith("mp:")
        assert value.error <= 1e-30

    @pytest.mark.parametrize("pattern", ["all", "lacunary"])
    def test_evaluate_interpolation_curves_at_the_origin(self, pattern):
        curve = build_rational_curve(10, pattern=pattern)
        value = evaluate(curve, 0j, 1e-12)
        assert value.values == (0, 1)
        assert value.error <= 1e-12
        precise = evaluate(curve, 0j, 1e-30)
        assert complex(precise.values[1]) == 1
        assert np.isfinite(curve.log_weight(np.array([0j]))[0])
        assert np.all(np.isfinite(curve.density(np.array([0j, 0.25 + 0.25j]))))

    def test_evaluate_float_path(self, exp_curve):
        value = evaluate(exp_curve, 1.0)
        assert value.precision == "float"
        assert value.values[1] == pytest.approx(np.e)

    def test_pullback_variable_mismatch(self, exp_curve):
        with pytest.raises(InputError):
            pullback(exp_curve, PolynomialSection.linear([1, 1, 1]))

    def test_pullback_log_norm(self, identity_curve):
        pb = pullback(identity_curve, PolynomialSection.linear([0, 1]))
        z = np.array([0.5 + 0j])
        assert pb.log_norm(z)[0] == pytest.approx(np.log(0.5) - 0.5 * np.log(1.25))

    def test_build_rational_curve(self):
        curve = build_rational_curve(50, decay=4, pattern="lacunary")
        assert curve.kind == "affine" and curve.dimension == 2
        assert curve.has_locus

    def test_rank_check_separates_algebraic_and_transcendental(self, polynomial_curve, exp_affine_curve):
        assert zariski_rank_check(polynomial_curve, degree=2) < 1e-8
        assert zariski_rank_check(exp_affine_curve, degree=2, radius=2.0) > 1e-8
