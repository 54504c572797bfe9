import numpy as np
import pytest

from engine.errors import DomainError
from engine.zeros import box_contour, circle_contour, count_zeros, winding_number


def poly(roots):
    roots = np.asarray(roots, dtype=complex)

    def g(z):
        z = np.asarray(z, dtype=complex)
        return np.prod(z[..., None] - roots, axis=-1)

    return g


def test_winding_counts_roots_inside_circle():
    g = poly([0.1, -0.5j, 2.0])
    assert winding_number(g, circle_contour(1.0)) == 2
    assert winding_number(g, circle_contour(3.0)) == 3


def test_winding_on_box():
    g = poly([0.25 + 0.25j, 2 + 2j])
    assert winding_number(g, box_contour(0, 1, 0, 1)) == 1


def test_locates_simple_zeros():
    roots = [0.3, -0.4 + 0.2j, 0.1 - 0.6j]
    zc = count_zeros(poly(roots), 1.0)
    assert zc.total == 3
    assert not zc.nudged
    found = sorted((z.location for z in zc), key=lambda w: (w.real, w.imag))
    np.testing.assert_allclose(found, sorted(roots, key=lambda w: (w.real, w.imag)), atol=1e-8)


def test_multiplicity():
    zc = count_zeros(poly([0.2, 0.2, 0.2, -0.5]), 1.0)
    assert zc.total == 4
    assert sorted(z.multiplicity for z in zc) == [1, 3]


def test_zero_on_contour_nudges_radius():
    zc = count_zeros(poly([1.0, 0.0]), 1.0)
    assert zc.nudged
    assert zc.radius != zc.requested_radius
    assert zc.total == (2 if zc.radius > 1.0 else 1)


def test_exp_minus_one_has_three_zeros_in_radius_seven():
    zc = count_zeros(lambda z: np.exp(z) - 1, 7.0)
    assert zc.total == 3
    locations = sorted(z.location.imag for z in zc)
    np.testing.assert_allclose(locations, [-2 * np.pi, 0.0, 2 * np.pi], atol=1e-8)


def test_no_zeros():
    zc = count_zeros(lambda z: np.exp(z), 5.0)
    assert zc.total == 0 and len(zc) == 0


def test_enclosures_contain_true_zeros():
    roots = [0.5 + 0.5j, -0.3]
    zc = count_zeros(poly(roots), 1.0)
    for rec in zc:
        assert min(abs(rec.location - r) for r in roots) <= rec.enclosure_radius + 1e-12


def test_bad_radius():
    with pytest.raises(DomainError):
        count_zeros(poly([0.0]), -1.0)
