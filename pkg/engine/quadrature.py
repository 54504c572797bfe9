"""Circle and radial quadrature with error estimates.

Circle means use the periodic trapezoid rule with node doubling; the radial
log-weighted integral uses QUADPACK's algebraic-logarithmic weight.
"""

import logging
from collections.abc import Callable
from typing import NamedTuple

import numpy as np
from scipy import integrate

from engine.errors import PrecisionError
from utils.constants import QUADRATURE

logger = logging.getLogger(__name__)


class Estimate(NamedTuple):
    """A computed value with its estimated absolute error."""

    value: float
    error: float


def _converged(err: float, tol: float, value: float) -> bool:
    # Floor at a few ulps of the running value; below that doubling cannot help.
    return err <= tol or err <= 64 * np.finfo(float).eps * (1.0 + abs(value))


class CircleSampler:
    """Cached samples of ``fn`` on the circle |z| = radius at doubling node counts.

    ``fn`` maps a complex array to a real array. Several weighted means of the same
    integrand (one per base point) share the expensive evaluations.
    """

    def __init__(self, fn: Callable[[np.ndarray], np.ndarray], radius: float):
        self._fn = fn
        self.radius = radius
        self._nodes = 0
        self._values: np.ndarray | None = None

    def values(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        """(theta, fn(radius*e^{i theta})) on n equispaced nodes."""
        if self._values is None or self._nodes < n or self._nodes % n:
            theta = 2 * np.pi * np.arange(n) / n
            self._values = np.asarray(self._fn(self.radius * np.exp(1j * theta)), dtype=float)
            self._nodes = n
        step = self._nodes // n
        theta = 2 * np.pi * np.arange(n) / n
        return theta, self._values[::step]

    def mean(
        self,
        tol: float,
        weight: Callable[[np.ndarray], np.ndarray] | None = None,
        min_nodes: int | None = None,
        max_nodes: int | None = None,
    ) -> Estimate:
        """(1/2pi) * integral of fn * weight over the circle, doubling until stable."""
        n = min_nodes or QUADRATURE["min_nodes"]
        cap = max_nodes or QUADRATURE["max_nodes"]
        prev = self._weighted(n, weight)
        while True:
            n *= 2
            cur = self._weighted(n, weight)
            err = abs(cur - prev)
            if not np.isfinite(cur):
                raise PrecisionError(f"non-finite circle integrand at radius {self.radius:g}")
            if _converged(err, tol, cur):
                logger.debug("circle mean converged: r=%g nodes=%d err=%.2e", self.radius, n, err)
                return Estimate(float(cur), float(err))
            if n >= cap:
                raise PrecisionError(
                    f"trapezoid doubling did not converge at radius {self.radius:g}: "
                    f"change {err:.3e} > tol {tol:.1e} at {n} nodes"
                )
            prev = cur

    def _weighted(self, n: int, weight) -> float:
        theta, vals = self.values(n)
        if weight is None:
            return float(np.mean(vals))
        return float(np.mean(vals * weight(theta)))


def periodic_trapezoid(
    fn: Callable[[np.ndarray], np.ndarray],
    tol: float,
    min_nodes: int | None = None,
    max_nodes: int | None = None,
) -> Estimate:
    """(1/2pi) * integral over [0, 2pi) of ``fn(theta)`` by node doubling."""
    n = min_nodes or QUADRATURE["min_nodes"]
    cap = max_nodes or QUADRATURE["max_nodes"]
    prev = float(np.mean(fn(2 * np.pi * np.arange(n) / n)))
    while True:
        # Only the odd nodes of the refined rule are new.
        odd = 2 * np.pi * (2 * np.arange(n) + 1) / (2 * n)
        cur = 0.5 * (prev + float(np.mean(fn(odd))))
        n *= 2
        err = abs(cur - prev)
        if not np.isfinite(cur):
            raise PrecisionError("non-finite periodic integrand")
        if _converged(err, tol, cur):
            return Estimate(cur, err)
        if n >= cap:
            raise PrecisionError(
                f"trapezoid doubling did not converge: change {err:.3e} > tol {tol:.1e} at {n} nodes"
            )
        prev = cur


def radial_log_integral(m: Callable[[float], float], r: float, tol: float) -> Estimate:
    """Integral over the disk of radius r of log(r/|z|) * density, given its angular mean.

    ``m(s)`` is the angular mean of the density on |z| = s, so the integral equals
    2*pi * integral_0^r s*log(r/s)*m(s) ds. The log factor goes to QUADPACK's
    'alg-loga' weight.
    """
    opts = dict(epsabs=tol, epsrel=tol, limit=QUADRATURE["quad_limit"])
    plain, e1 = integrate.quad(m, 0.0, r, weight="alg", wvar=(1, 0), **opts)
    logged, e2 = integrate.quad(m, 0.0, r, weight="alg-loga", wvar=(1, 0), **opts)
    value = 2 * np.pi * (np.log(r) * plain - logged)
    error = 2 * np.pi * (abs(np.log(r)) * e1 + e2)
    return Estimate(float(value), float(error))
