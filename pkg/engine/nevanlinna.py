"""Characteristic functions, proximity, First Main Theorem checks, and base-point bounds.

All characteristic functions are for the Fubini-Study metrised O(1). The circle form
T(r) = 1/2 * mean log ||lift||^2 - 1/2 * log ||lift(0)||^2 is the workhorse; the
double-integral form is kept as an independent cross-check.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field, replace

import numpy as np

from engine.disk_geometry import (
    AtomicMeasure,
    DiskSet,
    GreenKernel,
    cartan_exceptional,
    green,
    poisson_weight,
)
from engine.entire_curves import EntireCurve, ExpressionComponent, pullback
from engine.errors import DomainError, InputError, PreconditionError, PrecisionError
from engine.quadrature import CircleSampler, Estimate, periodic_trapezoid, radial_log_integral
from engine.sampling import halton_disk, polar_grid
from engine.sections import PolynomialSection
from engine.zeros import count_zeros
from utils.constants import CARTAN, QUADRATURE, SAMPLING

logger = logging.getLogger(__name__)

_EPS = np.finfo(float).eps


def _check_radius(r: float):
    if not r > 0:
        raise DomainError(f"radius must be positive, got {r!r}")


def _log_weight_at(curve: EntireCurve, w: complex) -> float:
    return float(curve.log_weight(np.asarray([complex(w)]))[0])


# ---------------------------------------------------------------------------
# Characteristic functions
# ---------------------------------------------------------------------------
class CircleCharacteristic:
    """T(r) and T_{w0}(r) on one circle, sharing the samples of log ||lift||^2."""

    def __init__(self, curve: EntireCurve, r: float):
        _check_radius(r)
        self.curve = curve
        self.r = float(r)
        self.sampler = CircleSampler(curve.log_weight, self.r)

    def based(self, w0: complex, tol: float) -> Estimate:
        kernel = GreenKernel(self.r, w0)
        w0 = kernel.base_point
        weight = None if w0 == 0 else (lambda theta: poisson_weight(kernel, theta))
        mean = self.sampler.mean(2 * tol, weight)
        value = 0.5 * mean.value - 0.5 * _log_weight_at(self.curve, w0)
        error = 0.5 * mean.error + 8 * _EPS * (1 + abs(mean.value))
        if -error <= value < 0:
            value = 0.0
        return Estimate(value, error)

    def standard(self, tol: float) -> Estimate:
        return self.based(0j, tol)


def characteristic(curve: EntireCurve, r: float, tol: float | None = None) -> Estimate:
    """T(r) by the circle-integral form."""
    return CircleCharacteristic(curve, r).standard(tol or QUADRATURE["default_tol"])


def characteristic_based(curve: EntireCurve, w0: complex, r: float, tol: float | None = None) -> Estimate:
    """T_{w0}(r): circle integral against the Poisson measure of w0, minus the value at w0."""
    return CircleCharacteristic(curve, r).based(w0, tol or QUADRATURE["default_tol"])


def characteristic_double_integral(
    curve: EntireCurve, r: float, tol: float | None = None, w0: complex = 0j
) -> Estimate:
    """T_{w0}(r) as the integral of g_r(w0, z) against the pulled-back Fubini-Study form.

    A disk automorphism sending 0 to w0 turns the Green function into log(r/|zeta|),
    leaving a radial log-weighted integral of angular means of the transported density.
    """
    tol = tol or QUADRATURE["default_tol"]
    kernel = GreenKernel(r, w0)
    w0 = kernel.base_point
    a = w0 / r
    shrink = 1 - abs(a) ** 2

    def transported(zeta):
        den = 1 + np.conj(w0) * zeta / (r * r)
        jac = (shrink / np.abs(den) ** 2) ** 2
        return curve.density((zeta + w0) / den) * jac

    def angular_mean(s: float) -> float:
        return periodic_trapezoid(
            lambda theta: transported(s * np.exp(1j * theta)), tol / 10, min_nodes=32
        ).value

    est = radial_log_integral(angular_mean, r, tol)
    return Estimate(est.value, est.error + tol * r * r / 10)


@dataclass(frozen=True)
class CharacteristicProfile:
    """Tabulated T (or T_{w0}) with quadrature error estimates, sorted by radius."""

    curve: str
    base_point: complex
    samples: tuple[tuple[float, float, float], ...]

    @property
    def radii(self) -> list[float]:
        return [s[0] for s in self.samples]

    @property
    def values(self) -> list[float]:
        return [s[1] for s in self.samples]

    @property
    def monotone(self) -> bool:
        """Nondecreasing in r within twice the combined quadrature error."""
        pairs = zip(self.samples, self.samples[1:])
        return all(b[1] >= a[1] - 2 * (a[2] + b[2]) for a, b in pairs)

    def rows(self) -> list[dict]:
        return [
            {"curve": self.curve, "r": r, "w0_re": self.base_point.real, "w0_im": self.base_point.imag,
             "T": t, "err": e}
            for r, t, e in self.samples
        ]


def characteristic_profile(
    curve: EntireCurve, radii: Sequence[float], w0: complex = 0j, tol: float | None = None
) -> CharacteristicProfile:
    samples = []
    for r in sorted(float(x) for x in radii):
        est = characteristic_based(curve, w0, r, tol)
        samples.append((r, est.value, est.error))
    return CharacteristicProfile(curve.name, complex(w0), tuple(samples))


# ---------------------------------------------------------------------------
# Proximity and the First Main Theorem
# ---------------------------------------------------------------------------
def proximity(
    curve: EntireCurve, s: PolynomialSection, w0: complex, r: float, tol: float | None = None
) -> Estimate:
    """Poisson average of log ||s||(phi(r e^{i theta})) seen from w0."""
    tol = tol or QUADRATURE["default_tol"]
    kernel = GreenKernel(r, w0)
    pb = pullback(curve, s)
    sampler = CircleSampler(pb.log_norm, r)
    weight = None if kernel.base_point == 0 else (lambda theta: poisson_weight(kernel, theta))
    _, first = sampler.values(QUADRATURE["min_nodes"])
    if not np.all(np.isfinite(first)):
        raise PrecisionError(f"the pulled-back section vanishes on |z| = {r:g}; move the radius")
    return sampler.mean(tol, weight)


@dataclass(frozen=True)
class FmtReport:
    curve: str
    section: str
    r: float
    requested_r: float
    w0: complex
    proximity: float
    characteristic: float
    zero_sum: float
    base_value: float
    error_budget: float
    zeros: int
    nudges: int

    @property
    def residual(self) -> float:
        return (self.proximity + self.characteristic) - (self.zero_sum + self.base_value)

    @property
    def nudged(self) -> bool:
        return self.nudges > 0

    @property
    def passed(self) -> bool:
        return abs(self.residual) < 10 * self.error_budget

    def row(self) -> dict:
        return {
            "curve": self.curve, "section": self.section, "r": self.r,
            "w0_re": self.w0.real, "w0_im": self.w0.imag, "proximity": self.proximity,
            "characteristic": self.characteristic, "zero_sum": self.zero_sum,
            "base_value": self.base_value, "residual": self.residual,
            "error_budget": self.error_budget, "zeros": self.zeros,
            "nudged": self.nudged, "passed": self.passed,
        }


def verify_fmt(
    curve: EntireCurve, s: PolynomialSection, w0: complex, r: float, tol: float | None = None
) -> FmtReport:
    """Assemble proximity + d*T_{w0}(r) and sum v_z*g_r(w0, z) + log ||s||(w0)."""
    tol = tol or QUADRATURE["default_tol"]
    GreenKernel(r, w0)
    w0 = complex(w0)
    pb = pullback(curve, s)
    base = float(pb.log_norm(np.asarray([w0]))[0])
    if not np.isfinite(base):
        raise PreconditionError(
            f"the section {s.name} vanishes along {curve.name} at w0 = {w0}; choose another base point"
        )

    zc = count_zeros(pb.raw, r)
    radius = zc.radius
    kernel = GreenKernel(radius, w0)
    zero_sum = 0.0
    zero_error = 0.0
    for rec in zc:
        zero_sum += rec.multiplicity * green(kernel, rec.location)
        slope = 1 / abs(rec.location - w0) + abs(w0) / abs(radius**2 - rec.location * w0.conjugate())
        zero_error += rec.multiplicity * rec.enclosure_radius * slope

    prox = proximity(curve, s, w0, radius, tol)
    char = characteristic_based(curve, w0, radius, tol)
    characteristic_term = s.degree * char.value
    scale = 1 + abs(prox.value) + abs(characteristic_term) + abs(zero_sum) + abs(base)
    budget = prox.error + s.degree * char.error + zero_error + 64 * _EPS * scale
    report = FmtReport(
        curve=curve.name,
        section=s.name,
        r=radius,
        requested_r=float(r),
        w0=w0,
        proximity=prox.value,
        characteristic=characteristic_term,
        zero_sum=zero_sum,
        base_value=base,
        error_budget=budget,
        zeros=zc.total,
        nudges=zc.nudges,
    )
    logger.info("fmt %s/%s r=%g w0=%s residual=%.2e", curve.name, s.name, radius, w0, report.residual)
    return report


# ---------------------------------------------------------------------------
# Base-point comparison (affine)
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class BasepointReport:
    r: float
    epsilon: float
    A: float
    T_scaled: float
    base_points: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    errors: np.ndarray = field(repr=False)

    @property
    def bound(self) -> float:
        return self.A * (self.T_scaled + 1)

    @property
    def violations(self) -> int:
        return int(np.count_nonzero(self.values - 2 * self.errors > self.bound))

    @property
    def worst_ratio(self) -> float:
        return float(np.max(self.values) / self.bound) if self.values.size else 0.0

    @property
    def passed(self) -> bool:
        return self.violations == 0


def basepoint_constant(curve: EntireCurve, epsilon: float) -> float:
    """max(2/eps, (2/eps)*log(1 + sum |f_j(0)|^2))."""
    return max(2 / epsilon, (2 / epsilon) * _log_weight_at(curve, 0j))


def basepoint_bound_check(
    curve: EntireCurve, r: float, epsilon: float, grid_size: int = 50, tol: float | None = None
) -> BasepointReport:
    """Sweep T_w(r) over a polar grid of w and compare with A*(T((1+eps)r) + 1)."""
    if curve.kind != "affine":
        raise InputError("the base-point comparison sweep applies to affine curves")
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon!r}")
    tol = tol or QUADRATURE["default_tol"]
    circle = CircleCharacteristic(curve, r)
    points = polar_grid(r, grid_size)
    estimates = [circle.based(w, tol) for w in points]
    T_scaled = characteristic(curve, (1 + epsilon) * r, tol)
    report = BasepointReport(
        r=float(r),
        epsilon=float(epsilon),
        A=basepoint_constant(curve, epsilon),
        T_scaled=T_scaled.value,
        base_points=points,
        values=np.array([e.value for e in estimates]),
        errors=np.array([e.error for e in estimates]),
    )
    logger.info("basepoint sweep %s r=%g eps=%g worst ratio %.3f", curve.name, r, epsilon, report.worst_ratio)
    return report


# ---------------------------------------------------------------------------
# Projective exceptional set
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class ProjectiveBoundReport:
    r: float
    status: str
    T_r: float
    T_er: float
    radii_sum: float = 0.0
    samples: int = 0
    worst: float = 0.0
    violations: int = 0

    @property
    def radii_bound(self) -> float:
        return 5 / self.T_r if self.T_r > 0 else math.inf

    @property
    def bound(self) -> float:
        if self.T_r <= 1:
            return math.inf
        return (math.log(self.T_r) + math.log(self.r) + math.log(2)) * self.T_er

    @property
    def slack(self) -> float:
        return self.bound / self.worst if self.worst > 0 else math.inf

    @property
    def passed(self) -> bool:
        if self.status == "not_applicable":
            return True
        return self.radii_sum <= self.radii_bound and self.violations == 0


def fubini_study_atoms(curve: EntireCurve, r: float, cells: tuple[int, int] | None = None) -> AtomicMeasure:
    """Midpoint discretisation of log+(e*r/|z|) times the pulled-back form on polar cells of D(0, e*r)."""
    n_rad, n_ang = cells or CARTAN["polar_cells"]
    outer = math.e * r
    edges = outer * np.arange(n_rad + 1) / n_rad
    mid_r = (edges[:-1] + edges[1:]) / 2
    mid_t = 2 * np.pi * (np.arange(n_ang) + 0.5) / n_ang
    centers = (mid_r[:, None] * np.exp(1j * mid_t[None, :])).ravel()
    areas = np.repeat(np.pi * (edges[1:] ** 2 - edges[:-1] ** 2) / n_ang, n_ang)
    weight = np.maximum(np.log(outer / np.abs(centers)), 0.0)
    masses = curve.density(centers) * areas * weight
    return AtomicMeasure(centers, masses)


def projective_basepoint_bound(
    curve: EntireCurve,
    r: float,
    tol: float | None = None,
    samples: int | None = None,
    seed: int = 0,
) -> tuple[DiskSet, ProjectiveBoundReport]:
    """Exceptional disks E_r and the check of T_{w0}(r) <= (log T(r) + log r + log 2)*T(e*r) off E_r."""
    if curve.kind != "projective":
        raise InputError("the exceptional-set bound applies to projective curves")
    tol = tol or QUADRATURE["default_tol"]
    samples = samples or SAMPLING["exterior_base_points"]
    circle = CircleCharacteristic(curve, r)
    T_r = circle.standard(tol).value
    T_er = characteristic(curve, math.e * r, tol).value
    if T_r <= 1:
        logger.info("T(%g) = %.4f <= 1 for %s: exceptional-set bound not applicable", r, T_r, curve.name)
        return DiskSet((), "exceptional"), ProjectiveBoundReport(float(r), "not_applicable", T_r, T_er)

    mu = fubini_study_atoms(curve, r)
    disks = cartan_exceptional(mu, 1 / T_r)

    kept = np.empty(0, dtype=complex)
    attempt = 0
    while kept.size < samples and attempt < 8:
        pts = halton_disk(2 * samples, r, seed=seed + attempt)
        kept = np.concatenate([kept, pts[~disks.contains(pts)]])
        attempt += 1
    kept = kept[:samples]
    values = np.array([circle.based(w, tol).value for w in kept])
    report = ProjectiveBoundReport(
        r=float(r),
        status="pass",
        T_r=T_r,
        T_er=T_er,
        radii_sum=disks.radii_sum,
        samples=int(kept.size),
        worst=float(values.max()) if values.size else 0.0,
    )
    violations = int(np.count_nonzero(values > report.bound))
    if violations or report.radii_sum > report.radii_bound:
        report = replace(report, status="violation", violations=violations)
    return disks, report


# ---------------------------------------------------------------------------
# Zero-count bound
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class ZeroCountReport:
    d: int
    epsilon: float
    radii: tuple[float, ...]
    T_scaled: tuple[float, ...]
    degrees: tuple[tuple[int, ...], ...]

    @property
    def C2(self) -> int:
        """Largest zero count at the smallest radius."""
        return max(row[0] for row in self.degrees) if self.degrees else 0

    @property
    def C1(self) -> float:
        """Smallest slope with deg_r <= C1*T((1+eps)r) + C2 for every section and radius."""
        best = 0.0
        for row in self.degrees:
            for deg, t in zip(row, self.T_scaled):
                if t > 0:
                    best = max(best, (deg - self.C2) / t)
        return best

    @property
    def passed(self) -> bool:
        return all(
            deg <= self.C1 * t + self.C2 + 1e-9 for row in self.degrees for deg, t in zip(row, self.T_scaled)
        )


def zero_count_bound_check(
    curve: EntireCurve,
    d: int,
    epsilon: float,
    sections: Sequence[PolynomialSection],
    r_grid: Sequence[float],
    tol: float | None = None,
) -> ZeroCountReport:
    """Zero counts of phi*(s) on each radius and the fitted linear-in-T envelope."""
    if any(s.degree != d for s in sections):
        raise InputError(f"all sections must have degree {d}")
    radii = tuple(sorted(float(r) for r in r_grid))
    T_scaled = tuple(characteristic(curve, (1 + epsilon) * r, tol).value for r in radii)
    degrees = []
    for s in sections:
        pb = pullback(curve, s)
        degrees.append(tuple(count_zeros(pb.raw, r).total for r in radii))
    report = ZeroCountReport(d, float(epsilon), radii, T_scaled, tuple(degrees))
    logger.info("zero-count fit for %s: C1=%.4f C2=%d over %d sections", curve.name, report.C1, report.C2, len(sections))
    return report


def section_independence(reports: Sequence[ZeroCountReport]) -> float:
    """Largest relative deviation of the fitted C1 from the first report's value."""
    base = reports[0].C1
    if base == 0:
        return 0.0 if all(rep.C1 == 0 for rep in reports) else math.inf
    return max(abs(rep.C1 - base) / base for rep in reports)


# ---------------------------------------------------------------------------
# Growth and compact base-point surrogates
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class GrowthReport:
    rows: tuple[dict, ...]

    @property
    def passed(self) -> bool:
        return all(row["passed"] for row in self.rows)


def growth_estimate_check(
    curve: EntireCurve, r_grid: Sequence[float], tol: float | None = None, circle_points: int = 1 << 14
) -> GrowthReport:
    """log sup_{|z|<=r} |f| <= 3*T_f(2r) + slack for each affine coordinate f.

    T_f is the characteristic of [1 : f]; the sup is read on the circle (maximum
    principle) at ``circle_points`` samples.
    """
    if curve.kind == "projective" and not curve.components[0].is_constant_one:
        raise InputError("the growth estimate needs entire affine coordinates (f_0 = 1)")
    rows = []
    theta = 2 * np.pi * np.arange(circle_points) / circle_points
    for j, comp in enumerate(curve.affine_components, start=1):
        line = EntireCurve(f"[1:{comp.label}]", "projective", (ExpressionComponent("1"), comp), dimension=1)
        f0 = complex(np.asarray(comp(np.asarray([0j])))[0])
        slack = 3 * (0.5 * math.log(2) + 0.5 * math.log(1 + abs(f0) ** 2))
        for r in sorted(float(x) for x in r_grid):
            values = np.abs(comp(r * np.exp(1j * theta)))
            log_sup = float(np.log(values.max())) if values.max() > 0 else -math.inf
            bound = 3 * characteristic(line, 2 * r, tol).value + slack
            rows.append({"component": j, "r": r, "log_sup": log_sup, "bound": bound, "passed": log_sup <= bound})
    return GrowthReport(tuple(rows))


@dataclass(frozen=True)
class CompactBasepointReport:
    r0: float
    epsilon: float
    ratios: np.ndarray = field(repr=False)
    spread_limit: float = 10.0

    @property
    def interval(self) -> tuple[float, float]:
        return float(self.ratios.min()), float(self.ratios.max())

    @property
    def passed(self) -> bool:
        lo, hi = self.interval
        return bool(np.all(np.isfinite(self.ratios))) and lo > 0 and hi <= self.spread_limit * lo


def compact_basepoint_check(
    curve: EntireCurve,
    r0: float,
    epsilon: float,
    r_grid: Sequence[float],
    base_points: Sequence[complex] | None = None,
    tol: float | None = None,
    seed: int = 0,
) -> CompactBasepointReport:
    """Ratios T_{w0}(r) / T((1+eps)r) for w0 in D(0, r0) and grid radii r > r0.

    The comparison constants are non-effective; the ratios staying inside one
    interval of bounded spread is the checked surrogate.
    """
    radii = sorted(float(r) for r in r_grid if r > r0)
    if not radii:
        raise InputError(f"no grid radius exceeds r0 = {r0:g}")
    if base_points is None:
        base_points = halton_disk(16, r0, seed=seed)
    ratios = []
    for r in radii:
        circle = CircleCharacteristic(curve, r)
        scaled = characteristic(curve, (1 + epsilon) * r, tol).value
        for w in base_points:
            ratios.append(circle.based(w, tol or QUADRATURE["default_tol"]).value / scaled)
    return CompactBasepointReport(float(r0), float(epsilon), np.array(ratios))
