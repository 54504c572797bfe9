"""Disk kernels, pseudo-hyperbolic geometry, coverings, and Cartan exceptional sets."""

import heapq
import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from engine.errors import DomainError, InputError
from engine.sampling import cartesian_grid, halton_disk, polar_grid
from utils.constants import CARTAN, SAMPLING

logger = logging.getLogger(__name__)

DISK_LABELS = ("covering", "exceptional")


# ---------------------------------------------------------------------------
# Kernels
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class GreenKernel:
    """Green function of the disk of ``radius`` with pole at ``base_point``."""

    radius: float
    base_point: complex = 0j

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError(f"radius must be positive, got {self.radius!r}")
        object.__setattr__(self, "base_point", complex(self.base_point))
        if abs(self.base_point) >= self.radius:
            raise DomainError(
                f"base point {self.base_point} must lie inside the disk of radius {self.radius}"
            )


def green(kernel: GreenKernel, z: complex) -> float:
    """g_r(w0, z) = log|(r^2 - z*conj(w0)) / (r*(z - w0))|, +inf at z = w0."""
    z = complex(z)
    r, w0 = kernel.radius, kernel.base_point
    if abs(z) > r * (1 + 1e-14):
        raise DomainError(f"|z| = {abs(z):.6g} exceeds the kernel radius {r:g}")
    if z == w0:
        return math.inf
    value = math.log(abs(r * r - z * w0.conjugate())) - math.log(r) - math.log(abs(z - w0))
    # Nonnegative on the closed disk; rounding can leave -1e-16 on the circle.
    return max(value, 0.0)


def poisson_weight(kernel: GreenKernel, theta):
    """Density of the Poisson measure against d(theta)/2pi; accepts scalars or arrays."""
    r, w0 = kernel.radius, kernel.base_point
    z = r * np.exp(1j * np.asarray(theta, dtype=float))
    weight = (r * r - abs(w0) ** 2) / np.abs(z - w0) ** 2
    return float(weight) if np.ndim(weight) == 0 else weight


# ---------------------------------------------------------------------------
# Pseudo-hyperbolic distance
# ---------------------------------------------------------------------------
def _pseudo(r1: float, z, w):
    """Unchecked, broadcasting form of the pseudo-hyperbolic distance."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    return np.abs(r1 * (z - w) / (r1 * r1 - z * np.conj(w)))


def hyperbolic_distance(r1: float, z: complex, w: complex) -> float:
    """d_{r1}(z, w) = |r1*(z - w) / (r1^2 - z*conj(w))| on the open disk of radius r1."""
    if not r1 > 0:
        raise DomainError(f"radius must be positive, got {r1!r}")
    if abs(z) >= r1 or abs(w) >= r1:
        raise DomainError(f"points must lie in the open disk of radius {r1:g}")
    if z == w:
        return 0.0
    return float(_pseudo(r1, z, w))


def diam(r1: float, points: Sequence[complex]) -> float:
    """Largest pairwise pseudo-hyperbolic distance; 0 for fewer than two points."""
    pts = np.asarray(list(points), dtype=complex)
    if pts.size and np.max(np.abs(pts)) >= r1:
        raise DomainError(f"points must lie in the open disk of radius {r1:g}")
    if pts.size < 2:
        return 0.0
    return float(np.max(_pseudo(r1, pts[:, None], pts[None, :])))


# ---------------------------------------------------------------------------
# Disk sets
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float

    def contains(self, z):
        return np.abs(np.asarray(z) - self.center) <= self.radius


@dataclass(frozen=True)
class DiskSet:
    """A finite union of disks, labelled as a covering or an exceptional set."""

    disks: tuple[Disk, ...] = ()
    label: str = "covering"

    def __post_init__(self):
        if self.label not in DISK_LABELS:
            raise InputError(f"unknown disk-set label {self.label!r}")
        disks = tuple(self.disks)
        for d in disks:
            if not d.radius > 0:
                raise DomainError(f"disk radius must be positive, got {d.radius!r}")
        object.__setattr__(self, "disks", disks)

    def __len__(self) -> int:
        return len(self.disks)

    def __iter__(self):
        return iter(self.disks)

    @property
    def radii_sum(self) -> float:
        return math.fsum(d.radius for d in self.disks)

    @property
    def centers(self) -> np.ndarray:
        return np.array([d.center for d in self.disks], dtype=complex)

    @property
    def radii(self) -> np.ndarray:
        return np.array([d.radius for d in self.disks], dtype=float)

    def contains(self, z) -> np.ndarray:
        """Membership of each point of ``z`` in the union (closed disks)."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        if not self.disks:
            return np.zeros(z.shape, dtype=bool)
        out = np.zeros(z.shape, dtype=bool)
        for d in self.disks:
            out |= np.abs(z - d.center) <= d.radius
        return out

    def relabel(self, label: str) -> "DiskSet":
        return DiskSet(self.disks, label)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "disks": [
                {"re": d.center.real, "im": d.center.imag, "radius": d.radius}
                for d in self.disks
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DiskSet":
        try:
            disks = tuple(
                Disk(complex(item["re"], item["im"]), float(item["radius"]))
                for item in data["disks"]
            )
            return cls(disks, data["label"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed disk set: {exc}") from exc


def exceptional_overlap(disks: DiskSet, r: float) -> DiskSet:
    """Disks of ``disks`` that meet the open disk of radius r."""
    return DiskSet(tuple(d for d in disks if abs(d.center) - d.radius < r), disks.label)


# ---------------------------------------------------------------------------
# Coverings
# ---------------------------------------------------------------------------
def covering_bound(alpha: float, epsilon: float) -> int:
    """Largest admissible covering size ceil(5 / (alpha^2 * epsilon)) + 1."""
    return math.ceil(5.0 / (alpha * alpha * epsilon)) + 1


def max_ball_radius(alpha: float) -> float:
    """Pseudo-radius rho whose balls have diameter exactly alpha: 2rho/(1+rho^2) = alpha."""
    return (1.0 - math.sqrt(1.0 - alpha * alpha)) / alpha


def ball_to_disk(center: complex, rho: float, r1: float) -> Disk:
    """Euclidean disk equal to the pseudo-hyperbolic ball B_{r1}(center, rho)."""
    a = complex(center) / r1
    denom = 1.0 - rho * rho * abs(a) ** 2
    return Disk(r1 * a * (1.0 - rho * rho) / denom, r1 * rho * (1.0 - abs(a) ** 2) / denom)


def _ring_count(t: float, h: float, d_cover: float) -> int:
    """Fewest centres on the ring at hyperbolic radius t covering the band [t-h, t+h]."""
    count = 1
    for s in (t - h, t + h):
        c = (math.cosh(s) * math.cosh(t) - math.cosh(d_cover)) / (math.sinh(s) * math.sinh(t))
        if c <= -1.0:
            continue
        if c >= 1.0:
            raise DomainError("ring band too wide for the covering radius")
        count = max(count, math.ceil(math.pi / math.acos(c) * (1 + 1e-12)))
    return count


def _ring_centers(epsilon: float, rho_c: float) -> list[complex]:
    """Centres (in the unit disk) of a ring layout covering |a| <= 1/(1+epsilon)."""
    d_cover = 2.0 * math.atanh(rho_c)
    d_outer = 2.0 * math.atanh(1.0 / (1.0 + epsilon)) * (1 + 1e-9)
    inner = d_cover * (1 - 1e-9)
    centers = [0j]
    if inner >= d_outer:
        return centers
    rings = math.ceil((d_outer - inner) / (2 * 0.68 * d_cover))
    h = (d_outer - inner) / (2 * rings)
    for k in range(rings):
        t = inner + (2 * k + 1) * h
        m = _ring_count(t, h, d_cover)
        radius = math.tanh(t / 2)
        offset = 0.5 * (k % 2)
        centers.extend(radius * np.exp(2j * np.pi * (j + offset) / m) for j in range(m))
    return centers


def _greedy_centers(r: float, r1: float, alpha: float) -> list[complex]:
    """Maximal alpha/2-packing of candidate points in the closed disk, in scan order."""
    pitch = r / 100.0
    boundary = r * (1 - 1e-12) * np.exp(2j * np.pi * np.arange(800) / 800)
    candidates = np.concatenate([cartesian_grid(r, pitch), boundary])
    candidates = candidates[np.abs(candidates) < r1]
    centers = np.empty(0, dtype=complex)
    for z in candidates:
        if centers.size == 0 or np.min(_pseudo(r1, z, centers)) > alpha / 2:
            centers = np.append(centers, z)
    return [complex(c / r1) for c in centers]


def cover_disk(r: float, epsilon: float, alpha: float, method: str = "rings") -> DiskSet:
    """Cover the disk of radius r by pseudo-hyperbolic balls of (1+epsilon)r-diameter < alpha.

    ``method="rings"`` lays centres on hyperbolic rings whose counts are solved from
    the worst corner of each band; it stays within ``covering_bound`` for every
    (alpha, epsilon). ``method="greedy"`` is the maximal alpha/2-packing of a fine grid.
    """
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon!r}")
    if not r > 0:
        raise DomainError(f"radius must be positive, got {r!r}")
    r1 = (1 + epsilon) * r
    rho_c = max_ball_radius(alpha) * (1 - 1e-6)
    if method == "rings":
        unit_centers = _ring_centers(epsilon, rho_c)
    elif method == "greedy":
        unit_centers = _greedy_centers(r, r1, alpha)
    else:
        raise InputError(f"unknown covering method {method!r}")
    disks = tuple(ball_to_disk(a * r1, rho_c, r1) for a in unit_centers)
    logger.info("covering r=%g eps=%g alpha=%g: %d balls (%s)", r, epsilon, alpha, len(disks), method)
    return DiskSet(disks, "covering")


@dataclass(frozen=True)
class CoveringReport:
    size: int
    bound: int
    grid_points: int
    uncovered: int
    max_diameter: float
    alpha: float

    @property
    def passed(self) -> bool:
        return self.size <= self.bound and self.uncovered == 0 and self.max_diameter <= self.alpha


def verify_covering(
    cover: DiskSet, r: float, epsilon: float, alpha: float, grid: int = 200
) -> CoveringReport:
    """Grid membership and sampled boundary diameters of a covering."""
    r1 = (1 + epsilon) * r
    points = polar_grid(r, grid)
    uncovered = int(np.count_nonzero(~cover.contains(points)))
    angles = np.exp(2j * np.pi * np.arange(SAMPLING["boundary_points"]) / SAMPLING["boundary_points"])
    worst = 0.0
    for d in cover:
        boundary = d.center + d.radius * angles
        worst = max(worst, float(np.max(_pseudo(r1, boundary[:, None], boundary[None, :]))))
    return CoveringReport(
        size=len(cover),
        bound=covering_bound(alpha, epsilon),
        grid_points=points.size,
        uncovered=uncovered,
        max_diameter=worst,
        alpha=alpha,
    )


# ---------------------------------------------------------------------------
# Atomic measures and the Cartan potential
# ---------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class AtomicMeasure:
    """Finitely many point masses; ``total_mass`` is recomputed on access."""

    locations: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        loc = np.atleast_1d(np.asarray(self.locations, dtype=complex))
        mass = np.atleast_1d(np.asarray(self.masses, dtype=float))
        if loc.shape != mass.shape:
            raise InputError("locations and masses must have the same length")
        if not np.all(np.isfinite(mass)) or np.any(mass < 0):
            raise InputError("atom masses must be finite and nonnegative")
        object.__setattr__(self, "locations", loc)
        object.__setattr__(self, "masses", mass)

    @classmethod
    def from_atoms(cls, atoms: Iterable[tuple[complex, float]]) -> "AtomicMeasure":
        atoms = list(atoms)
        return cls(
            np.array([a[0] for a in atoms], dtype=complex),
            np.array([a[1] for a in atoms], dtype=float),
        )

    @property
    def total_mass(self) -> float:
        return math.fsum(self.masses)

    def __len__(self) -> int:
        return self.locations.size

    def scaled(self, factor: float) -> "AtomicMeasure":
        return AtomicMeasure(self.locations, self.masses * factor)

    def to_dict(self) -> dict:
        return {
            "atoms": [
                {"re": z.real, "im": z.imag, "mass": m}
                for z, m in zip(self.locations.tolist(), self.masses.tolist())
            ],
            "total_mass": self.total_mass,
        }


def cartan_potential(mu: AtomicMeasure, z):
    """V(z) = sum of mass * log|z - location|; -inf exactly at a charged atom."""
    z_arr = np.asarray(z, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.log(np.abs(z_arr[..., None] - mu.locations))
        terms = np.where(mu.masses > 0, mu.masses * logs, 0.0)
    value = terms.sum(axis=-1)
    return float(value) if value.ndim == 0 else value


def _circumcenter(a: complex, b: complex, c: complex) -> complex | None:
    d = 2 * (a.real * (b.imag - c.imag) + b.real * (c.imag - a.imag) + c.real * (a.imag - b.imag))
    if abs(d) < 1e-300:
        return None
    aa, bb, cc = abs(a) ** 2, abs(b) ** 2, abs(c) ** 2
    ux = (aa * (b.imag - c.imag) + bb * (c.imag - a.imag) + cc * (a.imag - b.imag)) / d
    uy = (aa * (c.real - b.real) + bb * (a.real - c.real) + cc * (b.real - a.real)) / d
    return complex(ux, uy)


def _candidate_centers(loc: np.ndarray, lam: float) -> np.ndarray:
    """Atoms, plus pair midpoints and triple circumcentres within reach when affordable.

    Every minimal enclosing circle of at most lam is centred at one of these, which
    makes the greedy choice of the largest rich disk exact.
    """
    if loc.size > CARTAN["full_center_limit"]:
        return loc.copy()
    reach = 2 * lam
    dist = np.abs(loc[:, None] - loc[None, :])
    near = [np.flatnonzero((dist[i] <= reach) & (np.arange(loc.size) > i)) for i in range(loc.size)]
    extra = []
    for i in range(loc.size):
        for j in near[i]:
            extra.append(0.5 * (loc[i] + loc[j]))
            for k in near[j]:
                if dist[i, k] > reach:
                    continue
                cc = _circumcenter(loc[i], loc[j], loc[k])
                if cc is not None and abs(cc - loc[i]) <= lam:
                    extra.append(cc)
    return np.concatenate([loc, np.asarray(extra, dtype=complex)])


def _rich_radius(center: complex, loc: np.ndarray, mass: np.ndarray, scale: float) -> float:
    """Largest rho with mass(D(center, rho)) >= rho / scale, or 0 without atoms."""
    if loc.size == 0:
        return 0.0
    d = np.abs(loc - center)
    order = np.argsort(d, kind="stable")
    radius = scale * np.cumsum(mass[order])
    ok = d[order] <= radius * (1 + 1e-12)
    return float(radius[ok].max()) if ok.any() else 0.0


def cartan_exceptional(mu: AtomicMeasure, H: float) -> DiskSet:
    """Exceptional disks outside of which V(z) > M*log(H), with radii sum at most 5H.

    Boutroux-Cartan selection for a continuous mass: repeatedly take the largest
    disk D(c, rho) whose uncovered mass is at least M*rho/lam (lam = 2.5H), remove
    its atoms, and return the doubled disks. The radii of the selected disks sum to
    at most lam, so the doubled radii sum to at most 5H.
    """
    if not 0 < H < 1:
        raise DomainError(f"Cartan threshold H must lie in (0, 1), got {H!r}")
    total = mu.total_mass
    if not total > 0:
        raise DomainError("the measure must have positive total mass")
    charged = mu.masses > 0
    loc, mass = mu.locations[charged], mu.masses[charged]
    lam = 2.5 * H * (1 - 1e-12)
    scale = lam / total
    centers = _candidate_centers(loc, lam)

    heap = []
    for start in range(0, centers.size, 2048):
        block = centers[start : start + 2048]
        d = np.abs(block[:, None] - loc[None, :])
        order = np.argsort(d, axis=1, kind="stable")
        d_sorted = np.take_along_axis(d, order, axis=1)
        radius = scale * np.cumsum(mass[order], axis=1)
        rich = np.where(d_sorted <= radius * (1 + 1e-12), radius, 0.0).max(axis=1)
        heap.extend((-float(rho), start + i) for i, rho in enumerate(rich))
    heapq.heapify(heap)

    remaining = np.ones(loc.size, dtype=bool)
    selected: list[Disk] = []
    while remaining.any() and heap:
        _, idx = heapq.heappop(heap)
        c = complex(centers[idx])
        rho = _rich_radius(c, loc[remaining], mass[remaining], scale)
        if rho <= 0:
            continue
        if heap and rho < -heap[0][0]:
            heapq.heappush(heap, (-rho, idx))
            continue
        inside = remaining & (np.abs(loc - c) <= rho * (1 + 1e-12))
        remaining &= ~inside
        selected.append(Disk(c, 2 * rho))
    logger.debug("cartan: %d atoms, %d candidates, %d disks", loc.size, centers.size, len(selected))
    return DiskSet(tuple(selected), "exceptional")


@dataclass(frozen=True)
class CartanReport:
    H: float
    total_mass: float
    radii_sum: float
    samples: int
    violations: int
    min_margin: float

    @property
    def passed(self) -> bool:
        return self.radii_sum <= 5 * self.H and self.violations == 0


def verify_cartan(
    mu: AtomicMeasure,
    H: float,
    disks: DiskSet,
    samples: int | None = None,
    seed: int = 0,
) -> CartanReport:
    """Check V(z) > M*log(H) at low-discrepancy points outside ``disks``."""
    samples = samples or SAMPLING["cartan_samples"]
    loc = mu.locations[mu.masses > 0]
    box_center = complex(
        (loc.real.min() + loc.real.max()) / 2, (loc.imag.min() + loc.imag.max()) / 2
    )
    radius = max(float(np.max(np.abs(loc - box_center))), 5 * H)
    kept = np.empty(0, dtype=complex)
    batch, attempt = samples, 0
    while kept.size < samples and attempt < 8:
        pts = halton_disk(batch, radius, box_center, seed=seed + attempt)
        kept = np.concatenate([kept, pts[~disks.contains(pts)]])
        attempt += 1
    kept = kept[:samples]
    threshold = mu.total_mass * math.log(H)
    margins = cartan_potential(mu, kept) - threshold if kept.size else np.array([math.inf])
    return CartanReport(
        H=H,
        total_mass=mu.total_mass,
        radii_sum=disks.radii_sum,
        samples=int(kept.size),
        violations=int(np.count_nonzero(np.atleast_1d(margins) <= 0)),
        min_margin=float(np.min(margins)),
    )


def random_measure(n_atoms: int, max_mass: float = 2.0, seed: int = 0, spread: float = 1.0) -> AtomicMeasure:
    """Reproducible random atoms in the disk of radius ``spread`` with total mass <= max_mass."""
    rng = np.random.default_rng(seed)
    loc = spread * np.sqrt(rng.random(n_atoms)) * np.exp(2j * np.pi * rng.random(n_atoms))
    weights = rng.random(n_atoms)
    total = max_mass * rng.uniform(0.25, 1.0)
    return AtomicMeasure(loc, total * weights / weights.sum())
