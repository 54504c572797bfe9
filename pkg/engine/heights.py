"""Rational points, Fubini-Study and max heights, Liouville checks, and S(r, H) enumeration."""

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd

import mpmath
import numpy as np

from engine.disk_geometry import DiskSet
from engine.entire_curves import EntireCurve, node_key
from engine.errors import CapabilityError, InputError
from engine.sections import PolynomialSection
from utils.constants import HEIGHT_TOL

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Points and heights
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class RationalPoint:
    """Primitive integer homogeneous coordinates (x_0, ..., x_N)."""

    coords: tuple[int, ...]

    def __post_init__(self):
        coords = tuple(int(c) for c in self.coords)
        if not any(coords):
            raise InputError("the zero vector is not a projective point")
        if reduce(gcd, coords) != 1:
            raise InputError(f"coordinates {coords} are not primitive")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def from_projective(cls, values: Sequence) -> "RationalPoint":
        """Clear denominators, divide by the gcd, and make the first nonzero entry positive."""
        fracs = [Fraction(v) for v in values]
        den = reduce(math.lcm, (f.denominator for f in fracs), 1)
        ints = [int(f * den) for f in fracs]
        g = reduce(gcd, ints)
        if g == 0:
            raise InputError("the zero vector is not a projective point")
        ints = [i // g for i in ints]
        lead = next(i for i in ints if i)
        if lead < 0:
            ints = [-i for i in ints]
        return cls(tuple(ints))

    @classmethod
    def from_affine(cls, values: Sequence) -> "RationalPoint":
        """The point (1 : x_1 : ... : x_N) as (b, a_1, ..., a_N) with b > 0."""
        return cls.from_projective([Fraction(1), *values])

    @property
    def n_vars(self) -> int:
        return len(self.coords)

    def affine(self) -> tuple[Fraction, ...]:
        b = self.coords[0]
        if b == 0:
            raise InputError(f"{self} lies at infinity")
        return tuple(Fraction(a, b) for a in self.coords[1:])

    def __str__(self) -> str:
        return "[" + ":".join(str(c) for c in self.coords) + "]"


def height(point: RationalPoint) -> tuple[float, float]:
    """(h_fs, h_max): logs of the Euclidean and max norms of the primitive vector."""
    with mpmath.workdps(40):
        sumsq = sum(c * c for c in point.coords)
        h_fs = float(mpmath.log(mpmath.mpf(sumsq)) / 2)
        h_max = float(mpmath.log(mpmath.mpf(max(abs(c) for c in point.coords))))
    return h_fs, h_max


def coordinate_heights(point: RationalPoint) -> list[float]:
    """Height log max(|a|, b) of each affine coordinate a/b in lowest terms."""
    return [math.log(max(abs(q.numerator), q.denominator)) for q in point.affine()]


@dataclass(frozen=True)
class HeightedPoint:
    point: RationalPoint
    preimage: Fraction | None
    h_fs: float
    h_max: float

    @classmethod
    def of(cls, point: RationalPoint, preimage: Fraction | None = None) -> "HeightedPoint":
        h_fs, h_max = height(point)
        return cls(point, preimage, h_fs, h_max)

    def row(self) -> dict:
        w = self.preimage if self.preimage is not None else Fraction(0)
        return {
            "w_num": w.numerator,
            "w_den": w.denominator,
            "coords": " ".join(str(c) for c in self.point.coords),
            "h_fs": self.h_fs,
            "h_max": self.h_max,
        }


# ---------------------------------------------------------------------------
# Liouville inequality
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class LiouvilleReport:
    status: str
    log_norm: float
    bound: float

    @property
    def margin(self) -> float:
        return self.log_norm - self.bound

    @property
    def passed(self) -> bool:
        return self.status == "vacuous" or self.margin >= -HEIGHT_TOL


def liouville_check(
    s: PolynomialSection,
    p: RationalPoint,
    sup: float | None = None,
    samples: int | None = None,
    seed: int = 0,
) -> LiouvilleReport:
    """log ||s||(p) >= -(d*h_fs(p) + log+ ||s||_sup).

    ``sup`` defaults to the sampled maximum of ||s||, a lower bound for the true sup,
    so the check is at least as strict as the inequality itself.
    """
    if not s.is_integral:
        raise InputError("the Liouville check needs integer coefficients")
    if s.n_vars != p.n_vars:
        raise InputError(f"section has {s.n_vars} variables, point has {p.n_vars}")
    value = s.exact(p.coords)
    h_fs, _ = height(p)
    sup = s.sampled_sup(samples, seed) if sup is None else sup
    bound = -(s.degree * h_fs + max(0.0, math.log(sup)))
    if value == 0:
        return LiouvilleReport("vacuous", -math.inf, bound)
    with mpmath.workdps(40):
        log_value = float(mpmath.log(abs(value.numerator)) - mpmath.log(value.denominator))
    report = LiouvilleReport("pass", log_value - s.degree * h_fs, bound)
    if not report.passed:
        report = LiouvilleReport("violation", report.log_norm, bound)
    return report


def random_points(n_vars: int, count: int, seed: int = 0, bound: int = 20) -> list[RationalPoint]:
    """Primitive points with coordinates in [-bound, bound]."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        raw = rng.integers(-bound, bound + 1, size=n_vars).tolist()
        if any(raw):
            out.append(RationalPoint.from_projective(raw))
    return out


# ---------------------------------------------------------------------------
# S(r, H)
# ---------------------------------------------------------------------------
def _rationals_with_denominator(b: int, r: float, bound: int) -> list[Fraction]:
    top = min(bound, math.ceil(r * b))
    return [Fraction(a, b) for a in range(-top, top + 1) if gcd(a, b) == 1 and abs(a) < r * b]


def _scan_denominator(curve: EntireCurve, b: int, r: float, H: float, bound: int) -> list[HeightedPoint]:
    found = []
    for q in _rationals_with_denominator(b, r, bound):
        values = curve.rational_value(q, bound=bound)
        if values is None:
            continue
        hp = HeightedPoint.of(RationalPoint.from_affine(values), q)
        if hp.h_fs <= H + HEIGHT_TOL:
            found.append(hp)
    return found


def scan_points(curve: EntireCurve, r: float, H: float, jobs: int = 1) -> list[HeightedPoint]:
    """All q in Q with |q| < r and h_fs(phi(q)) <= H, before any exceptional-set exclusion.

    Every coordinate's height is at most the point's, and z itself is a coordinate, so
    scanning q of height <= exp(H) is complete.
    """
    if not curve.has_locus:
        raise CapabilityError(f"curve {curve.name} exposes no rational locus")
    if H < 0:
        return []
    bound = math.floor(math.exp(H) * (1 + 1e-12))
    denominators = range(1, bound + 1)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            batches = list(pool.map(lambda b: _scan_denominator(curve, b, r, H, bound), denominators))
    else:
        batches = [_scan_denominator(curve, b, r, H, bound) for b in denominators]
    points = [hp for batch in batches for hp in batch]
    points.sort(key=lambda hp: node_key(hp.preimage))
    logger.debug("scan %s r=%g H=%g: %d points from height budget %d", curve.name, r, H, len(points), bound)
    return points


def split_exceptional(
    points: Sequence[HeightedPoint], disks: DiskSet | None
) -> tuple[list[HeightedPoint], list[HeightedPoint]]:
    """(kept, excluded) according to whether the preimage lies in ``disks``."""
    if disks is None or not len(disks):
        return list(points), []
    inside = disks.contains(np.array([float(hp.preimage) for hp in points], dtype=complex))
    kept = [hp for hp, hit in zip(points, inside) if not hit]
    excluded = [hp for hp, hit in zip(points, inside) if hit]
    return kept, excluded


def enumerate_points(
    curve: EntireCurve, r: float, H: float, disks: DiskSet | None = None, jobs: int = 1
) -> list[HeightedPoint]:
    """S(r, H): points of the rational locus in D(0, r) minus ``disks`` with h_fs <= H."""
    kept, _ = split_exceptional(scan_points(curve, r, H, jobs), disks)
    return kept
