"""Counting experiments: C(r, H) tables, envelopes, small-diameter vanishing, and windows."""

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from engine.disk_geometry import _pseudo, cover_disk, covering_bound
from engine.entire_curves import EntireCurve
from engine.errors import DomainError, InputError, PreconditionError
from engine.heights import HeightedPoint, RationalPoint, enumerate_points, scan_points, split_exceptional
from engine.nevanlinna import characteristic, projective_basepoint_bound
from engine.siegel import AuxPolynomial, build_aux_polynomial
from utils.constants import QUADRATURE

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Thresholds
# ---------------------------------------------------------------------------
def default_d0(n: int, epsilon: float) -> int:
    """Smallest d >= 1 with d^(n-1) * epsilon > 1."""
    if n < 2 and epsilon <= 1:
        raise DomainError("for n = 1 no degree makes d^(n-1)*epsilon exceed 1 unless epsilon > 1")
    d = 1
    while d ** (n - 1) * epsilon <= 1:
        d += 1
    return d


def diameter_threshold(T_scaled: float, H: float, d: int, n: int) -> float:
    """exp(-(T((1+eps)r) + H) / d^(n-1)); increases toward 1 as d grows."""
    return math.exp(-(T_scaled + H) / d ** (n - 1))


def projective_diameter_threshold(T_r: float, T_er: float, H: float, d: int, n: int) -> float:
    """exp(-(log T(r) * T(e r) + H) / d^(n-1)), the projective analogue of the affine threshold."""
    return math.exp(-(math.log(T_r) * T_er + H) / d ** (n - 1))


# ---------------------------------------------------------------------------
# Count tables
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class CountRecord:
    r: float
    H: float
    T_r: float
    T_scaled: float
    T_envelope: float
    count: int
    excluded_count: int
    epsilon: float

    @property
    def envelope(self) -> float:
        """T((2+eps)r) * exp(eps*(H + T((1+eps)r)))."""
        return self.T_envelope * math.exp(self.epsilon * (self.H + self.T_scaled))

    @property
    def kappa(self) -> float:
        return self.count / self.envelope if self.envelope > 0 else math.nan

    def row(self) -> dict:
        return {
            "r": self.r, "H": self.H, "T_r": self.T_r, "T_scaled": self.T_scaled,
            "T_envelope": self.T_envelope, "C": self.count, "excluded": self.excluded_count,
            "kappa": self.kappa,
        }


def counts_monotone(records: Sequence[CountRecord]) -> bool:
    """C is nondecreasing along both table axes."""
    cells = {(rec.r, rec.H): rec.count for rec in records}
    radii = sorted({rec.r for rec in records})
    heights = sorted({rec.H for rec in records})
    for i, r in enumerate(radii):
        for j, H in enumerate(heights):
            c = cells.get((r, H))
            if c is None:
                continue
            if i and cells.get((radii[i - 1], H), 0) > c:
                return False
            if j and cells.get((r, heights[j - 1]), 0) > c:
                return False
    return True


def count_table(
    curve: EntireCurve,
    r_grid: Sequence[float],
    H_grid: Sequence[float],
    epsilon: float,
    tol: float | None = None,
    jobs: int = 1,
) -> list[CountRecord]:
    """Exact C(r, H) on the grid, sorted by (r, H).

    One scan at the largest (r, H) is filtered per cell. Projective curves get E_r
    from the exceptional-set construction whenever T(r) > 1.
    """
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon!r}")
    radii = sorted({float(r) for r in r_grid})
    heights = sorted({float(h) for h in H_grid})
    if not radii or not heights:
        raise InputError("count_table needs non-empty r and H grids")
    tol = tol or QUADRATURE["default_tol"]

    def profile(r):
        T_r = characteristic(curve, r, tol).value
        T_scaled = characteristic(curve, (1 + epsilon) * r, tol).value
        T_env = characteristic(curve, (2 + epsilon) * r, tol).value
        disks = None
        if curve.kind == "projective" and T_r > 1:
            disks, _ = projective_basepoint_bound(curve, r, tol)
        return T_r, T_scaled, T_env, disks

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        profiles = list(pool.map(profile, radii))
    pool_points = scan_points(curve, radii[-1], heights[-1], jobs)

    records = []
    for r, (T_r, T_scaled, T_env, disks) in zip(radii, profiles):
        in_disk = [hp for hp in pool_points if abs(hp.preimage) < r]
        for H in heights:
            cell = [hp for hp in in_disk if hp.h_fs <= H + 1e-12] if H >= 0 else []
            kept, excluded = split_exceptional(cell, disks)
            records.append(CountRecord(r, H, T_r, T_scaled, T_env, len(kept), len(excluded), float(epsilon)))
    logger.info("count table for %s: %d cells, %d scanned points", curve.name, len(records), len(pool_points))
    return records


def brute_force_counts(
    curve: EntireCurve, r_grid: Sequence[float], H_grid: Sequence[float]
) -> dict[tuple[float, float], int]:
    """C(r, H) by exact evaluation at every rational of height <= exp(max H), with no filter.

    Affine curves only: E_r is empty there, so these are comparable with count_table.
    """
    if curve.kind != "affine":
        raise InputError("the brute-force oracle applies to affine curves")
    radii = sorted({float(r) for r in r_grid})
    heights = sorted({float(h) for h in H_grid})
    bound = math.floor(math.exp(heights[-1]) * (1 + 1e-12))
    found = []
    for b in range(1, bound + 1):
        for a in range(-bound, bound + 1):
            if math.gcd(a, b) != 1 or abs(a) >= radii[-1] * b:
                continue
            q = Fraction(a, b)
            hp = HeightedPoint.of(RationalPoint.from_affine(curve.rational_value(q)), q)
            found.append((abs(q), hp.h_fs))
    return {
        (r, H): sum(1 for w, h in found if w < r and h <= H + 1e-12)
        for r in radii
        for H in heights
    }


@dataclass(frozen=True)
class EnvelopeReport:
    epsilon: float
    kappas: tuple[float, ...]
    diagonal_decreasing: bool

    @property
    def positive(self) -> list[float]:
        return [k for k in self.kappas if k > 0 and math.isfinite(k)]

    @property
    def kappa_max(self) -> float:
        return max(self.positive, default=0.0)

    @property
    def kappa_median(self) -> float:
        return float(np.median(self.positive)) if self.positive else 0.0

    @property
    def ratio_ok(self) -> bool:
        return self.kappa_max <= 10 * self.kappa_median

    @property
    def passed(self) -> bool:
        return self.ratio_ok


def bp_envelope_check(records: Sequence[CountRecord], epsilon: float | None = None) -> EnvelopeReport:
    """Implied constants kappa = C / envelope per record, with the no-blow-up checks."""
    eps = records[0].epsilon if epsilon is None else epsilon
    recs = [rec if rec.epsilon == eps else replace(rec, epsilon=eps) for rec in records]
    kappas = tuple(rec.kappa for rec in recs)
    radii = sorted({rec.r for rec in recs})
    heights = sorted({rec.H for rec in recs})
    cells = {(rec.r, rec.H): rec.kappa for rec in recs}
    diagonal = [cells.get((r, h)) for r, h in zip(radii[::-1], heights[::-1])]
    diagonal = [k for k in diagonal if k is not None and k > 0][::-1]
    decreasing = all(b <= a for a, b in zip(diagonal, diagonal[1:]))
    return EnvelopeReport(float(eps), kappas, decreasing)


def envelope_rows(records: Sequence[CountRecord]) -> list[dict]:
    """Long-format plot data: one row per (r, H, series)."""
    rows = []
    for rec in records:
        for series, value in (("count", rec.count), ("envelope", rec.envelope), ("kappa", rec.kappa)):
            rows.append({"r": rec.r, "H": rec.H, "series": series, "value": value})
    return rows


# ---------------------------------------------------------------------------
# Small-diameter vanishing
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class SmallDiamReport:
    status: str
    delta: float
    witness: tuple[HeightedPoint, ...] = ()
    interpolated: int = 0
    held_out_values: tuple = ()
    aux: AuxPolynomial | None = field(default=None, repr=False)
    pair: tuple = ()
    pair_distance: float = math.nan
    size_window: tuple[int, int] = (0, 0)

    @property
    def held_out(self) -> int:
        return len(self.held_out_values)

    @property
    def passed(self) -> bool:
        return self.status in ("pass", "vacuous")


def subset_size_window(h0: int, alpha: float) -> tuple[int, int]:
    """Integer sizes in [(1 - 2 alpha) h0, (1 - alpha) h0] for the interpolated subset."""
    if not 0 < alpha < 0.5:
        raise DomainError(f"alpha must lie in (0, 1/2), got {alpha!r}")
    return max(1, math.ceil((1 - 2 * alpha) * h0 - 1e-9)), math.floor((1 - alpha) * h0)


def closest_pair(points: Sequence[HeightedPoint], r1: float) -> tuple[int, int, float]:
    """Indices and d_{r1}-distance of the two hyperbolically closest preimages."""
    if len(points) < 2:
        raise InputError("a closest pair needs at least two points")
    dist = _distances(points, r1)
    np.fill_diagonal(dist, np.inf)
    i, j = np.unravel_index(int(np.argmin(dist)), dist.shape)
    return int(min(i, j)), int(max(i, j)), float(dist[i, j])


def _distances(points: Sequence[HeightedPoint], r1: float) -> np.ndarray:
    z = np.array([float(hp.preimage) for hp in points], dtype=complex)
    return _pseudo(r1, z[:, None], z[None, :])


def _region_around(dist: np.ndarray, i: int, j: int, delta: float) -> list[int]:
    """Greedy set of pairwise d_{r1} <= delta grown from the pair (i, j), nearest first."""
    members = [i, j]
    reach = np.maximum(dist[i], dist[j])
    for k in np.argsort(reach, kind="stable"):
        k = int(k)
        if k not in (i, j) and all(dist[k, m] <= delta for m in members):
            members.append(k)
    return members


def small_diam_vanishing_test(
    curve: EntireCurve,
    r: float,
    H: float,
    d: int,
    epsilon: float,
    alpha: float | None = None,
    d0: int | None = None,
    tol: float | None = None,
    sup_samples: int | None = None,
    pair: tuple[Fraction, Fraction] | None = None,
) -> SmallDiamReport:
    """Build an auxiliary polynomial on part of a small-diameter witness set and check the rest.

    The witness region grows from two hyperbolically close preimages (``pair``, or the
    closest pair of S(r, H)); the second of them is always held out.
    """
    if curve.kind != "affine":
        raise InputError("the small-diameter vanishing test applies to affine curves")
    n = curve.dimension
    d0 = default_d0(n, epsilon) if d0 is None else d0
    if d < d0:
        raise PreconditionError(f"degree {d} is below d0 = {d0}; raise d")
    alpha = 0.25 if alpha is None else alpha
    h0 = math.comb(curve.ambient_dim + d, d)
    lo, hi = subset_size_window(h0, alpha)
    r1 = (1 + epsilon) * r
    T_scaled = characteristic(curve, r1, tol).value
    delta = diameter_threshold(T_scaled, H, d, n)
    points = enumerate_points(curve, r, H)
    if len(points) < 2:
        logger.warning("small-diameter test vacuous: |S(r, H)| = %d at r=%g H=%g", len(points), r, H)
        return SmallDiamReport("vacuous", delta, tuple(points), size_window=(lo, hi))

    dist = _distances(points, r1)
    if pair is None:
        i, j, gap = closest_pair(points, r1)
    else:
        index = {hp.preimage: k for k, hp in enumerate(points)}
        missing = [Fraction(w) for w in pair if Fraction(w) not in index]
        if missing:
            raise PreconditionError(f"preimage(s) {', '.join(map(str, missing))} are not points of S(r, H)")
        i, j = index[Fraction(pair[0])], index[Fraction(pair[1])]
        gap = float(dist[i, j])
    chosen = (points[i].preimage, points[j].preimage)
    if gap > delta:
        logger.warning("small-diameter test vacuous: closest pair %s at %.3e > %.3e", chosen, gap, delta)
        return SmallDiamReport("vacuous", delta, (points[i], points[j]), pair=chosen, pair_distance=gap,
                               size_window=(lo, hi))

    region = _region_around(dist, i, j, delta)
    size = min(hi, len(region) - 1)
    if size < lo:
        logger.warning("small-diameter test vacuous: |W|=%d leaves no subset size in [%d, %d]", len(region), lo, hi)
        return SmallDiamReport("vacuous", delta, tuple(points[k] for k in sorted(region)), pair=chosen,
                               pair_distance=gap, size_window=(lo, hi))
    others = [k for k in region if k != j]
    interpolated = [points[k] for k in sorted(others[:size])]
    held = [points[k] for k in sorted(others[size:] + [j])]
    aux = build_aux_polynomial(interpolated, d, alpha, sup_samples=sup_samples)
    values = tuple(aux.section.exact(hp.point.coords) for hp in held)
    status = "pass" if all(v == 0 for v in values) else "violation"
    logger.info("small-diameter test %s: pair %s at %.3e, |W|=%d, %d interpolated, %d held out",
                status, chosen, gap, len(region), size, len(held))
    return SmallDiamReport(status, delta, tuple(points[k] for k in sorted(region)), size, values, aux,
                           chosen, gap, (lo, hi))


@dataclass(frozen=True)
class CoverCountReport:
    alpha: float
    size: int
    bound: int
    counts: tuple[int, ...]

    @property
    def max_per_ball(self) -> int:
        return max(self.counts, default=0)

    @property
    def total(self) -> int:
        return sum(self.counts)


def cover_counts(
    curve: EntireCurve, r: float, H: float, d: int, epsilon: float, tol: float | None = None, max_balls: int = 100_000
) -> CoverCountReport:
    """Points of S(r, H) per ball of a covering at the small-diameter threshold."""
    T_scaled = characteristic(curve, (1 + epsilon) * r, tol).value
    alpha = diameter_threshold(T_scaled, H, d, curve.dimension)
    if covering_bound(alpha, epsilon) > max_balls:
        raise PreconditionError(f"a covering at diameter {alpha:.2e} would need over {max_balls} balls")
    cover = cover_disk(r, epsilon, alpha)
    counts = [0] * len(cover)
    for hp in enumerate_points(curve, r, H):
        for i, disk in enumerate(cover):
            if disk.contains(complex(hp.preimage)):
                counts[i] += 1
                break
    return CoverCountReport(alpha, len(cover), covering_bound(alpha, epsilon), tuple(counts))


# ---------------------------------------------------------------------------
# Polynomial windows
# ---------------------------------------------------------------------------
def subgeometric_chains(norms: Sequence[float], A: float) -> list[list[float]]:
    """Maximal runs of the sorted positive norms with consecutive ratios <= A + 1."""
    values = sorted(v for v in norms if v > 0)
    chains: list[list[float]] = []
    for v in values:
        if chains and v <= (A + 1) * chains[-1][-1]:
            chains[-1].append(v)
        else:
            chains.append([v])
    return [c for c in chains if len(c) >= 2]


def chain_spans(chain: Sequence[float], lo: float, hi: float, A: float) -> bool:
    """A chain spans [lo, hi] when it starts within a factor A + 1 of lo and reaches hi/(A + 1)."""
    return min(chain) <= (A + 1) * lo and max(chain) >= hi / (A + 1)


@dataclass(frozen=True)
class WindowReport:
    gamma: float
    epsilon: float
    A: float
    n: int
    points: tuple[tuple[float, float], ...]
    counts: tuple[int, ...]
    members: tuple[bool, ...]
    chains: tuple[tuple[float, ...], ...]
    spanning: tuple[bool, ...]
    largest_disk: float

    @property
    def headline(self) -> bool:
        """gamma lies in the range n/(n-1) < gamma of the polynomial-window statement."""
        return self.n > 1 and self.gamma > self.n / (self.n - 1)

    @property
    def passed(self) -> bool:
        return not any(self.spanning)

    def rows(self) -> list[dict]:
        return [
            {"x": x, "y": y, "norm": x + y, "C": c, "member": m}
            for (x, y), c, m in zip(self.points, self.counts, self.members)
        ]


def is_member(record: CountRecord, epsilon: float, gamma: float) -> bool:
    return record.count <= epsilon * max(0.0, record.T_scaled + record.H) ** gamma


def window_scan(
    curve: EntireCurve | None, gamma: float, epsilon: float, A: float, table: Sequence[CountRecord]
) -> WindowReport:
    """Membership in the polynomial window and subgeometric chains in its complement.

    Points live in the (T(r), H) plane with the norm x + y.
    """
    n = curve.dimension if curve is not None else 2
    if n > 1 and gamma <= n / (n - 1):
        logger.warning("gamma=%g is outside the headline range gamma > %g", gamma, n / (n - 1))
    points = tuple((rec.T_r, rec.H) for rec in table)
    members = tuple(is_member(rec, epsilon, gamma) for rec in table)
    norms = [x + y for x, y in points]
    complement = [v for v, m in zip(norms, members) if not m]
    positive = [v for v in norms if v > 0]
    lo, hi = (min(positive), max(positive)) if positive else (0.0, 0.0)
    chains = subgeometric_chains(complement, A)
    spanning = tuple(chain_spans(c, lo, hi, A) for c in chains)

    outside = [p for p, m in zip(points, members) if not m]
    if not outside:
        xs, ys = [p[0] for p in points], [p[1] for p in points]
        largest = (max(xs) - min(xs)) + (max(ys) - min(ys)) if points else 0.0
    else:
        largest = max(
            (min(abs(x - u) + abs(y - v) for u, v in outside) for (x, y), m in zip(points, members) if m),
            default=0.0,
        )
    return WindowReport(
        gamma=float(gamma),
        epsilon=float(epsilon),
        A=float(A),
        n=n,
        points=points,
        counts=tuple(rec.count for rec in table),
        members=members,
        chains=tuple(tuple(c) for c in chains),
        spanning=spanning,
        largest_disk=float(largest),
    )
