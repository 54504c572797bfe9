"""Zero localisation for entire functions by argument tracking.

Winding numbers come from summed argument increments along a sampled contour;
segments are refined until every increment is below pi/2. Zeros are isolated by
quadrisection of boxes whose boundary winding is positive.
"""

import logging
import math
from collections.abc import Callable, Iterator
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from engine.errors import DomainError, ResolutionError
from utils.constants import ZEROS

logger = logging.getLogger(__name__)

# Split fractions tried in turn when a zero sits on a proposed box edge.
_SPLITS = (0.5137, 0.4791, 0.5311)
_CONTACT = 1e-14
_REFINE = 16


class ContourHit(Exception):
    """The function (numerically) vanishes on the contour being tracked."""

    def __init__(self, point: complex):
        super().__init__(f"zero on contour near {point}")
        self.point = point


@dataclass(frozen=True)
class ZeroRecord:
    location: complex
    multiplicity: int
    enclosure_radius: float

    def to_dict(self) -> dict:
        return {
            "re": self.location.real,
            "im": self.location.imag,
            "multiplicity": self.multiplicity,
            "enclosure_radius": self.enclosure_radius,
        }


@dataclass(frozen=True)
class ZeroCount:
    """Zeros of g in the open disk of ``radius`` (the requested radius after nudges)."""

    zeros: tuple[ZeroRecord, ...]
    radius: float
    requested_radius: float
    nudges: int
    winding: int

    def __iter__(self) -> Iterator[ZeroRecord]:
        return iter(self.zeros)

    def __len__(self) -> int:
        return len(self.zeros)

    def __getitem__(self, i):
        return self.zeros[i]

    @property
    def total(self) -> int:
        return sum(z.multiplicity for z in self.zeros)

    @property
    def nudged(self) -> bool:
        return self.nudges > 0


# ---------------------------------------------------------------------------
# Contours
# ---------------------------------------------------------------------------
def circle_contour(radius: float, center: complex = 0j) -> Callable[[np.ndarray], np.ndarray]:
    return lambda t: center + radius * np.exp(2j * np.pi * t)


def box_contour(x0: float, x1: float, y0: float, y1: float) -> Callable[[np.ndarray], np.ndarray]:
    """Counter-clockwise boundary of a rectangle, one side per quarter of [0, 1)."""
    corners = np.array([complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1), complex(x0, y0)])

    def path(t):
        side = np.minimum((4 * t).astype(int), 3)
        frac = 4 * t - side
        return corners[side] + frac * (corners[side + 1] - corners[side])

    return path


def winding_number(g: Callable[[np.ndarray], np.ndarray], contour: Callable[[np.ndarray], np.ndarray]) -> int:
    """Winding number of g around 0 along a closed contour parametrised on [0, 1].

    Segments whose argument increment is >= pi/2 are subdivided locally, so a zero
    close to the contour costs a few extra levels rather than a global doubling.
    Raises ContourHit when g is numerically zero on the contour and ResolutionError
    when the sample budget runs out.
    """
    n = ZEROS["min_points"]
    t = np.arange(n + 1) / n
    w = _contour_values(g, contour, t)
    scale = float(np.max(np.abs(w)))
    _check_contact(contour, t, w, scale)
    t0, t1, w0, w1 = t[:-1], t[1:], w[:-1], w[1:]
    total, used = 0.0, n
    while t0.size:
        steps = np.angle(w1 / w0)
        good = np.abs(steps) < np.pi / 2
        total += float(np.sum(steps[good]))
        t0, t1, w0, w1 = t0[~good], t1[~good], w0[~good], w1[~good]
        if not t0.size:
            break
        if np.min(t1 - t0) < 1e-15:
            k = int(np.argmin(t1 - t0))
            raise ContourHit(complex(contour(np.array([t0[k]]))[0]))
        k = _REFINE
        frac = np.arange(1, k) / k
        inner = t0[:, None] + (t1 - t0)[:, None] * frac[None, :]
        used += inner.size
        if used > ZEROS["max_points"]:
            raise ResolutionError(
                f"argument tracking lost continuity: {t0.size} segments unresolved after "
                f"{ZEROS['max_points']} contour samples; the function is too wild at this resolution"
            )
        w_inner = _contour_values(g, contour, inner.ravel()).reshape(inner.shape)
        _check_contact(contour, inner.ravel(), w_inner.ravel(), scale)
        ts = np.concatenate([t0[:, None], inner, t1[:, None]], axis=1)
        ws = np.concatenate([w0[:, None], w_inner, w1[:, None]], axis=1)
        t0, t1 = ts[:, :-1].ravel(), ts[:, 1:].ravel()
        w0, w1 = ws[:, :-1].ravel(), ws[:, 1:].ravel()
    return int(round(total / (2 * np.pi)))


def _contour_values(g, contour, t: np.ndarray) -> np.ndarray:
    w = np.asarray(g(contour(t)), dtype=complex)
    if not np.all(np.isfinite(w)):
        raise ResolutionError("non-finite function values on contour")
    return w


def _check_contact(contour, t: np.ndarray, w: np.ndarray, scale: float):
    size = np.abs(w)
    k = int(np.argmin(size))
    if size[k] <= _CONTACT * scale:
        raise ContourHit(complex(contour(np.array([t[k]]))[0]))


# ---------------------------------------------------------------------------
# Quadrisection
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class _Box:
    x0: float
    x1: float
    y0: float
    y1: float

    @property
    def center(self) -> complex:
        return complex((self.x0 + self.x1) / 2, (self.y0 + self.y1) / 2)

    @property
    def half_diagonal(self) -> float:
        return math.hypot(self.x1 - self.x0, self.y1 - self.y0) / 2

    def contour(self):
        return box_contour(self.x0, self.x1, self.y0, self.y1)

    def split(self, frac: float) -> list["_Box"]:
        xm = self.x0 + frac * (self.x1 - self.x0)
        ym = self.y0 + frac * (self.y1 - self.y0)
        return [
            _Box(self.x0, xm, self.y0, ym),
            _Box(xm, self.x1, self.y0, ym),
            _Box(xm, self.x1, ym, self.y1),
            _Box(self.x0, xm, ym, self.y1),
        ]


def _split_with_windings(g, box: _Box, expected: int) -> list[tuple[_Box, int]]:
    for frac in _SPLITS:
        children = box.split(frac)
        try:
            windings = [winding_number(g, child.contour()) for child in children]
        except (ContourHit, ResolutionError):
            continue
        if sum(windings) != expected or min(windings) < 0:
            raise ResolutionError(
                f"inconsistent winding numbers {windings} inside a box of winding {expected} "
                f"centred at {box.center}"
            )
        return [(c, w) for c, w in zip(children, windings) if w > 0]
    raise ResolutionError(f"could not split the box centred at {box.center} away from zeros")


def _polish(g, record: ZeroRecord) -> ZeroRecord:
    if record.multiplicity != 1:
        return record
    scalar = lambda z: complex(np.asarray(g(np.asarray([z], dtype=complex)))[0])  # noqa: E731
    start = record.location
    try:
        root = complex(optimize.newton(scalar, start, x1=start + record.enclosure_radius / 4, maxiter=50))
    except (RuntimeError, ZeroDivisionError, OverflowError):
        return record
    if abs(root - start) >= record.enclosure_radius or not np.isfinite(root):
        return record
    return ZeroRecord(root, 1, record.enclosure_radius)


def _merge(records: list[ZeroRecord]) -> list[ZeroRecord]:
    """Merge records whose enclosure circles overlap so enclosures stay disjoint."""
    merged: list[ZeroRecord] = []
    for rec in sorted(records, key=lambda z: (z.location.real, z.location.imag)):
        for i, other in enumerate(merged):
            gap = abs(rec.location - other.location)
            if gap < rec.enclosure_radius + other.enclosure_radius:
                m = rec.multiplicity + other.multiplicity
                center = (rec.location * rec.multiplicity + other.location * other.multiplicity) / m
                radius = max(abs(center - rec.location) + rec.enclosure_radius,
                             abs(center - other.location) + other.enclosure_radius)
                merged[i] = ZeroRecord(center, m, radius)
                break
        else:
            merged.append(rec)
    return merged


def count_zeros(g: Callable[[np.ndarray], np.ndarray], r: float, enclosure: float | None = None) -> ZeroCount:
    """All zeros of g in |z| < r with multiplicities.

    A zero on the circle moves the radius outward by ``ZEROS['nudge'] * r`` (recorded).
    The multiplicities always sum to the winding number along the final circle.
    """
    if not r > 0:
        raise DomainError(f"radius must be positive, got {r!r}")
    radius, nudges = float(r), 0
    while True:
        try:
            total = winding_number(g, circle_contour(radius))
            break
        except ContourHit as hit:
            nudges += 1
            if nudges > ZEROS["max_nudges"]:
                raise ResolutionError(f"zeros keep landing on the circle near {hit.point}") from hit
            radius += ZEROS["nudge"] * r
            logger.info("zero on |z|=%g near %s; nudged radius to %.12g", r, hit.point, radius)
    if total < 0:
        raise ResolutionError(f"negative winding number {total} for an entire function")
    if total == 0:
        return ZeroCount((), radius, r, nudges, 0)

    target = (enclosure or ZEROS["enclosure"]) * r
    stack = []
    for pad in (1.0 + 1e-7, 1.0137, 1.031):
        side = radius * pad
        root = _Box(-side, side, -side, side)
        try:
            stack = [(root, winding_number(g, root.contour()))]
            break
        except (ContourHit, ResolutionError):
            continue
    if not stack:
        raise ResolutionError(f"could not place a square around |z| < {radius:g} free of zeros")

    leaves: list[ZeroRecord] = []
    depth = 0
    while stack:
        box, k = stack.pop()
        if box.half_diagonal <= target:
            leaves.append(ZeroRecord(box.center, k, 1.01 * box.half_diagonal))
            continue
        depth += 1
        stack.extend(_split_with_windings(g, box, k))
    logger.debug("quadrisection: %d box splits, %d leaves", depth, len(leaves))

    records = _merge([_polish(g, rec) for rec in leaves])
    inside = [rec for rec in records if abs(rec.location) < radius]
    found = sum(rec.multiplicity for rec in inside)
    if found != total:
        raise ResolutionError(
            f"located {found} zeros in |z| < {radius:g} but the circle winding number is {total}; "
            "a zero lies too close to the circle to be attributed"
        )
    inside.sort(key=lambda z: (z.location.real, z.location.imag))
    return ZeroCount(tuple(inside), radius, r, nudges, total)
