"""Integer kernels of evaluation systems, auxiliary polynomials, and norm comparisons."""

import itertools
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from engine.errors import DomainError, InputError, StructuralError
from engine.heights import HeightedPoint, RationalPoint, height
from engine.sections import PolynomialSection, monomial_exponents, random_sections
from utils.constants import SIEGEL

logger = logging.getLogger(__name__)

IntVector = tuple[int, ...]


# ---------------------------------------------------------------------------
# Evaluation systems
# ---------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class EvaluationSystem:
    """Rows: points; columns: degree-d monomials evaluated at the primitive coordinates."""

    degree: int
    n_vars: int
    points: tuple[RationalPoint, ...]
    matrix: tuple[IntVector, ...] = field(repr=False)
    weights: tuple[float, ...] = ()

    @property
    def n_monomials(self) -> int:
        return math.comb(self.n_vars - 1 + self.degree, self.degree)

    @property
    def column_bound(self) -> float:
        """Largest Euclidean column norm (at least 1)."""
        if not self.matrix:
            return 1.0
        cols = zip(*self.matrix)
        return max(1.0, max(math.sqrt(sum(v * v for v in col)) for col in cols))

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[int]], degree: int = 1) -> "EvaluationSystem":
        """A bare integer system; columns are read as degree-``degree`` monomials."""
        rows = tuple(tuple(int(v) for v in row) for row in matrix)
        if not rows or len({len(row) for row in rows}) != 1:
            raise InputError("the system matrix must be a non-empty rectangle")
        width = len(rows[0])
        n_vars = next(
            (n for n in range(1, width + 2) if math.comb(n - 1 + degree, degree) == width), None
        )
        if n_vars is None:
            raise InputError(f"{width} columns is not a count of degree-{degree} monomials")
        return cls(degree, n_vars, (), rows, ())


def build_system(points: Sequence[RationalPoint | HeightedPoint], degree: int) -> EvaluationSystem:
    pts = [p.point if isinstance(p, HeightedPoint) else p for p in points]
    if not pts:
        raise InputError("an evaluation system needs at least one point")
    n_vars = pts[0].n_vars
    if any(p.n_vars != n_vars for p in pts):
        raise InputError("all points must live in the same projective space")
    basis = monomial_exponents(n_vars, degree)
    matrix = tuple(
        tuple(math.prod(c**e for c, e in zip(p.coords, exps)) for exps in basis) for p in pts
    )
    weights = tuple(degree * height(p)[0] for p in pts)
    return EvaluationSystem(degree, n_vars, tuple(pts), matrix, weights)


def slope_max(weights: Sequence[float]) -> float:
    """Largest slope of a direct sum of rank-one pieces (d*h_fs per point)."""
    if not len(weights):
        raise DomainError("slope_max of an empty direct sum")
    return float(max(weights))


# ---------------------------------------------------------------------------
# Integer kernels
# ---------------------------------------------------------------------------
def _sup(v: Sequence[int]) -> int:
    return max(abs(x) for x in v)


def _l2(v: Sequence[int]) -> int:
    return sum(x * x for x in v)


def _normalise_sign(v: IntVector) -> IntVector:
    lead = next(x for x in v if x)
    return tuple(-x for x in v) if lead < 0 else tuple(v)


def _size_reduce(basis: list[list[int]]) -> list[list[int]]:
    """Pairwise reduction v_i -= round(<v_i, v_j>/<v_j, v_j>) v_j while the norm drops."""
    changed = True
    while changed:
        changed = False
        for i, j in itertools.permutations(range(len(basis)), 2):
            vj = basis[j]
            k = round(sum(a * b for a, b in zip(basis[i], vj)) / _l2(vj))
            if k:
                cand = [a - k * b for a, b in zip(basis[i], vj)]
                if _l2(cand) < _l2(basis[i]):
                    basis[i] = cand
                    changed = True
    return basis


def integer_kernel_basis(matrix: Sequence[Sequence[int]]) -> list[IntVector]:
    """A reduced basis of the integer kernel lattice {v in Z^m : A v = 0}.

    LLL on the rows [e_j | K * A[:, j]]: with K large the reduced rows whose tail
    vanishes span the saturated kernel.
    """
    rows = [list(map(int, r)) for r in matrix]
    p, m = len(rows), len(rows[0])
    rank = DomainMatrix([[ZZ(v) for v in r] for r in rows], (p, m), ZZ).to_field().rank()
    nullity = m - rank
    if nullity == 0:
        return []
    entry = max((abs(v) for r in rows for v in r), default=1)
    scale = 2**10 * (1 + entry) * m
    for attempt in range(6):
        lattice = [
            [int(i == j) for i in range(m)] + [scale * rows[k][j] for k in range(p)] for j in range(m)
        ]
        reduced = DomainMatrix([[ZZ(v) for v in r] for r in lattice], (m, m + p), ZZ).lll()
        kernel = [
            [int(v) for v in row[:m]] for row in reduced.to_Matrix().tolist() if not any(int(v) for v in row[m:])
        ]
        if len(kernel) == nullity:
            basis = _size_reduce(kernel)
            return [_normalise_sign(tuple(v)) for v in basis]
        logger.debug("LLL kernel attempt %d found %d of %d vectors; scaling up", attempt, len(kernel), nullity)
        scale *= 2**16
    raise StructuralError(f"could not separate a kernel of rank {nullity} by lattice reduction")


def shortest_in_span(basis: Sequence[IntVector]) -> IntVector:
    """Smallest sup-norm vector among the basis and, for low rank, small combinations of it."""
    best = min(basis, key=lambda v: (_sup(v), _l2(v)))
    if len(basis) <= SIEGEL["combination_search_rank"]:
        bound = SIEGEL["combination_bound"]
        for coeffs in itertools.product(range(-bound, bound + 1), repeat=len(basis)):
            if not any(coeffs):
                continue
            v = tuple(sum(c * b[i] for c, b in zip(coeffs, basis)) for i in range(len(basis[0])))
            if any(v) and (_sup(v), _l2(v)) < (_sup(best), _l2(best)):
                best = v
    return _normalise_sign(best)


@dataclass(frozen=True)
class SiegelResult:
    vector: IntVector
    kernel_rank: int
    n_monomials: int
    log_sup: float
    audit_bound: float

    @property
    def audit_ok(self) -> bool:
        return self.log_sup <= self.audit_bound


def siegel_small_kernel(
    system: EvaluationSystem, alpha: float | None = None, audit_constant: float | None = None
) -> SiegelResult:
    """Nonzero small integer kernel vector with its audit against the Siegel-shape bound

    (m/n) log C^2 + (m/n - 1) mu_max + 3 log n + A_impl.
    """
    alpha = SIEGEL["alpha"] if alpha is None else alpha
    audit_constant = SIEGEL["audit_constant"] if audit_constant is None else audit_constant
    if not 0 < alpha <= 0.5:
        raise DomainError(f"alpha must lie in (0, 1/2], got {alpha!r}")
    n_points, m = len(system.matrix), system.n_monomials
    if n_points > (1 - alpha) * m:
        raise StructuralError(
            f"{n_points} points against {m} monomials exceeds (1 - alpha)*m = {(1 - alpha) * m:g}; "
            "the system may be injective, raise the degree"
        )
    basis = integer_kernel_basis(system.matrix)
    if not basis:
        raise StructuralError("the evaluation system is injective: no nonzero kernel vector")
    n = len(basis)
    vector = shortest_in_span(basis)
    mu = slope_max(system.weights) if system.weights else 0.0
    C = system.column_bound
    bound = (m / n) * math.log(C**2) + (m / n - 1) * mu + 3 * math.log(n) + audit_constant
    result = SiegelResult(vector, n, m, math.log(_sup(vector)), bound)
    if not result.audit_ok:
        logger.warning(
            "Siegel audit exceeded: log sup %.3f > %.3f (m=%d, n=%d)", result.log_sup, bound, m, n
        )
    return result


# ---------------------------------------------------------------------------
# Auxiliary polynomials
# ---------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class AuxPolynomial:
    section: PolynomialSection
    log_sup_norm: float
    vanishing: tuple[RationalPoint, ...]
    siegel: SiegelResult
    H_max: float

    @property
    def exact_vanishing(self) -> bool:
        return all(self.section.exact(p.coords) == 0 for p in self.vanishing)

    @property
    def empirical_c3(self) -> float:
        scale = self.section.degree * self.H_max
        return self.log_sup_norm / scale if scale > 0 else math.nan

    def to_dict(self) -> dict:
        return {
            "degree": self.section.degree,
            "exponents": [list(e) for e in self.section.coefficients],
            "coefficients": [int(c) for c in self.section.coefficients.values()],
            "log_sup_norm": self.log_sup_norm,
            "vanishing": [list(p.coords) for p in self.vanishing],
            "kernel_rank": self.siegel.kernel_rank,
            "audit_bound": self.siegel.audit_bound,
        }


def build_aux_polynomial(
    points: Sequence[RationalPoint | HeightedPoint],
    d: int,
    alpha: float | None = None,
    sup_samples: int | None = None,
    seed: int = 0,
) -> AuxPolynomial:
    """Integer degree-d section vanishing exactly at ``points``, with a small Siegel vector."""
    system = build_system(points, d)
    alpha = SIEGEL["alpha"] if alpha is None else alpha
    if len(system.points) > (1 - alpha) * system.n_monomials:
        raise StructuralError(
            f"{len(system.points)} points need more than {system.n_monomials} degree-{d} monomials "
            f"at alpha={alpha:g}; use a larger degree"
        )
    result = siegel_small_kernel(system, alpha)
    section = PolynomialSection.from_vector(list(result.vector), system.n_vars, d, name=f"aux_d{d}")
    H_max = max(height(p)[0] for p in system.points)
    aux = AuxPolynomial(section, section.log_sup_norm(sup_samples, seed), system.points, result, H_max)
    if not aux.exact_vanishing:
        raise StructuralError("kernel vector does not vanish on the system points")
    return aux


# ---------------------------------------------------------------------------
# L2 against sup norms
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class GromovReport:
    degrees: tuple[int, ...]
    log_ratios: tuple[tuple[float, ...], ...]
    violations: int
    slope: float
    curvature: float
    c: float
    c_max: float
    ceiling_violations: int = 0

    @property
    def passed(self) -> bool:
        return self.violations == 0 and self.ceiling_violations == 0 and self.c <= self.c_max + 1e-12

    def rows(self) -> list[dict]:
        return [
            {"d": d, "trial": k, "log_ratio": v}
            for d, row in zip(self.degrees, self.log_ratios)
            for k, v in enumerate(row)
        ]


def gromov_check(
    d_values: Sequence[int], trials: int = 10, seed: int = 0, sup_samples: int | None = None, n_vars: int = 3
) -> GromovReport:
    """Compare the sampled sup norm with the exact L2 norm for random integer sections.

    The fitted c is the smallest constant with log(sup/L2) <= c*d on every trial. The
    reproducing kernel of the invariant L2 product caps each ratio by sqrt(h0(d)), and
    h0(d) <= (N+1)^d, so c may not exceed log(N+1)/2. The mean log-ratios are also
    fitted by a quadratic in d for the report.
    """
    degrees = tuple(sorted(int(d) for d in d_values))
    if not degrees or degrees[0] < 1:
        raise DomainError("degrees must be >= 1")
    log_ratios, violations, over = [], 0, 0
    for d in degrees:
        ceiling = 0.5 * math.log(math.comb(n_vars - 1 + d, d))
        row = []
        for s in random_sections(n_vars, d, trials, seed=seed + d):
            l2, sup = s.l2_norm(), s.sampled_sup(sup_samples, seed)
            if l2 > sup:
                violations += 1
            ratio = math.log(sup / l2)
            if ratio > ceiling + 1e-12:
                over += 1
            row.append(ratio)
        log_ratios.append(tuple(row))
    c = max(max(row) / d for d, row in zip(degrees, log_ratios))
    means = np.array([np.mean(r) for r in log_ratios])
    if len(degrees) >= 3:
        curvature, slope, _ = np.polyfit(degrees, means, 2)
    elif len(degrees) == 2:
        slope, curvature = float(np.polyfit(degrees, means, 1)[0]), 0.0
    else:
        slope, curvature = float(means[0] / degrees[0]), 0.0
    report = GromovReport(degrees, tuple(log_ratios), violations, float(slope), float(curvature),
                          float(c), 0.5 * math.log(n_vars), over)
    logger.info("gromov check degrees %s: c = %.3f (cap %.3f), %d violations", degrees, c, report.c_max, violations)
    return report


def brute_force_min_sup(matrix: Sequence[Sequence[int]], cap: int = 20, budget: int = 20_000_000) -> int | None:
    """Smallest sup norm of a nonzero integer kernel vector, by shells of growing sup norm.

    Returns None when no vector of sup norm <= ``cap`` exists or the search would
    enumerate more than ``budget`` entries.
    """
    rows = [list(map(int, r)) for r in matrix]
    m = len(rows[0])
    entry = max((abs(v) for r in rows for v in r), default=1)
    dtype = np.int64 if entry * cap * m < 2**62 else object
    A = np.array(rows, dtype=dtype)
    for k in range(1, cap + 1):
        if (2 * k + 1) ** m * m > budget:
            logger.debug("brute-force search stopped at sup norm %d (m=%d)", k, m)
            return None
        axis = np.arange(-k, k + 1)
        grid = np.stack(np.meshgrid(*([axis] * m), indexing="ij"), axis=-1).reshape(-1, m)
        shell = grid[np.abs(grid).max(axis=1) == k].astype(dtype)
        if (A.dot(shell.T) == 0).all(axis=0).any():
            return k
    return None
