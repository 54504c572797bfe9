"""Homogeneous polynomial sections of O(d) with the Fubini-Study metric."""

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, rationalize, standard_transformations

from engine.errors import ConfigError, InputError
from engine.sampling import halton_sphere
from utils.constants import SAMPLING

logger = logging.getLogger(__name__)

Exponent = tuple[int, ...]


def monomial_exponents(n_vars: int, degree: int) -> list[Exponent]:
    """All exponent vectors of total degree ``degree`` in ``n_vars`` variables.

    Ordered with x_0^d first; there are binomial(n_vars - 1 + d, d) of them.
    """
    out = []
    for combo in itertools.combinations_with_replacement(range(n_vars), degree):
        exps = [0] * n_vars
        for i in combo:
            exps[i] += 1
        out.append(tuple(exps))
    return out


@dataclass(frozen=True, eq=False)
class PolynomialSection:
    """s = sum_alpha c_alpha x^alpha, homogeneous of degree d in x_0..x_N."""

    degree: int
    n_vars: int
    coefficients: dict = field(repr=False)
    name: str = "s"

    def __post_init__(self):
        if self.degree < 1:
            raise InputError(f"section degree must be >= 1, got {self.degree!r}")
        if self.n_vars < 2:
            raise InputError(f"sections need at least two homogeneous variables, got {self.n_vars!r}")
        clean = {}
        for exps, c in self.coefficients.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.n_vars or sum(exps) != self.degree or min(exps) < 0:
                raise InputError(f"exponent {exps} is not a degree-{self.degree} monomial in {self.n_vars} variables")
            c = Fraction(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
        clean = {e: c for e, c in sorted(clean.items(), reverse=True) if c}
        if not clean:
            raise InputError("a section needs at least one nonzero coefficient")
        object.__setattr__(self, "coefficients", clean)
        object.__setattr__(self, "_exps", np.array(list(clean), dtype=int))
        object.__setattr__(self, "_coef", np.array([complex(c) for c in clean.values()]))

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------
    @classmethod
    def from_vector(cls, vector, n_vars: int, degree: int, name: str = "s") -> "PolynomialSection":
        """Section with coefficients given in ``monomial_exponents`` order."""
        basis = monomial_exponents(n_vars, degree)
        if len(vector) != len(basis):
            raise InputError(f"expected {len(basis)} coefficients, got {len(vector)}")
        return cls(degree, n_vars, {e: Fraction(int(c)) if isinstance(c, (int, np.integer)) else Fraction(c)
                                    for e, c in zip(basis, vector)}, name)

    @classmethod
    def linear(cls, coefficients, name: str = "s") -> "PolynomialSection":
        """Degree-1 section sum_i a_i x_i."""
        n = len(coefficients)
        return cls(1, n, {tuple(int(i == j) for j in range(n)): Fraction(c) for i, c in enumerate(coefficients)}, name)

    # ------------------------------------------------------------------
    # Evaluation
    # ------------------------------------------------------------------
    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coefficients.values())

    def vector(self) -> list[Fraction]:
        """Coefficients in ``monomial_exponents`` order (zeros included)."""
        return [self.coefficients.get(e, Fraction(0)) for e in monomial_exponents(self.n_vars, self.degree)]

    def raw(self, x) -> np.ndarray:
        """s(x) for homogeneous coordinates x of shape (n_vars, ...)."""
        x = np.asarray(x, dtype=complex)
        if x.shape[0] != self.n_vars:
            raise InputError(f"expected {self.n_vars} coordinates, got {x.shape[0]}")
        out = np.zeros(x.shape[1:], dtype=complex)
        for exps, c in zip(self._exps, self._coef):
            term = np.full(x.shape[1:], c, dtype=complex)
            for i, e in enumerate(exps):
                if e:
                    term = term * x[i] ** e
            out = out + term
        return out

    def norm_at(self, x) -> np.ndarray:
        """Fubini-Study pointwise norm |s(x)| / ||x||^d (invariant under scaling x)."""
        x = np.asarray(x, dtype=complex)
        scale = np.max(np.abs(x), axis=0)
        if np.any(scale == 0):
            raise InputError("the zero vector is not a point of projective space")
        x = x / scale
        return np.abs(self.raw(x)) / np.linalg.norm(x, axis=0) ** self.degree

    def exact(self, coords) -> Fraction:
        """s at exact homogeneous coordinates (ints or Fractions)."""
        if len(coords) != self.n_vars:
            raise InputError(f"expected {self.n_vars} coordinates, got {len(coords)}")
        coords = [Fraction(c) for c in coords]
        total = Fraction(0)
        for exps, c in self.coefficients.items():
            term = c
            for xi, e in zip(coords, exps):
                if e:
                    term *= xi**e
            total += term
        return total

    # ------------------------------------------------------------------
    # Norms
    # ------------------------------------------------------------------
    def l2_norm(self) -> float:
        """L2 norm against the normalised Fubini-Study volume of P^N.

        Monomials are orthogonal with ||x^a||^2 = a! N! / (N + d)!.
        """
        n = self.n_vars - 1
        base = math.factorial(n) / math.factorial(n + self.degree)
        total = math.fsum(
            float(c * c) * math.prod(math.factorial(e) for e in exps) * base
            for exps, c in self.coefficients.items()
        )
        return math.sqrt(total)

    def sup_upper_bound(self) -> float:
        """sum |c_a| * max_{||x||=1} |x^a|, an upper bound for the sup norm."""
        d = self.degree
        total = 0.0
        for exps, c in self.coefficients.items():
            log_peak = sum(e * math.log(e / d) for e in exps if e) / 2
            total += abs(float(c)) * math.exp(log_peak)
        return total

    def sampled_sup(self, samples: int | None = None, seed: int = 0) -> float:
        """Maximum of the pointwise norm over a low-discrepancy sample of P^N (a lower bound)."""
        n = samples or SAMPLING["sup_samples"]
        best = 0.0
        chunk = 20_000
        for start in range(0, n, chunk):
            pts = halton_sphere(min(chunk, n - start), self.n_vars, seed=seed + start)
            best = max(best, float(np.max(np.abs(self.raw(pts)))))
        return best

    def log_sup_norm(self, samples: int | None = None, seed: int = 0) -> float:
        return math.log(self.sampled_sup(samples, seed))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "degree": self.degree,
            "n_vars": self.n_vars,
            "exponents": [list(e) for e in self.coefficients],
            "coefficients": [str(c) for c in self.coefficients.values()],
        }

    def __str__(self) -> str:
        syms = sympy.symbols(f"x0:{self.n_vars}")
        expr = sum(
            sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[s**e for s, e in zip(syms, exps)])
            for exps, c in self.coefficients.items()
        )
        return str(expr)


def section_from_expression(text: str, n_vars: int, name: str | None = None) -> PolynomialSection:
    """Parse ``x0 - x1/2``-style text. Non-homogeneous input in x1..xN is homogenised with x0."""
    syms = sympy.symbols(f"x0:{n_vars}")
    try:
        expr = parse_expr(
            text,
            local_dict={str(s): s for s in syms},
            transformations=standard_transformations + (convert_xor, rationalize),
        )
        poly = sympy.Poly(sympy.expand(expr), *syms)
    except Exception as exc:
        raise ConfigError(f"cannot parse section {text!r} in variables x0..x{n_vars - 1}: {exc}") from exc
    if poly.is_zero:
        raise InputError(f"section {text!r} is identically zero")
    degree = poly.total_degree()
    coefficients = {}
    homogeneous = poly.is_homogeneous
    if not homogeneous and poly.degree(syms[0]) > 0:
        raise ConfigError(f"section {text!r} is neither homogeneous nor free of x0")
    for monom, c in poly.terms():
        if not c.is_Rational:
            raise ConfigError(f"section {text!r} has a non-rational coefficient {c}")
        exps = monom if homogeneous else (degree - sum(monom),) + tuple(monom[1:])
        coefficients[exps] = Fraction(int(c.p), int(c.q))
    return PolynomialSection(degree, n_vars, coefficients, name or text)


def random_sections(
    n_vars: int, degree: int, count: int, seed: int = 0, low: int = 1, high: int = 9
) -> list[PolynomialSection]:
    """Dense integer sections with coefficients of random sign and size in [low, high]."""
    rng = np.random.default_rng(seed)
    basis = monomial_exponents(n_vars, degree)
    out = []
    for k in range(count):
        size = rng.integers(low, high + 1, size=len(basis))
        sign = rng.choice([-1, 1], size=len(basis))
        out.append(PolynomialSection.from_vector((size * sign).tolist(), n_vars, degree, name=f"random_{k}"))
    return out
