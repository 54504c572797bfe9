"""Entire curves: parsed components, the interpolation series, evaluation, and loci.

A curve is a tuple of entire components. Closed-form components come from a small
expression grammar (see README); the interpolation component is the Newton series
through all rationals in height order, whose values at rational nodes are exact
finite sums.
"""

import logging
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import mpmath
import numpy as np
import sympy
from scipy.special import logsumexp
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    rationalize,
    standard_transformations,
)

from engine.errors import CapabilityError, ConfigError, DomainError, InputError, PrecisionError
from engine.sampling import halton_disk
from utils.constants import EVALUATION

logger = logging.getLogger(__name__)

Z = sympy.Symbol("z")

ALLOWED_FUNCTIONS = {
    "exp": sympy.exp,
    "sin": sympy.sin,
    "cos": sympy.cos,
    "sinh": sympy.sinh,
    "cosh": sympy.cosh,
}

_TRANSFORMS = standard_transformations + (convert_xor, rationalize)

_GRAMMAR_GLOBALS = {
    "Integer": sympy.Integer,
    "Float": sympy.Float,
    "Rational": sympy.Rational,
    "Symbol": sympy.Symbol,
    "Function": sympy.Function,
    "I": sympy.I,
    "E": sympy.E,
    "pi": sympy.pi,
}

_EPS = np.finfo(float).eps


# ---------------------------------------------------------------------------
# Rational nodes: all of Q in (height, |numerator|, sign, denominator) order
# ---------------------------------------------------------------------------
def rational_height(q: Fraction) -> int:
    """max(|numerator|, denominator) of a reduced rational."""
    q = Fraction(q)
    return max(abs(q.numerator), q.denominator)


def node_key(q: Fraction) -> tuple[int, int, bool, int]:
    return (rational_height(q), abs(q.numerator), q.numerator < 0, q.denominator)


def rationals_of_height(h: int) -> list[Fraction]:
    """All reduced rationals of height exactly h, in node order."""
    if h < 1:
        return []
    if h == 1:
        return [Fraction(0), Fraction(1), Fraction(-1)]
    out = []
    for a in range(1, h):
        if gcd(a, h) == 1:
            out += [Fraction(a, h), Fraction(-a, h)]
            out += [Fraction(h, a), Fraction(-h, a)]
    return sorted(out, key=node_key)


class _NodeTable:
    """Append-only cache of the node sequence q_1, q_2, ... and its inverse."""

    def __init__(self):
        self._lock = threading.Lock()
        self.nodes: list[Fraction] = []
        self.index: dict[Fraction, int] = {}
        self.height = 0

    def _grow(self):
        self.height += 1
        for q in rationals_of_height(self.height):
            self.nodes.append(q)
            self.index[q] = len(self.nodes)

    def ensure_count(self, count: int):
        with self._lock:
            while len(self.nodes) < count:
                self._grow()

    def ensure_height(self, h: int):
        with self._lock:
            while self.height < h:
                self._grow()


_NODES = _NodeTable()


def rational_nodes(count: int) -> list[Fraction]:
    """The first ``count`` nodes q_1..q_count."""
    _NODES.ensure_count(count)
    return _NODES.nodes[:count]


def node(m: int) -> Fraction:
    """The m-th node (1-based)."""
    _NODES.ensure_count(m)
    return _NODES.nodes[m - 1]


def node_index(q: Fraction) -> int:
    """1-based position of q in the node sequence."""
    q = Fraction(q)
    _NODES.ensure_height(rational_height(q))
    return _NODES.index[q]


def _mpf_to_fraction(x) -> Fraction:
    man, exp = mpmath.mpf(x).man_exp
    return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2 ** (-exp))


# ---------------------------------------------------------------------------
# Expression components
# ---------------------------------------------------------------------------
def parse_component(text: str) -> sympy.Expr:
    """Parse one component string and check that it defines an entire function of z."""
    if not isinstance(text, str) or not text.strip():
        raise ConfigError(f"component must be a non-empty string, got {text!r}")
    local = {"z": Z, **ALLOWED_FUNCTIONS}
    try:
        expr = parse_expr(
            text, local_dict=local, global_dict=dict(_GRAMMAR_GLOBALS), transformations=_TRANSFORMS
        )
    except Exception as exc:  # parse_expr surfaces SyntaxError, TokenError, TypeError, ...
        raise ConfigError(f"cannot parse component {text!r}: {exc}") from exc
    if not isinstance(expr, sympy.Expr):
        raise ConfigError(f"component {text!r} is not an expression")
    unknown = expr.free_symbols - {Z}
    if unknown:
        names = ", ".join(sorted(str(s) for s in unknown))
        raise ConfigError(f"component {text!r} uses unknown symbol(s): {names}")
    allowed = tuple(ALLOWED_FUNCTIONS.values())
    for fn in expr.atoms(sympy.Function):
        if not isinstance(fn, allowed):
            raise ConfigError(f"component {text!r} uses unsupported function {fn.func}")
    for power in expr.atoms(sympy.Pow):
        base, exponent = power.as_base_exp()
        if base.has(Z) and not (exponent.is_Integer and exponent >= 0):
            raise ConfigError(f"component {text!r} is not entire: {power} (z may not appear in a denominator or root)")
    return expr


def _rational_coefficients(expr: sympy.Expr) -> list[Fraction] | None:
    """Coefficients (highest degree first) when expr is a polynomial over Q."""
    if not expr.is_polynomial(Z):
        return None
    coeffs = sympy.Poly(expr, Z).all_coeffs()
    if not all(c.is_Rational for c in coeffs):
        return None
    return [Fraction(int(c.p), int(c.q)) for c in coeffs]


def _broadcast(value, z: np.ndarray) -> np.ndarray:
    out = np.asarray(value, dtype=complex)
    return np.full(z.shape, complex(out)) if out.shape != z.shape else out


class ExpressionComponent:
    """A closed-form entire component: polynomial or exp-combination."""

    exact_cheap = True

    def __init__(self, text: str):
        self.text = text
        self.expr = parse_component(text)
        self.derivative_expr = sympy.diff(self.expr, Z)
        self._np = sympy.lambdify(Z, self.expr, modules="numpy")
        self._np_prime = sympy.lambdify(Z, self.derivative_expr, modules="numpy")
        self._mp = sympy.lambdify(Z, self.expr, modules="mpmath")
        self.coefficients = _rational_coefficients(self.expr)
        self.ops = max(1, int(sympy.count_ops(self.expr)))

    def __repr__(self) -> str:
        return f"ExpressionComponent({self.text!r})"

    @property
    def label(self) -> str:
        return self.text

    @property
    def is_identity(self) -> bool:
        return self.expr == Z

    @property
    def is_constant_one(self) -> bool:
        return self.expr == sympy.Integer(1)

    @property
    def has_exact(self) -> bool:
        return self.coefficients is not None

    def __call__(self, z):
        z_arr = np.asarray(z, dtype=complex)
        return _broadcast(self._np(z_arr), z_arr)

    def derivative(self, z):
        z_arr = np.asarray(z, dtype=complex)
        return _broadcast(self._np_prime(z_arr), z_arr)

    def float_error(self, z: complex, value: complex) -> float:
        """Rounding estimate for the float64 path."""
        z = complex(z)
        if self.coefficients is not None:
            scale = sum(abs(float(c)) * abs(z) ** k for k, c in enumerate(reversed(self.coefficients)))
            return (len(self.coefficients) + 2) * _EPS * scale
        return 4 * _EPS * self.ops * (1 + abs(z)) * (1 + abs(value))

    def mp_value(self, z, tol: float):
        """Value at the current mpmath precision; no truncation error."""
        return mpmath.mpc(self._mp(z)), 0.0

    def exact(self, q: Fraction) -> Fraction:
        if self.coefficients is None:
            raise CapabilityError(f"component {self.text!r} has no exact rational values")
        acc = Fraction(0)
        for c in self.coefficients:
            acc = acc * q + c
        return acc

    def small_value(self, q: Fraction, bound: int) -> Fraction | None:
        return self.exact(q)


# ---------------------------------------------------------------------------
# Newton interpolation series through the rational nodes
# ---------------------------------------------------------------------------
PATTERNS = ("all", "lacunary")


class NewtonSeriesComponent:
    """f(z) = sum_n c_n * prod_{k<=n} (z - q_k) with c_n = eps_n * w_n.

    ``decay="factorial"`` gives w_n = 1/(n!)^2; an integer D >= 2 gives w_n = D^(-n^2).
    ``pattern="all"`` sets every eps_n = 1; ``"lacunary"`` keeps n in {0, 1} and the
    powers of two from 8 on, so the first eight nodes lie on the line y = 1 + z.
    """

    exact_cheap = False
    is_identity = False
    is_constant_one = False
    has_exact = True

    def __init__(
        self,
        decay: str | int = "factorial",
        pattern: str = "all",
        max_terms: int | None = None,
        height_budget: int = 1000,
    ):
        if decay != "factorial" and not (isinstance(decay, int) and decay >= 2):
            raise ConfigError(f"decay must be 'factorial' or an integer >= 2, got {decay!r}")
        if pattern not in PATTERNS:
            raise ConfigError(f"unknown coefficient pattern {pattern!r}; expected one of {PATTERNS}")
        if height_budget < 1:
            raise ConfigError(f"height_budget must be >= 1, got {height_budget!r}")
        self.decay = decay
        self.pattern = pattern
        self.max_terms = max_terms or EVALUATION["max_terms"]
        self.height_budget = height_budget

    def __repr__(self) -> str:
        return f"NewtonSeriesComponent(decay={self.decay!r}, pattern={self.pattern!r})"

    @property
    def label(self) -> str:
        return f"newton[{self.decay},{self.pattern}]"

    def active(self, n: int) -> bool:
        if self.pattern == "all" or n <= 1:
            return True
        return n >= 8 and n & (n - 1) == 0

    def log_weight(self, n: int) -> float:
        if self.decay == "factorial":
            return -2.0 * math.lgamma(n + 1)
        return -float(n * n) * math.log(self.decay)

    def coefficient(self, n: int) -> Fraction:
        if not self.active(n):
            return Fraction(0)
        if self.decay == "factorial":
            return Fraction(1, math.factorial(n) ** 2)
        return Fraction(1, self.decay ** (n * n))

    def truncation(self, radius: float, tol: float, rel: float = 0.0) -> tuple[int, float]:
        """(N, tail): keeping terms 0..N leaves a tail at most ``tail`` on |z| <= radius.

        Uses |q_k| <= k, so the term-bound ratio w_{n+1}/w_n * (radius + n + 1) is
        decreasing; once it is <= 1/2 the tail is at most twice the next term bound.
        At radius 0 every product through q_1 = 0 vanishes, so only the constant term is kept.
        """
        log_prod = 0.0
        log_sum = self.log_weight(0)
        for n in range(1, self.max_terms + 1):
            factor = radius + abs(float(node(n)))
            if factor == 0.0:
                return n - 1, 0.0
            log_prod += math.log(factor)
            log_b = self.log_weight(n) + log_prod
            ratio = math.exp(self.log_weight(n + 1) - self.log_weight(n)) * (radius + n + 1)
            target = max(tol, rel * math.exp(log_sum)) if rel else tol
            if ratio <= 0.5 and target > 0 and math.log(2) + log_b < math.log(target):
                return n - 1, 2 * math.exp(log_b)
            log_sum = np.logaddexp(log_sum, log_b)
        raise PrecisionError(
            f"series tail above {tol:.1e} after {self.max_terms} terms at radius {radius:g}"
        )

    def _scale(self, radius: float, terms: int) -> float:
        """Sum of the term bounds up to ``terms``; the float rounding scale."""
        log_prod, log_sum = 0.0, self.log_weight(0)
        for n in range(1, terms + 1):
            factor = radius + abs(float(node(n)))
            if factor == 0.0:
                break
            log_prod += math.log(factor)
            log_sum = np.logaddexp(log_sum, self.log_weight(n) + log_prod)
        return math.exp(log_sum)

    def _float_terms(self, z: np.ndarray, derivative: bool):
        radius = float(np.max(np.abs(z))) if z.size else 0.0
        # |p_n'(z)| <= n * prod(radius + 1 + |q_k|), so the derivative is truncated one unit further out
        terms, _ = self.truncation(radius + 1.0 if derivative else radius, 0.0, rel=1e-18)
        nodes = rational_nodes(terms + 2)
        value = np.full(z.shape, float(self.coefficient(0)), dtype=complex)
        prime = np.zeros(z.shape, dtype=complex)
        p = np.ones(z.shape, dtype=complex)
        dp = np.zeros(z.shape, dtype=complex)
        for n in range(1, terms + 1):
            shift = z - float(nodes[n - 1])
            dp = dp * shift + p
            p = p * shift
            if self.active(n):
                c = math.exp(self.log_weight(n))
                value += c * p
                prime += c * dp
        return prime if derivative else value

    def __call__(self, z):
        return self._float_terms(np.asarray(z, dtype=complex), derivative=False)

    def derivative(self, z):
        return self._float_terms(np.asarray(z, dtype=complex), derivative=True)

    def float_error(self, z: complex, value: complex) -> float:
        radius = abs(complex(z))
        terms, tail = self.truncation(radius, 0.0, rel=1e-18)
        return tail + 4 * (terms + 2) * _EPS * self._scale(radius, terms)

    def mp_value(self, z, tol: float):
        """(value, tail bound) at the current mpmath precision."""
        z = mpmath.mpc(z)
        terms, tail = self.truncation(float(abs(z)), tol)
        nodes = rational_nodes(terms)
        value = mpmath.mpf(1) * self.coefficient(0).numerator
        p = mpmath.mpc(1)
        for n in range(1, terms + 1):
            q = nodes[n - 1]
            p *= z - mpmath.mpf(q.numerator) / q.denominator
            c = self.coefficient(n)
            if c:
                value += p * (mpmath.mpf(c.numerator) / c.denominator)
        return mpmath.mpc(value), tail

    def _check_budget(self, q: Fraction):
        if rational_height(q) > self.height_budget:
            raise CapabilityError(
                f"node {q} has height {rational_height(q)} above the locus budget {self.height_budget}"
            )

    def exact(self, q: Fraction) -> Fraction:
        """f(q) at a rational node as the exact finite sum over n < index(q)."""
        q = Fraction(q)
        self._check_budget(q)
        m = node_index(q)
        nodes = rational_nodes(m)
        a, b = q.numerator, q.denominator
        # num / den is the partial sum; den stays the exact term denominator, reduced once at the end
        num, den, pn = 1, 1, 1
        for n in range(1, m):
            qk = nodes[n - 1]
            step = self._weight_step(n) * b * qk.denominator
            pn *= a * qk.denominator - qk.numerator * b
            num = num * step + (pn if self.active(n) else 0)
            den *= step
        return Fraction(num, den)

    def _weight_step(self, n: int) -> int:
        """w_{n-1} / w_n, always an integer."""
        if self.decay == "factorial":
            return n * n
        return self.decay ** (2 * n - 1)

    def small_value(self, q: Fraction, bound: int) -> Fraction | None:
        """f(q) if it has height <= bound, else None.

        A 60-digit value proposes the best rational with denominator <= bound; only a
        proposal within 1e-40 is confirmed by the exact sum.
        """
        q = Fraction(q)
        self._check_budget(q)
        with mpmath.workdps(60):
            value, _ = self.mp_value(mpmath.mpf(q.numerator) / q.denominator, 1e-50)
            approx = _mpf_to_fraction(value.real)
            candidate = approx.limit_denominator(max(1, bound))
            if abs(candidate.numerator) > bound:
                return None
            gap = abs(value.real - mpmath.mpf(candidate.numerator) / candidate.denominator)
            if gap > mpmath.mpf("1e-40"):
                return None
        exact = self.exact(q)
        return exact if exact == candidate else None


# ---------------------------------------------------------------------------
# Curves
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class CurveValue:
    values: tuple
    error: float
    precision: str


@dataclass(frozen=True, eq=False)
class EntireCurve:
    """An entire curve into affine space C^N or projective space P^N."""

    name: str
    kind: str
    components: tuple
    dimension: int

    def __post_init__(self):
        if self.kind not in ("affine", "projective"):
            raise ConfigError(f"curve kind must be 'affine' or 'projective', got {self.kind!r}")
        object.__setattr__(self, "components", tuple(self.components))
        minimum = 2 if self.kind == "projective" else 1
        if len(self.components) < minimum:
            raise ConfigError(f"a {self.kind} curve needs at least {minimum} component(s)")
        if self.dimension < 1:
            raise ConfigError(f"dimension must be >= 1, got {self.dimension!r}")

    @property
    def ambient_dim(self) -> int:
        return len(self.components) - (1 if self.kind == "projective" else 0)

    @property
    def n_vars(self) -> int:
        return self.ambient_dim + 1

    @property
    def affine_components(self) -> tuple:
        """Components read as affine coordinates (projective curves need f_0 = 1)."""
        if self.kind == "affine":
            return self.components
        return self.components[1:]

    @property
    def has_locus(self) -> bool:
        if self.kind == "projective" and not self.components[0].is_constant_one:
            return False
        comps = self.affine_components
        return all(c.has_exact for c in comps) and any(c.is_identity for c in comps)

    def lift(self, z) -> np.ndarray:
        """Homogeneous lift, shape (N+1, *z.shape); affine curves get x_0 = 1."""
        z = np.asarray(z, dtype=complex)
        rows = [c(z) for c in self.components]
        if self.kind == "affine":
            rows.insert(0, np.ones(z.shape, dtype=complex))
        return np.stack(rows)

    def lift_derivative(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        rows = [c.derivative(z) for c in self.components]
        if self.kind == "affine":
            rows.insert(0, np.zeros(z.shape, dtype=complex))
        return np.stack(rows)

    def log_weight(self, z) -> np.ndarray:
        """log of the squared norm of the lift (the Fubini-Study weight)."""
        values = self.lift(z)
        with np.errstate(divide="ignore"):
            logs = 2 * np.log(np.abs(values))
        out = logsumexp(logs, axis=0)
        if np.any(np.isneginf(out)):
            raise DomainError(f"all components of {self.name} vanish at an evaluated point")
        return out

    def density(self, z) -> np.ndarray:
        """Pullback of the Fubini-Study form against Lebesgue measure."""
        f = self.lift(z)
        fp = self.lift_derivative(z)
        scale = np.max(np.abs(f), axis=0)
        if np.any(scale == 0):
            raise DomainError(f"all components of {self.name} vanish at an evaluated point")
        f, fp = f / scale, fp / scale
        nf = np.sum(np.abs(f) ** 2, axis=0)
        nfp = np.sum(np.abs(fp) ** 2, axis=0)
        cross = np.abs(np.sum(fp * np.conj(f), axis=0)) ** 2
        return np.maximum(nf * nfp - cross, 0.0) / (np.pi * nf * nf)

    def rational_value(self, q: Fraction, bound: int | None = None) -> tuple[Fraction, ...] | None:
        """Exact affine coordinates of phi(q); None when some coordinate has height > bound."""
        if not self.has_locus:
            raise CapabilityError(f"curve {self.name} exposes no rational locus")
        q = Fraction(q)
        values = []
        for comp in self.affine_components:
            v = comp.exact(q) if bound is None else comp.small_value(q, bound)
            if v is None:
                return None
            values.append(v)
        return tuple(values)


def evaluate(curve: EntireCurve, z: complex, tol: float = 1e-12) -> CurveValue:
    """Component values at z with an absolute error bound <= tol.

    The float64 path is used when its error estimate meets tol; otherwise values are
    recomputed with mpmath at two precisions and accepted once they agree.
    """
    if not tol > 0:
        raise InputError(f"tolerance must be positive, got {tol!r}")
    z = complex(z)
    values = [complex(np.asarray(c(np.asarray(z)))) for c in curve.components]
    error = max(c.float_error(z, v) for c, v in zip(curve.components, values))
    if curve.kind == "projective" and max(abs(v) for v in values) == 0:
        raise DomainError(f"all components of {curve.name} vanish at {z}")
    if error <= tol:
        return CurveValue(tuple(values), error, "float")

    digits = int(math.ceil(-math.log10(tol))) + EVALUATION["guard_digits"]
    while digits <= EVALUATION["max_dps"]:
        with mpmath.workdps(digits):
            coarse = [c.mp_value(mpmath.mpc(z), tol / 4) for c in curve.components]
        with mpmath.workdps(digits + 15):
            fine = [c.mp_value(mpmath.mpc(z), tol / 4) for c in curve.components]
            spread = max(abs(a[0] - b[0]) for a, b in zip(coarse, fine))
            error = float(spread) + max(b[1] for b in fine)
            if error <= tol:
                return CurveValue(tuple(v for v, _ in fine), error, f"mp:{digits + 15}")
        digits *= 2
    raise PrecisionError(f"could not evaluate {curve.name} at {z} to {tol:.1e}")


# ---------------------------------------------------------------------------
# Pullbacks of sections
# ---------------------------------------------------------------------------
class Pullback:
    """phi*(s): the raw value s(lift(z)) and the metric norm ||s||(phi(z))."""

    def __init__(self, curve: EntireCurve, section):
        if section.n_vars != curve.n_vars:
            raise InputError(
                f"section has {section.n_vars} variables but {curve.name} lives in "
                f"{curve.n_vars}-dimensional homogeneous space"
            )
        self.curve = curve
        self.section = section

    def __call__(self, z):
        return self.raw(z)

    def raw(self, z):
        return self.section.raw(self.curve.lift(z))

    def norm(self, z):
        return self.section.norm_at(self.curve.lift(z))

    def log_norm(self, z):
        values = np.abs(self.raw(z))
        with np.errstate(divide="ignore"):
            return np.log(values) - 0.5 * self.section.degree * self.curve.log_weight(z)


def pullback(curve: EntireCurve, section) -> Pullback:
    return Pullback(curve, section)


# ---------------------------------------------------------------------------
# Construction and configuration
# ---------------------------------------------------------------------------
def build_rational_curve(
    height_budget: int,
    decay: str | int = "factorial",
    pattern: str = "all",
    name: str = "interpolation",
) -> EntireCurve:
    """phi(z) = (z, f(z)) with f the Newton series through the rational nodes."""
    if height_budget < 1:
        raise InputError(f"height_budget must be >= 1, got {height_budget!r}")
    series = NewtonSeriesComponent(decay=decay, pattern=pattern, height_budget=height_budget)
    return EntireCurve(name, "affine", (ExpressionComponent("z"), series), dimension=2)


def _component_from_config(item) -> ExpressionComponent | NewtonSeriesComponent:
    if isinstance(item, str):
        return ExpressionComponent(item)
    if isinstance(item, dict):
        kind = item.get("series")
        if kind != "newton":
            raise ConfigError(f"unknown series component {kind!r}; only 'newton' is supported")
        unknown = set(item) - {"series", "decay", "pattern", "max_terms", "height_budget"}
        if unknown:
            raise ConfigError(f"unknown series keys: {', '.join(sorted(unknown))}")
        return NewtonSeriesComponent(
            decay=item.get("decay", "factorial"),
            pattern=item.get("pattern", "all"),
            max_terms=item.get("max_terms"),
            height_budget=item.get("height_budget", 1000),
        )
    raise ConfigError(f"component must be a string or a table, got {type(item).__name__}")


def load_curve(config: dict) -> EntireCurve:
    """Build an EntireCurve from a parsed curve config (see README for the grammar)."""
    unknown = set(config) - {"name", "kind", "dimension", "components", "description"}
    if unknown:
        raise ConfigError(f"unknown curve keys: {', '.join(sorted(unknown))}")
    try:
        items = config["components"]
        kind = config["kind"]
    except KeyError as exc:
        raise ConfigError(f"curve config is missing {exc.args[0]!r}") from exc
    if not isinstance(items, list) or not items:
        raise ConfigError("components must be a non-empty array")
    components = tuple(_component_from_config(item) for item in items)
    default_dim = len(components) - (1 if kind == "projective" else 0)
    curve = EntireCurve(
        name=config.get("name", "curve"),
        kind=kind,
        components=components,
        dimension=int(config.get("dimension", default_dim)),
    )
    if kind == "projective" and all(
        isinstance(c, ExpressionComponent) and c.expr == 0 for c in components
    ):
        raise ConfigError("projective components may not all be identically zero")
    return curve


def zariski_rank_check(
    curve: EntireCurve, degree: int = 4, samples: int = 100, radius: float = 6.0, seed: int = 0
) -> float:
    """Smallest normalised singular value of the matrix of z^i f^j (i + j <= degree).

    Applies to planar affine curves (z, f). A value far from zero means no polynomial
    relation of that degree holds at the sample points.
    """
    if curve.kind != "affine" or curve.ambient_dim != 2:
        raise InputError("the rank check applies to planar affine curves")
    z = halton_disk(samples, radius, seed=seed)
    x, y = curve.components[0](z), curve.components[1](z)
    columns = [x**i * y**j for i in range(degree + 1) for j in range(degree + 1 - i)]
    matrix = np.stack(columns, axis=1)
    matrix = matrix / np.linalg.norm(matrix, axis=0)
    singular = np.linalg.svd(matrix, compute_uv=False)
    return float(singular[-1] / singular[0])
