"""Regularized limits and integrals of polyhomogeneous functions on (0, inf).

A function is described by a :class:`PhgSample`: a numeric evaluator plus
finite expansions ``sum a x^alpha log^k x`` at both endpoints.  Regularized
integrals subtract the expansions, integrate the remainder numerically and add
back the exact finite parts of the subtracted pieces.  Mellin transforms of
single terms are kept as exact rational functions (:class:`PolarSum`).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy import integrate



def _quiet_quad(*args, **kwargs):
    # tolerances sit near machine precision; convergence is judged from the error estimate
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return integrate.quad(*args, **kwargs)

QUAD_TOL = 1e-10


class QuadratureError(RuntimeError):
    """Adaptive quadrature missed its target; carries the achieved estimate."""

    def __init__(self, message: str, error_estimate: float):
        super().__init__(f"{message} (achieved error estimate {error_estimate:.3g})")
        self.error_estimate = error_estimate


class IllConditionedFit(ValueError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**9)
    return Fraction(x)


# ---------------------------------------------------------------------------
# expansions


@dataclass(frozen=True)
class ExpTerm:
    alpha: Fraction
    k: int
    coeff: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", _frac(self.alpha))
        if self.k < 0:
            raise ValueError("log power must be non-negative")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.coeff * x ** float(self.alpha) * np.log(x) ** self.k


@dataclass(frozen=True)
class Expansion:
    """Finite expansion at ``endpoint`` with error ``O(x^remainder_order)``.

    ``remainder_order=None`` means the remainder is smaller than every power
    (exponential decay at infinity, or an exact expansion).
    """

    terms: tuple = ()
    remainder_order: Fraction | None = None
    endpoint: str = "zero"

    def __post_init__(self):
        terms = tuple(t if isinstance(t, ExpTerm) else ExpTerm(*t) for t in self.terms)
        object.__setattr__(self, "terms", terms)
        if self.endpoint not in ("zero", "infinity"):
            raise ValueError("endpoint must be 'zero' or 'infinity'")
        keys = [(t.alpha, t.k) for t in terms]
        if len(set(keys)) != len(keys):
            raise ValueError("at most one term per (alpha, k)")
        if self.remainder_order is not None:
            r = _frac(self.remainder_order)
            object.__setattr__(self, "remainder_order", r)
            for t in terms:
                bad = t.alpha >= r if self.endpoint == "zero" else t.alpha <= r
                if bad:
                    raise ValueError(f"term x^{t.alpha} is not above the remainder order {r}")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for t in self.terms:
            out = out + t(x)
        return out

    def coefficient(self, alpha, k: int = 0) -> float:
        alpha = _frac(alpha)
        return sum(t.coeff for t in self.terms if t.alpha == alpha and t.k == k)

    def max_log(self) -> int:
        return max((t.k for t in self.terms), default=-1)


class RegularizedLimit(NamedTuple):
    value: float
    log_present: bool


def regularized_limit(e: Expansion, strict: bool = False) -> RegularizedLimit:
    """Constant term of an expansion; flags ``log^k`` terms at exponent zero."""
    zero_terms = [t for t in e.terms if t.alpha == 0]
    log_present = any(t.k > 0 for t in zero_terms)
    if strict and log_present:
        raise ValueError("expansion carries log terms at exponent 0")
    return RegularizedLimit(sum(t.coeff for t in zero_terms if t.k == 0), log_present)


# ---------------------------------------------------------------------------
# exact Mellin transforms of single terms


@dataclass(frozen=True)
class MeromorphicValue:
    location: complex
    principal: tuple  # (c_-p, ..., c_-1)
    regular_jet: tuple  # (c_0, c_1, ...)


@dataclass
class PolarSum:
    """Rational function ``sum c / (s - p)^n`` stored as ``{(p, n): c}``."""

    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {k: v for k, v in self.terms.items() if v != 0}

    def __add__(self, other: "PolarSum") -> "PolarSum":
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, 0) + c
        return PolarSum(out)

    def __neg__(self) -> "PolarSum":
        return PolarSum({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "PolarSum") -> "PolarSum":
        return self + (-other)

    def scale(self, a) -> "PolarSum":
        return PolarSum({k: a * c for k, c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def poles(self) -> list:
        return sorted({p for p, _ in self.terms})

    def __call__(self, s):
        return sum(c / (s - complex(p) if isinstance(s, complex) else s - float(p)) ** n
                   for (p, n), c in self.terms.items())

    def expand_at(self, s0, n_regular: int = 2) -> MeromorphicValue:
        """Laurent development at ``s0``: principal part and ``n_regular`` Taylor terms.

        Coefficients stay exact when ``s0`` and all coefficients are rational.
        """
        s0 = _frac(s0) if not isinstance(s0, (float, complex)) else s0
        order = max((n for (p, n) in self.terms if p == s0), default=0)
        principal = [0] * order
        regular = [0] * n_regular
        for (p, n), c in self.terms.items():
            if p == s0:
                principal[order - n] += c
                continue
            d = s0 - p
            # c (d + h)^-n = c sum_j binom(-n, j) d^(-n-j) h^j
            for j in range(n_regular):
                binom = (-1) ** j * math.comb(n + j - 1, j)
                regular[j] += c * binom * d ** (-n - j)
        return MeromorphicValue(s0, tuple(principal), tuple(regular))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (p, n), c in sorted(self.terms.items()):
            den = "s" if p == 0 else f"(s{'-' if p > 0 else '+'}{abs(p)})"
            parts.append(f"{c}/{den}" + (f"^{n}" if n > 1 else ""))
        return " + ".join(parts)


def mellin_term(alpha, k: int, side: str = "unit_interval") -> PolarSum:
    """Continued Mellin transform of ``x^alpha log^k x`` over (0,1) or (1,inf).

    ``int_0^1 x^(alpha+s-1) log^k x dx = (-1)^k k! / (alpha+s)^(k+1)``; the
    tail integral is the negative of the same rational function.
    """
    if k < 0:
        raise ValueError("log power must be non-negative")
    c = Fraction((-1) ** k * math.factorial(k))
    if side == "tail":
        c = -c
    elif side != "unit_interval":
        raise ValueError("side must be 'unit_interval' or 'tail'")
    return PolarSum({(-_frac(alpha), k + 1): c})


def reg_int_zero_check(alpha, k: int) -> PolarSum:
    """Sum of the two continued half-line Mellin transforms; identically zero."""
    return mellin_term(alpha, k, "unit_interval") + mellin_term(alpha, k, "tail")


def reg_int_zero_numeric(alpha, k: int, s: float) -> float:
    """Split sum with the convergent half computed by quadrature.

    For ``alpha + s > 0`` the (0,1) integral converges and is integrated
    numerically; otherwise the tail is.  The other half uses the continued
    closed form.
    """
    a = float(alpha) + s
    if a == 0:
        raise ValueError("s sits on the pole -alpha")
    closed = (-1) ** k * math.factorial(k) / a ** (k + 1)
    if a > 0:
        # x = exp(-u): int_0^inf exp(-a u) (-u)^k du
        val, _ = _quiet_quad(lambda u: math.exp(-a * u) * (-u) ** k, 0, np.inf,
                                epsabs=1e-14, epsrel=1e-14, limit=200)
        return val - closed
    val, _ = _quiet_quad(lambda u: math.exp(a * u) * u ** k, 0, np.inf,
                            epsabs=1e-14, epsrel=1e-14, limit=200)
    return closed + val


# ---------------------------------------------------------------------------
# regularized integrals


def _antiderivative(alpha: Fraction, k: int, x: float) -> float:
    """Antiderivative of ``x^alpha log^k x`` whose regularized limits at 0 and inf vanish."""
    lx = math.log(x)
    if alpha == -1:
        return lx ** (k + 1) / (k + 1)
    a1 = float(alpha) + 1.0
    acc = 0.0
    for j in range(k + 1):
        acc += (-1) ** j * math.factorial(k) / math.factorial(k - j) * lx ** (k - j) / a1 ** (j + 1)
    return x ** a1 * acc


def finite_part_zero(e: Expansion, c: float) -> float:
    """``LIM_{eps->0} int_eps^c`` of the expansion terms."""
    return sum(t.coeff * _antiderivative(t.alpha, t.k, c) for t in e.terms)


def finite_part_infinity(e: Expansion, c: float) -> float:
    """``LIM_{R->inf} int_c^R`` of the expansion terms."""
    return -sum(t.coeff * _antiderivative(t.alpha, t.k, c) for t in e.terms)


@dataclass
class PhgSample:
    evaluator: Callable[[float], float]
    at_zero: Expansion = field(default_factory=lambda: Expansion((), None, "zero"))
    at_infinity: Expansion = field(default_factory=lambda: Expansion((), None, "infinity"))
    label: str = ""

    def __post_init__(self):
        if self.at_zero.endpoint != "zero" or self.at_infinity.endpoint != "infinity":
            raise ValueError("expansions attached to the wrong endpoints")

    def __call__(self, x):
        return self.evaluator(x)

    def remainder_zero(self, x: float) -> float:
        return self.evaluator(x) - float(self.at_zero(x))

    def remainder_infinity(self, x: float) -> float:
        return self.evaluator(x) - float(self.at_infinity(x))

    def validate(self, n: int = 12, growth: float = 1e3) -> bool:
        """Check the declared remainder orders on geometric grids.

        ``|f - E| / x^r`` must stay bounded (within ``growth`` of its value
        at the grid point nearest to 1) as the endpoint is approached.
        """
        for exp, grid, rem in (
            (self.at_zero, np.geomspace(1e-4, 1e-1, n), self.remainder_zero),
            (self.at_infinity, np.geomspace(1e1, 1e4, n), self.remainder_infinity),
        ):
            if exp.remainder_order is None:
                continue
            r = float(exp.remainder_order)
            # points where the remainder sits below float noise carry no information
            grid = [x for x in grid if abs(rem(x)) > 1e3 * np.finfo(float).eps * abs(self.evaluator(x))]
            if len(grid) < 3:
                continue
            ratios = np.array([abs(rem(x)) / x ** r for x in grid])
            ref = ratios[-1] if exp.endpoint == "zero" else ratios[0]
            if not np.all(np.isfinite(ratios)) or ratios.max() > growth * max(ref, 1e-300) + 1e-6:
                return False
        return True

    def rescaled(self, lam: float) -> "PhgSample":
        """The sample ``x -> f(lam x)`` with transformed expansions."""
        def transform(e: Expansion) -> Expansion:
            acc: dict = {}
            ll = math.log(lam)
            for t in e.terms:
                base = t.coeff * lam ** float(t.alpha)
                for j in range(t.k + 1):
                    key = (t.alpha, j)
                    acc[key] = acc.get(key, 0.0) + base * math.comb(t.k, j) * ll ** (t.k - j)
            terms = tuple(ExpTerm(a, j, c) for (a, j), c in sorted(acc.items()))
            return Expansion(terms, e.remainder_order, e.endpoint)

        f = self.evaluator
        return PhgSample(lambda x: f(lam * x), transform(self.at_zero),
                         transform(self.at_infinity), f"{self.label}(lam={lam:g})")


class RegIntegral(NamedTuple):
    value: float
    error_estimate: float


def _remainder_scale(rem, grid, r):
    vals = [abs(rem(x)) / x ** r for x in grid]
    return max(vals) if vals else 0.0


def _quad(fn, a, b, tol):
    if a > 0 and math.isfinite(b):
        # long ranges are integrated in the log variable x = e^u
        val, err = _quiet_quad(lambda u: fn(math.exp(u)) * math.exp(u), math.log(a), math.log(b),
                                  epsabs=tol, epsrel=1e-13, limit=500)
    else:
        val, err = _quiet_quad(fn, a, b, epsabs=tol, epsrel=1e-13, limit=500)
    if not math.isfinite(val) or err > 100 * tol:
        raise QuadratureError(f"quadrature on [{a:g}, {b:g}] did not converge", err)
    return val, err


def regularized_integral(f: PhgSample, split: float = 1.0, tol: float = QUAD_TOL) -> RegIntegral:
    """``LIM_{eps->0} LIM_{R->inf} int_eps^R f(x) dx``."""
    tol_piece = tol / 10
    err_total = 0.0
    # (0, split]: integrate the remainder down to delta, bound the rest by its order
    r0 = f.at_zero.remainder_order
    lo = 0.0
    if r0 is not None:
        if r0 <= -1:
            raise ValueError("remainder at 0 must be integrable (order > -1)")
        grid = np.geomspace(split * 1e-3, split * 1e-1, 6)
        C = _remainder_scale(f.remainder_zero, grid, float(r0))
        a1 = float(r0) + 1.0
        lo = min(split * 1e-3, (tol_piece * a1 / max(C, 1e-300)) ** (1.0 / a1))
        err_total += C * lo ** a1 / a1
    elif f.at_zero.terms:
        lo = 0.0
    left, e1 = _quad(f.remainder_zero, lo, split, tol_piece)
    # [split, inf)
    rinf = f.at_infinity.remainder_order
    hi = np.inf
    if rinf is not None:
        if rinf >= -1:
            raise ValueError("remainder at infinity must be integrable (order < -1)")
        grid = np.geomspace(split * 10, split * 1e3, 6)
        C = _remainder_scale(f.remainder_infinity, grid, float(rinf))
        a1 = -(float(rinf) + 1.0)
        hi = max(split * 1e3, (C / (tol_piece * a1)) ** (1.0 / a1))
        err_total += C * hi ** (-a1) / a1
    right, e2 = _quad(f.remainder_infinity, split, hi, tol_piece)
    value = left + right + finite_part_zero(f.at_zero, split) + finite_part_infinity(f.at_infinity, split)
    return RegIntegral(value, err_total + e1 + e2)


def log_change_coefficients(f: PhgSample) -> list[float]:
    """``c_l`` in ``int f(lam x) = (int f + sum_l c_l log^l lam) / lam``.

    Only the ``x^-1 log^j x`` terms contribute: at an endpoint the integral
    of such a term between ``y`` and ``lam y`` has constant part
    ``log^(j+1)(lam) / (j+1)``.  Infinity enters with a plus sign, zero with
    a minus sign.
    """
    n = max(f.at_zero.max_log(), f.at_infinity.max_log()) + 1
    c = [0.0] * n
    for t in f.at_infinity.terms:
        if t.alpha == -1:
            c[t.k] += t.coeff / (t.k + 1)
    for t in f.at_zero.terms:
        if t.alpha == -1:
            c[t.k] -= t.coeff / (t.k + 1)
    return c


class ChangeOfVariable(NamedTuple):
    value: float
    log_coeffs: list
    direct: float
    formula: float
    error_estimate: float


class DualPathMismatch(ArithmeticError):
    def __init__(self, direct: float, formula: float, tol: float):
        super().__init__(f"direct {direct!r} and formula {formula!r} differ by more than {tol:g}")
        self.direct = direct
        self.formula = formula


def change_of_variable(f: PhgSample, lam: float, tol: float = 1e-8) -> ChangeOfVariable:
    """``int f(lam x) dx`` computed directly and by the rescaling rule; both must agree."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    direct = regularized_integral(f.rescaled(lam))
    base = regularized_integral(f)
    coeffs = log_change_coefficients(f)
    ll = math.log(lam)
    formula = (base.value + sum(c * ll ** (i + 1) for i, c in enumerate(coeffs))) / lam
    if abs(direct.value - formula) > tol:
        raise DualPathMismatch(direct.value, formula, tol)
    return ChangeOfVariable(formula, coeffs, direct.value, formula,
                            direct.error_estimate + base.error_estimate / lam)


# ---------------------------------------------------------------------------
# finite part in a complex regularization parameter


def sigma_meromorphic(f: PhgSample) -> tuple[PolarSum, float]:
    """``sigma -> int_0^1 x^sigma f(x) dx`` as exact polar part plus a holomorphic constant.

    Returns ``(polar, c)`` where the continued function equals
    ``polar(sigma) + int_0^1 x^sigma (f - E0)`` and ``c`` is that remainder
    integral at ``sigma = 0``.
    """
    polar = PolarSum()
    for t in f.at_zero.terms:
        # x^(sigma + alpha) = x^((alpha+1) + sigma - 1)
        polar = polar + mellin_term(t.alpha + 1, t.k).scale(t.coeff)
    r0 = f.at_zero.remainder_order
    lo = 0.0
    if r0 is not None:
        grid = np.geomspace(1e-3, 1e-1, 6)
        C = _remainder_scale(f.remainder_zero, grid, float(r0))
        a1 = float(r0) + 1.0
        lo = min(1e-3, (QUAD_TOL / 10 * a1 / max(C, 1e-300)) ** (1.0 / a1))
    c, _ = _quad(f.remainder_zero, lo, 1.0, QUAD_TOL / 10)
    return polar, c


def sigma_finite_part(f: PhgSample) -> float:
    """Finite part at ``sigma = 0`` of ``int_0^1 x^sigma f(x) dx``."""
    polar, c = sigma_meromorphic(f)
    return float(polar.expand_at(0, 1).regular_jet[0]) + c


def epsilon_expansion(f: PhgSample, eps: float | None = None) -> Expansion:
    """Expansion of ``eps -> int_eps^1 f`` as ``eps -> 0``.

    The divergent and vanishing terms come from the expansion of ``f``; the
    constant is fixed by one direct quadrature of ``f`` over ``[eps, 1]``.
    """
    terms: dict = {}
    for t in f.at_zero.terms:
        # int_eps^1 x^a log^k = F(1) - F(eps); record -F(eps) termwise
        if t.alpha == -1:
            key = (Fraction(0), t.k + 1)
            terms[key] = terms.get(key, 0.0) - t.coeff / (t.k + 1)
            continue
        a1 = t.alpha + 1
        for j in range(t.k + 1):
            key = (a1, t.k - j)
            c = -t.coeff * (-1) ** j * math.factorial(t.k) / math.factorial(t.k - j) / float(a1) ** (j + 1)
            terms[key] = terms.get(key, 0.0) + c
    r0 = f.at_zero.remainder_order
    if eps is None:
        if r0 is None:
            eps = 0.25  # exact expansion: every eps gives the same constant
        else:
            # balance the dropped remainder against roundoff in the divergent terms
            grid = np.geomspace(1e-3, 1e-1, 6)
            C = _remainder_scale(f.remainder_zero, grid, float(r0))
            a1 = float(r0) + 1.0
            cands = np.geomspace(1e-9, 1e-1, 161)
            size = np.array([sum(abs(c) * e ** float(a) * abs(math.log(e)) ** k
                                 for (a, k), c in terms.items()) for e in cands])
            cost = C * cands ** a1 / a1 + 4 * np.finfo(float).eps * (size + 1.0)
            eps = float(cands[int(np.argmin(cost))])
    total, _ = _quiet_quad(f.evaluator, eps, 1.0, epsabs=1e-13, epsrel=1e-14, limit=1000,
                              points=np.geomspace(eps, 1.0, 12)[1:-1])
    divergent = sum(c * eps ** float(a) * math.log(eps) ** k for (a, k), c in terms.items())
    const = total - divergent
    terms[(Fraction(0), 0)] = terms.get((Fraction(0), 0), 0.0) + const
    order = None if r0 is None else r0 + 1
    out = tuple(ExpTerm(a, k, c) for (a, k), c in sorted(terms.items()) if c != 0.0)
    return Expansion(out, order, "zero")


def epsilon_limit(f: PhgSample, eps: float | None = None) -> float:
    """``LIM_{eps->0} int_eps^1 f``."""
    return regularized_limit(epsilon_expansion(f, eps)).value


# ---------------------------------------------------------------------------
# least-squares extraction of expansion coefficients


class ExpansionFit(NamedTuple):
    expansion: Expansion
    residual: float
    condition: float


def fit_expansion(samples: Sequence[tuple[float, float]], exponents: Sequence[tuple],
                  endpoint: str = "zero", max_condition: float = 1e12,
                  remainder_order=None) -> ExpansionFit:
    """Least-squares coefficients of ``sum a x^alpha log^k x`` through ``samples``."""
    keys = [(_frac(a), int(k)) for a, k in exponents]
    if len(set(keys)) != len(keys):
        raise ValueError("duplicate exponents in the fit basis")
    xs = np.array([s[0] for s in samples], dtype=float)
    ys = np.array([s[1] for s in samples], dtype=float)
    if len(xs) < len(keys):
        raise ValueError("fewer samples than unknowns")
    A = np.column_stack([xs ** float(a) * np.log(xs) ** k for a, k in keys])
    scale = np.linalg.norm(A, axis=0)
    As = A / scale
    cond = float(np.linalg.cond(As))
    if not math.isfinite(cond) or cond > max_condition:
        raise IllConditionedFit(f"fit basis condition number {cond:.3g} exceeds {max_condition:.3g}")
    coef, *_ = np.linalg.lstsq(As, ys, rcond=None)
    coef = coef / scale
    resid = float(np.max(np.abs(A @ coef - ys))) if len(ys) else 0.0
    terms = tuple(ExpTerm(a, k, float(c)) for (a, k), c in zip(keys, coef))
    return ExpansionFit(Expansion(terms, remainder_order, endpoint), resid, cond)
