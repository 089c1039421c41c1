"""Spectral zeta functions, regular values at zero and analytic torsion.

Zeta functions are continued through the split of the Mellin integral at
``t = 1``: the short-time expansion is subtracted below 1 and the long-time
expansion above 1.  The subtracted pieces contribute an exact rational
function of ``s`` (a :class:`PolarSum`); the remainders are integrated once
on a fixed grid in ``u = log t`` so that any ``s`` and its derivatives cost a
weighted sum.  Division by ``Gamma(s)`` near ``s = 0`` is done on Laurent jets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy import special

from .kernels import dirichlet_sum
from .regcalc import (
    Expansion,
    MeromorphicValue,
    PhgSample,
    PolarSum,
    mellin_term,
    reg_int_zero_check,
    reg_int_zero_numeric,
    regularized_integral,
)
from .spectra import Block, SpectralModel, cone_trace

EULER_GAMMA = float(np.euler_gamma)
HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# logT = TORSION_SIGN * 1/2 sum (-1)^k k zeta'_k(0); anchored by the twisted
# circle, whose torsion must be |1 - e^{i hol}| = 2 sin(hol/2).
TORSION_SIGN = 1
# The L2 norm on the determinant line takes sqrt(det Gram_k)^((-1)^(k+1)):
# degree-0 classes enter inverted.  Anchored by T(L) * |mu| being constant
# along the trivial circle family.
DET_LINE_ORIENTATION = "degree k enters with exponent (-1)^(k+1)"

_PANEL_WIDTH = 0.5
_PANEL_NODES = 24
_EXP_CUT = 46.0


class ContinuationError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# Hurwitz zeta by Euler-Maclaurin


def hurwitz_zeta(s: float, a: float, n_direct: int = 20, n_bernoulli: int = 12) -> float:
    """``sum_{n>=0} (n+a)^-s`` continued to all real ``s != 1``.

    Euler-Maclaurin after ``n_direct`` explicit terms; the neglected term is
    bounded by the next Bernoulli correction, which is far below double
    precision for moderate ``s``.
    """
    if a <= 0:
        raise ValueError("a must be positive")
    if s == 1:
        raise ValueError("pole at s = 1")
    N = n_direct
    x = N + a
    acc = math.fsum((n + a) ** -s for n in range(N))
    acc += x ** (1.0 - s) / (s - 1.0) + 0.5 * x ** -s
    bern = special.bernoulli(2 * n_bernoulli)
    rising = s  # s (s+1) ... (s + 2j - 2)
    for j in range(1, n_bernoulli + 1):
        acc += bern[2 * j] / math.factorial(2 * j) * rising * x ** (-s - 2 * j + 1)
        rising *= (s + 2 * j - 1) * (s + 2 * j)
    return acc


def hurwitz_zeta_prime_at_zero(a: float) -> float:
    """``d/ds zeta_H(s, a)`` at ``s = 0`` (Lerch): ``log Gamma(a) - log(2 pi)/2``."""
    return math.lgamma(a) - HALF_LOG_2PI


def hurwitz_zeta_at_zero(a: float) -> float:
    return 0.5 - a


def circle_zeta_oracle(length: float, holonomy: float, s: float) -> float:
    """Zeta of the twisted circle from Hurwitz values, zero mode excluded."""
    scale = (length / (2.0 * math.pi)) ** (2.0 * s)
    a = holonomy / (2.0 * math.pi)
    if a == 0.0:
        return 2.0 * scale * hurwitz_zeta(2.0 * s, 1.0)
    return scale * (hurwitz_zeta(2.0 * s, a) + hurwitz_zeta(2.0 * s, 1.0 - a))


def circle_dzeta0_oracle(length: float, holonomy: float) -> float:
    """``zeta'(0)`` of the twisted circle (trivial bundle: zero mode excluded)."""
    a = holonomy / (2.0 * math.pi)
    ll = 2.0 * math.log(length / (2.0 * math.pi))
    if a == 0.0:
        return ll * 2.0 * hurwitz_zeta_at_zero(1.0) + 4.0 * hurwitz_zeta_prime_at_zero(1.0)
    z0 = hurwitz_zeta_at_zero(a) + hurwitz_zeta_at_zero(1.0 - a)
    return ll * z0 + 2.0 * (hurwitz_zeta_prime_at_zero(a) + hurwitz_zeta_prime_at_zero(1.0 - a))


# ---------------------------------------------------------------------------
# Laurent jets


def reciprocal_gamma_series(n: int) -> np.ndarray:
    """Taylor coefficients ``g_0..g_{n-1}`` of ``1/Gamma(s)`` at ``s = 0``.

    ``1/Gamma(s) = s exp(gamma s - sum_{k>=2} (-1)^k zeta(k) s^k / k)``.
    """
    m = max(n, 2)
    log_series = np.zeros(m)
    log_series[1] = EULER_GAMMA
    for k in range(2, m):
        log_series[k] = -((-1) ** k) * special.zeta(k) / k
    # exp of a power series with zero constant term
    e = np.zeros(m)
    e[0] = 1.0
    for j in range(1, m):
        e[j] = sum(i * log_series[i] * e[j - i] for i in range(1, j + 1)) / j
    g = np.zeros(m)
    g[1:] = e[:-1]
    return g[:n]


def divide_by_gamma_at_zero(principal: Sequence, regular: Sequence) -> MeromorphicValue:
    """Laurent jet of ``F(s)/Gamma(s)`` at 0 from that of ``F``.

    ``F = sum_{j>=-p} c_j s^j``; returns the principal part and ``(d_0, d_1)``.
    """
    p = len(principal)
    c = {j: float(v) for j, v in zip(range(-p, 0), principal)}
    c.update({j: float(v) for j, v in enumerate(regular)})
    g = reciprocal_gamma_series(p + 3)
    d = {}
    for m in range(min(-p + 1, 0), 2):
        d[m] = sum(cj * g[m - j] for j, cj in c.items() if 0 <= m - j < len(g))
    princ = tuple(d[m] for m in range(-p + 1, 0))
    return MeromorphicValue(0, princ, (d[0], d[1]))


# ---------------------------------------------------------------------------
# Mellin sources


def _log_grid(u_lo: float, u_hi: float, nodes: int = _PANEL_NODES):
    if u_hi <= u_lo:
        return np.zeros(0), np.zeros(0)
    panels = max(1, int(math.ceil((u_hi - u_lo) / _PANEL_WIDTH)))
    x, w = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(u_lo, u_hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    return (mid[:, None] + half[:, None] * x).ravel(), (half[:, None] * w).ravel()


@dataclass
class MellinSource:
    """One Mellin-split integrand ``f = Tr - dim ker``.

    ``short`` and ``long`` are the expansions of ``f`` subtracted below and
    above ``t = 1``; ``rem_short``/``rem_long`` evaluate ``f`` minus them.
    """

    short: Expansion
    long: Expansion
    rem_short: Callable
    rem_long: Callable
    u_lo: float
    u_hi: float
    nodes: int = _PANEL_NODES
    polar: PolarSum = field(init=False)

    def __post_init__(self):
        polar = PolarSum()
        for t in self.short.terms:
            polar = polar + mellin_term(t.alpha, t.k, "unit_interval").scale(t.coeff)
        for t in self.long.terms:
            polar = polar + mellin_term(t.alpha, t.k, "tail").scale(t.coeff)
        self.polar = polar
        u0, w0 = _log_grid(self.u_lo, 0.0, self.nodes)
        u1, w1 = _log_grid(0.0, self.u_hi, self.nodes)
        self._u = np.concatenate([u0, u1])
        r0 = np.asarray(self.rem_short(np.exp(u0)), dtype=float) if u0.size else np.zeros(0)
        r1 = np.asarray(self.rem_long(np.exp(u1)), dtype=float) if u1.size else np.zeros(0)
        self._wr = np.concatenate([w0 * r0, w1 * r1])
        if not np.all(np.isfinite(self._wr)):
            raise ContinuationError("remainder is not finite on the quadrature grid")

    def holomorphic(self, s: float, derivative: int = 0) -> float:
        """``d^n/ds^n`` of the remainder integrals."""
        return float(np.sum(self._u ** derivative * np.exp(s * self._u) * self._wr))

    def mellin(self, s: float) -> float:
        """``I_0(s) + I_inf(s)``."""
        return float(self.polar(s)) + self.holomorphic(s)

    def laurent_at_zero(self) -> tuple:
        jet = self.polar.expand_at(0, 2)
        reg = (float(jet.regular_jet[0]) + self.holomorphic(0.0),
               float(jet.regular_jet[1]) + self.holomorphic(0.0, 1))
        return tuple(float(c) for c in jet.principal), reg


def _u_hi(lambda1: float, s_max: float = 6.0) -> float:
    if not math.isfinite(lambda1) or lambda1 <= 0:
        return 0.0
    T = _EXP_CUT / lambda1
    for _ in range(50):
        T_new = (_EXP_CUT + max(s_max - 1.0, 0.0) * math.log(max(T, 1.0))) / lambda1
        if abs(T_new - T) < 1e-9 * T:
            break
        T = T_new
    return math.log(max(T, 1.0)) + 0.5


def block_source(block: Block, nodes: int = _PANEL_NODES) -> MellinSource:
    terms, order = block.expansion_terms()
    K = block.kernel_dim
    terms = dict(terms)
    terms[Fraction(0)] = terms.get(Fraction(0), 0.0) - K
    short = Expansion(tuple((p, 0, c) for p, c in sorted(terms.items()) if c != 0.0), order, "zero")
    t_neg = block.negligible_below()
    u_lo = math.log(t_neg) if math.isfinite(t_neg) else -1.0
    return MellinSource(short, Expansion((), None, "infinity"), block.remainder,
                        block.positive_heat, min(u_lo, -0.5), _u_hi(block.lambda1()), nodes)


@dataclass
class HeatTraceExpansion:
    """Expansions of a heat trace at ``t -> 0`` and ``t -> inf``."""

    short_time: Expansion
    long_time: Expansion
    kernel_dim: float = 0.0

    def __post_init__(self):
        const = self.long_time.coefficient(0, 0)
        if self.long_time.terms and abs(const - self.kernel_dim) > 1e-12:
            raise ValueError("long-time constant term must equal the kernel dimension")

    def source(self, trace: Callable, s_window: tuple = (-0.5, 0.5),
               rem_short: Callable | None = None, rem_long: Callable | None = None) -> MellinSource:
        """Mellin source for ``trace - kernel_dim``.

        Grid ends are chosen from the declared remainder orders so that the
        truncated remainder integrals are below ``e^-46`` for ``s`` in
        ``s_window``.
        """
        K = self.kernel_dim

        def shifted(e: Expansion) -> Expansion:
            terms = [(t.alpha, t.k, t.coeff - (K if (t.alpha == 0 and t.k == 0) else 0.0))
                     for t in e.terms]
            if not any(t.alpha == 0 and t.k == 0 for t in e.terms) and K:
                terms.append((Fraction(0), 0, -K))
            return Expansion(tuple(x for x in terms if x[2] != 0.0), e.remainder_order, e.endpoint)

        short, long = shifted(self.short_time), shifted(self.long_time)
        if rem_short is None:
            rem_short = lambda t: np.asarray(trace(t)) - K - short(t)  # noqa: E731
        if rem_long is None:
            rem_long = lambda t: np.asarray(trace(t)) - K - long(t)  # noqa: E731
        r0 = short.remainder_order
        rinf = long.remainder_order
        u_lo = -_EXP_CUT / max(float(r0) + s_window[0], 0.05) if r0 is not None else -1.0
        u_hi = _EXP_CUT / max(-float(rinf) - s_window[1], 0.05) if rinf is not None else 5.0
        return MellinSource(short, long, rem_short, rem_long, u_lo, u_hi)


# ---------------------------------------------------------------------------
# zeta functions


@dataclass
class ZetaFn:
    """``zeta(s) = (I_0(s) + I_inf(s)) / Gamma(s)`` summed over sources.

    ``finite`` holds closed-form pieces ``(lam, mult)``: for a finite
    spectrum the Mellin split sums to ``Gamma(s) sum m lam^-s`` exactly.
    """

    sources: list = field(default_factory=list)  # (coeff, MellinSource)
    finite: list = field(default_factory=list)  # (lam array, mult array)
    label: str = ""

    def __call__(self, s: float) -> float:
        s = float(s)
        if s <= 0 and s == int(s):
            if s == 0:
                lv = self.laurent_at_zero()
                if any(abs(c) > 0 for c in lv.principal):
                    raise ContinuationError("pole at s = 0")
                return lv.regular_jet[0]
            raise ContinuationError("evaluation at negative integers is not supported")
        total = 0.0
        rgamma = special.rgamma(s)
        for coeff, src in self.sources:
            if any(abs(float(p) - s) < 1e-14 for p in src.polar.poles()):
                raise ContinuationError(f"pole at s = {s}")
            total += coeff * src.mellin(s) * rgamma
        for lam, mult in self.finite:
            total += dirichlet_sum(lam, mult, s)
        return total

    def laurent_at_zero(self) -> MeromorphicValue:
        principal: list = []
        d0 = d1 = 0.0
        for coeff, src in self.sources:
            pr, reg = src.laurent_at_zero()
            mv = divide_by_gamma_at_zero(pr, reg)
            pr2 = list(mv.principal)
            if len(pr2) > len(principal):
                principal = [0.0] * (len(pr2) - len(principal)) + principal
            for i, c in enumerate(pr2):
                principal[len(principal) - len(pr2) + i] += coeff * c
            d0 += coeff * mv.regular_jet[0]
            d1 += coeff * mv.regular_jet[1]
        for lam, mult in self.finite:
            pos = lam > 0
            d0 += float(np.sum(mult[pos]))
            d1 -= float(np.sum(mult[pos] * np.log(lam[pos])))
        return MeromorphicValue(0, tuple(principal), (d0, d1))

    @property
    def at_zero(self) -> tuple:
        return zeta_reg_at_zero(self)

    @property
    def poles(self) -> list:
        out = []
        for coeff, src in self.sources:
            for p in src.polar.poles():
                jet = src.polar.scale(coeff).expand_at(p, 1)
                out.append(MeromorphicValue(p, jet.principal, ()))
        return out


def zeta_continue(model: SpectralModel, degree: int, nodes: int = _PANEL_NODES) -> ZetaFn:
    """Continued zeta function of ``Delta_k`` with zero modes excluded."""
    if not 0 <= degree <= model.dim:
        raise ValueError(f"degree {degree} outside 0..{model.dim}")
    z = ZetaFn(label=f"{model.label}[k={degree}]")
    for block in model.degrees[degree]:
        if block.is_finite():
            lam, mult = block.finite_spectrum()
            keep = lam > 0
            if keep.any():
                z.finite.append((lam[keep], mult[keep]))
        else:
            z.sources.append((1.0, block_source(block, nodes)))
    return z


def zeta_from_expansion(expansion: HeatTraceExpansion, trace: Callable, **kwargs) -> ZetaFn:
    return ZetaFn([(1.0, expansion.source(trace, **kwargs))], label="synthetic")


def zeta_reg_at_zero(z: ZetaFn) -> tuple:
    """Value and derivative at 0 of the regular part of ``zeta``."""
    lv = z.laurent_at_zero()
    return lv.regular_jet[0], lv.regular_jet[1]


def zeta_direct(model: SpectralModel, degree: int, s: float, lam_max: float = 4e4) -> float:
    """Dirichlet series ``sum m lam^-s`` over positive eigenvalues with a Weyl tail.

    The tail beyond ``lam_max`` is ``int N'(lam) lam^-s`` with the leading
    Weyl density read off the short-time coefficient ``a t^(-m/2)``.
    """
    lam, mult = model.eigenvalues(degree, lam_max)
    body = dirichlet_sum(lam, mult, s)
    if model.is_finite():
        return body
    m = model.dim
    lead = 0.0
    for b in model.degrees[degree]:
        terms, _ = b.expansion_terms()
        lead += terms.get(Fraction(-m, 2), 0.0)
    # N(lam) ~ lead lam^(m/2) / Gamma(m/2 + 1)
    dens = lead / math.gamma(m / 2 + 1) * (m / 2)
    tail = dens * lam_max ** (m / 2 - s) / (s - m / 2)
    return body + tail


# ---------------------------------------------------------------------------
# torsion


class DegreeZeta(NamedTuple):
    k: int
    zeta0: float
    dzeta0: float
    betti: int


@dataclass
class TorsionResult:
    per_degree: list
    logT: float
    convention: dict
    error_estimate: float = 0.0

    def to_dict(self) -> dict:
        return {
            "per_degree": [{"k": d.k, "zeta0": d.zeta0, "dzeta0": d.dzeta0, "betti": d.betti}
                           for d in self.per_degree],
            "logT": self.logT,
            "error_estimate": self.error_estimate,
            "convention": dict(self.convention),
        }


def torsion_convention() -> dict:
    return {"sign": TORSION_SIGN, "orientation": DET_LINE_ORIENTATION}


def log_torsion(model: SpectralModel, estimate_error: bool = False) -> TorsionResult:
    """``logT = 1/2 sum (-1)^k k zeta'_reg(0, Delta_k)``.

    With ``estimate_error`` the sum is repeated on a coarser Mellin grid and
    the difference is reported.
    """
    def assemble(nodes):
        per, acc = [], 0.0
        for k in range(model.dim + 1):
            z0, dz0 = zeta_reg_at_zero(zeta_continue(model, k, nodes))
            per.append(DegreeZeta(k, float(z0), float(dz0), model.betti[k]))
            acc += (-1) ** k * k * dz0
        return per, TORSION_SIGN * 0.5 * float(acc)

    per, logT = assemble(_PANEL_NODES)
    err = abs(logT - assemble(_PANEL_NODES - 6)[1]) if estimate_error else 0.0
    return TorsionResult(per, logT, torsion_convention(), err)


@dataclass
class DetLineElement:
    """Harmonic representatives per degree on a one-dimensional domain ``[0, length]``.

    ``reps[k]`` lists callables giving the coefficient functions of the
    representatives; Gram matrices are their ``L^2`` pairings.
    """

    length: float
    reps: dict = field(default_factory=dict)

    def gram(self, k: int) -> np.ndarray:
        fns = self.reps.get(k, [])
        n = len(fns)
        x, w = np.polynomial.legendre.leggauss(64)
        xs = 0.5 * self.length * (x + 1.0)
        ws = 0.5 * self.length * w
        vals = np.array([np.broadcast_to(np.asarray(f(xs), dtype=float), xs.shape) for f in fns]) \
            if n else np.zeros((0, xs.size))
        return (vals * ws) @ vals.T

    def l2_norm(self) -> float:
        log_norm = 0.0
        for k in sorted(self.reps):
            if not self.reps[k]:
                continue
            det = float(np.linalg.det(self.gram(k)))
            if not det > 1e-300:
                raise ArithmeticError(f"degenerate Gram matrix in degree {k}")
            log_norm += (-1) ** (k + 1) * 0.5 * math.log(det)
        return math.exp(log_norm)


def torsion_norm(model: SpectralModel, element: DetLineElement,
                 torsion: TorsionResult | None = None) -> float:
    """Ray-Singer norm ``T * |element|_{L2}``."""
    torsion = torsion or log_torsion(model)
    return math.exp(torsion.logT) * element.l2_norm()


def even_dim_vanishing(model: SpectralModel, s_samples: Sequence[float] = (2.0, 3.0)) -> dict:
    """Residuals of ``sum_j (-1)^j j zeta_j`` at samples and of its derivative at 0."""
    if model.dim % 2:
        raise ValueError("model must be even-dimensional")
    zetas = [zeta_continue(model, j) for j in range(model.dim + 1)]
    values = {}
    for s in s_samples:
        values[float(s)] = abs(sum((-1) ** j * j * z(s) for j, z in enumerate(zetas)))
    deriv = abs(sum((-1) ** j * j * zeta_reg_at_zero(z)[1] for j, z in enumerate(zetas)))
    return {"samples": values, "derivative_at_zero": deriv}


# ---------------------------------------------------------------------------
# model wedge


@dataclass(frozen=True)
class ConeTraceForm:
    """Degree-wise pointwise heat trace ``c_k t^(-(b+1)/2)`` on a cone of link dimension ``b``.

    ``log_coeffs[k]`` are the ``c_{k,l}`` (l >= 1) multiplying ``log^l t``
    in the regularized trace.
    """

    b: int
    c: tuple
    log_coeffs: tuple = ()

    def __post_init__(self):
        if self.b < 1:
            raise ValueError("link dimension must be at least 1")
        if len(self.c) != self.b + 2:
            raise ValueError("need one constant per degree 0..b+1")
        if self.log_coeffs and len(self.log_coeffs) != self.b + 2:
            raise ValueError("need one log coefficient list per degree")

    @classmethod
    def flat(cls, b: int) -> "ConeTraceForm":
        c = tuple(cone_trace(b, k, 1.0) for k in range(b + 2))
        return cls(b, c, tuple(() for _ in range(b + 2)))

    def density(self, k: int) -> PhgSample:
        """Radial density ``r^b c_k`` at ``t = 1`` as a pure power on both ends."""
        c = self.c[k]
        term = ((Fraction(self.b), 0, c),)
        return PhgSample(lambda r: c * r ** self.b, Expansion(term, None, "zero"),
                         Expansion(term, None, "infinity"), f"cone density k={k}")

    def regularized_constant(self, k: int) -> float:
        """``LIM int_0^inf c_k r^b dr``, which vanishes for a pure power."""
        return regularized_integral(self.density(k)).value

    def log_coeff(self, k: int, ell: int) -> float:
        row = self.log_coeffs[k] if self.log_coeffs else ()
        return row[ell - 1] if 0 < ell <= len(row) else 0.0

    @property
    def n_logs(self) -> int:
        return max((len(r) for r in self.log_coeffs), default=0)

    def gamma_zeta(self, k: int) -> PolarSum:
        """``Gamma(s) zeta(s, Delta_k)`` as an exact rational function of ``s``."""
        out = reg_int_zero_check(0, 0).scale(self.regularized_constant(k))
        for ell in range(1, self.n_logs + 1):
            out = out + reg_int_zero_check(0, ell).scale(self.log_coeff(k, ell))
        return out


class WedgeTorsion(NamedTuple):
    logT: float
    path: str
    details: dict


def _weighted_block_keys(model: SpectralModel) -> dict:
    acc: dict = {}
    for j, blocks in enumerate(model.degrees):
        for b in blocks:
            acc[b.atoms] = acc.get(b.atoms, 0) + (-1) ** j * j * Fraction(b.coeff)
    return acc


def wedge_torsion(cone: ConeTraceForm, model_f: SpectralModel, path: str = "symbolic") -> WedgeTorsion:
    """Log torsion of ``cone x F`` for even-dimensional ``F``.

    The weighted supertrace of the product splits into the cone's weighted
    supertrace times ``chi(F)`` plus the cone's plain supertrace times the
    weighted supertrace of ``F``.  The first factor's zetas vanish, the
    harmonic part of the second is a constant-plus-log Mellin split summing
    to zero, and the positive-spectrum part is carried by
    ``sum_j (-1)^j j zeta_j(F)``.
    """
    if model_f.dim % 2:
        raise ValueError("F must be even-dimensional")
    n = cone.b + 2
    C = [sum((-1) ** k * cone.regularized_constant(k) for k in range(n))]
    C += [sum((-1) ** k * cone.log_coeff(k, ell) for k in range(n)) for ell in range(1, cone.n_logs + 1)]
    weighted_betti = sum((-1) ** j * j * b for j, b in enumerate(model_f.betti))
    if path == "symbolic":
        cone_terms = [cone.gamma_zeta(k) for k in range(n)]
        harmonic = PolarSum()
        for ell, c_ell in enumerate(C):
            harmonic = harmonic + reg_int_zero_check(0, ell).scale(c_ell * weighted_betti)
        keys = _weighted_block_keys(model_f)
        checks = {
            "cone_zetas_vanish": all(p.is_zero() for p in cone_terms),
            "harmonic_term_vanishes": harmonic.is_zero(),
            "weighted_zeta_of_F_vanishes": all(v == 0 for v in keys.values()),
        }
        if not all(checks.values()):
            raise ArithmeticError(f"symbolic cancellation failed: {checks}")
        return WedgeTorsion(0, "symbolic", checks)
    if path != "numeric":
        raise ValueError("path must be 'symbolic' or 'numeric'")
    if any(C[1:]):
        raise ValueError("numeric path handles pure-power cone traces only")
    # d/ds at 0 of N(s)/Gamma(s), N = numeric split sum of a constant
    h = 1e-3
    d0 = (reg_int_zero_numeric(0, 0, h) * special.rgamma(h)
          - reg_int_zero_numeric(0, 0, -h) * special.rgamma(-h)) / (2 * h)
    cone_weighted = sum((-1) ** k * k * cone.regularized_constant(k) for k in range(n))
    S1 = sum((-1) ** j * j * zeta_reg_at_zero(zeta_continue(model_f, j))[1]
             for j in range(model_f.dim + 1))
    derivative = model_f.chi * cone_weighted * d0 + C[0] * S1 + C[0] * weighted_betti * d0
    details = {"C0": C[0], "weighted_dzeta_F": S1, "split_derivative": d0}
    return WedgeTorsion(0.5 * derivative, "numeric", details)
