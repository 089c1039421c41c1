"""Acceptance checks with their tolerances and time budgets.

Each check returns a :class:`CheckResult`; :func:`run_all` runs them in
order.  The command line ``suite`` and the test suite both call this module.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import index as ix
from .gluing import circle_gluing_check
from .kernels import LOOP_KERNELS, NUMPY_KERNELS
from .regcalc import (
    Expansion,
    PhgSample,
    change_of_variable,
    epsilon_limit,
    reg_int_zero_check,
    reg_int_zero_numeric,
    sigma_finite_part,
)
from .spectra import (
    ContourSpec,
    circle,
    dunford_heat,
    interval,
    point,
    product_model,
    short_time_expansion,
    supertraces,
    torus,
    truncate_model,
    truncated,
)
from .zeta import (
    ConeTraceForm,
    DetLineElement,
    even_dim_vanishing,
    log_torsion,
    torsion_norm,
    wedge_torsion,
)


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    elapsed: float
    budget: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d} {self.name}: {self.detail} ({self.elapsed:.2f}s / {self.budget:g}s)"


# ---------------------------------------------------------------------------
# shared sample corpus


def _exp_taylor(alpha, coeffs):
    return tuple((alpha + j, 0, c) for j, c in enumerate(coeffs))


def regint_corpus() -> list[PhgSample]:
    """Ten functions mixing powers, logarithms and exponential decay."""
    F = Fraction
    out = [
        PhgSample(lambda x: math.exp(-x),
                  Expansion(_exp_taylor(F(0), (1.0, -1.0, 0.5)), 3, "zero"), label="exp(-x)"),
        PhgSample(lambda x: 1.0 / (1.0 + x),
                  Expansion(_exp_taylor(F(0), (1.0, -1.0, 1.0)), 3, "zero"),
                  Expansion(((-1, 0, 1.0), (-2, 0, -1.0), (-3, 0, 1.0)), -4, "infinity"), "1/(1+x)"),
        PhgSample(lambda x: math.exp(-x) / math.sqrt(x),
                  Expansion(_exp_taylor(F(-1, 2), (1.0, -1.0, 0.5)), F(5, 2), "zero"), label="exp(-x)/sqrt(x)"),
        PhgSample(lambda x: math.exp(-x) / x ** 2,
                  Expansion(_exp_taylor(F(-2), (1.0, -1.0, 0.5, -1 / 6, 1 / 24)), 3, "zero"),
                  label="exp(-x)/x^2"),
        PhgSample(lambda x: math.log(x) * math.exp(-x),
                  Expansion(((0, 1, 1.0), (1, 1, -1.0), (2, 1, 0.5)), F(5, 2), "zero"), label="log(x)exp(-x)"),
        PhgSample(lambda x: x / (1.0 + x) ** 2,
                  Expansion(((1, 0, 1.0), (2, 0, -2.0), (3, 0, 3.0)), 4, "zero"),
                  Expansion(((-1, 0, 1.0), (-2, 0, -2.0), (-3, 0, 3.0)), -4, "infinity"), "x/(1+x)^2"),
        PhgSample(lambda x: math.atan(x) / x,
                  Expansion(((0, 0, 1.0), (2, 0, -1 / 3), (4, 0, 0.2)), 6, "zero"),
                  Expansion(((-1, 0, math.pi / 2), (-2, 0, -1.0), (-4, 0, 1 / 3)), -6, "infinity"),
                  "atan(x)/x"),
        PhgSample(lambda x: math.log1p(x) / (1.0 + x),
                  Expansion(((1, 0, 1.0), (2, 0, -1.5), (3, 0, 11 / 6)), 4, "zero"),
                  Expansion(((-1, 1, 1.0), (-2, 1, -1.0), (-2, 0, 1.0), (-3, 1, 1.0), (-3, 0, -1.5)),
                            F(-7, 2), "infinity"), "log(1+x)/(1+x)"),
        PhgSample(lambda x: 1.0 / (x * (1.0 + x)),
                  Expansion(((-1, 0, 1.0), (0, 0, -1.0), (1, 0, 1.0), (2, 0, -1.0)), 3, "zero"),
                  Expansion(((-2, 0, 1.0), (-3, 0, -1.0), (-4, 0, 1.0)), -5, "infinity"), "1/(x(1+x))"),
        PhgSample(lambda x: 1.0 / (math.sqrt(x) * (1.0 + x)),
                  Expansion(_exp_taylor(F(-1, 2), (1.0, -1.0, 1.0)), F(5, 2), "zero"),
                  Expansion(((F(-3, 2), 0, 1.0), (F(-5, 2), 0, -1.0), (F(-7, 2), 0, 1.0)), F(-9, 2), "infinity"),
                  "1/(sqrt(x)(1+x))"),
    ]
    return out


LAMBDAS = (0.25, 0.5, 2.0, math.e, 10.0)


# ---------------------------------------------------------------------------
# index-set brute force


def _random_set(rng: random.Random, cutoff: Fraction) -> ix.IndexSet:
    n = rng.randint(0, 3)
    gens = []
    for _ in range(n):
        re = Fraction(rng.randint(-6, 6), 2)
        im = Fraction(1, 3) if rng.random() < 0.15 else Fraction(0)
        gens.append(ix.IndexTerm(re, im, rng.randint(0, 2)))
    return ix.IndexSet(frozenset(gens), cutoff)


# The oracle works on exact integers: real parts in halves, imaginary parts in thirds.
_RE, _IM = 2, 3


def _members(E: ix.IndexSet, cutoff: Fraction) -> set:
    out = set()
    for t in E.with_cutoff(cutoff).members():
        re, im = t.re * _RE, t.im * _IM
        assert re.denominator == 1 and im.denominator == 1
        out.add((int(re), int(im), t.k))
    return out


def _scaled(c) -> int:
    return int(Fraction(c) * _RE)


def _brute_eunion(A: set, B: set, cutoff) -> set:
    c = _scaled(cutoff)
    out = set(A) | set(B)
    for (a, ai, k) in A:
        for (b, bi, l) in B:
            if (a, ai) == (b, bi):
                out.add((a, ai, k + l + 1))
    return {m for m in out if m[0] <= c}


def _brute_sum(A: set, B: set, cutoff) -> set:
    c = _scaled(cutoff)
    Bs = sorted(B)
    out = set()
    for (a, ai, k) in A:
        for (b, bi, l) in Bs:
            if a + b > c:
                break
            out.add((a + b, ai + bi, k + l))
    return out


def _below(A: set, cutoff) -> set:
    c = _scaled(cutoff)
    return {m for m in A if m[0] <= c}


def _brute_pushforward(L, R, cutoff, lo):
    # member sets are enumerated up to cutoff - lo so that sums reaching the cutoff are complete
    big = cutoff - lo
    E10, E11, E01 = (_members(x, big) for x in L)
    W10, W11, W01 = (_members(x, big) for x in R)
    f10 = _brute_eunion(_brute_sum(E11, W10, cutoff), _below(E10, cutoff), cutoff)
    f11 = _brute_eunion(_brute_sum(E10, W01, cutoff), _brute_sum(E11, W11, cutoff), cutoff)
    f01 = _brute_eunion(_brute_sum(E01, W11, cutoff), _below(W01, cutoff), cutoff)
    return f10, f11, f01


def check_index_algebra(n_cases: int = 200, seed: int = 7) -> tuple[bool, str]:
    rng = random.Random(seed)
    cutoff = Fraction(6)
    lo = Fraction(-3)
    for case in range(n_cases):
        L = [_random_set(rng, cutoff) for _ in range(3)]
        R = [_random_set(rng, cutoff) for _ in range(3)]
        A, B = L[0], R[0]
        big = cutoff - lo
        Am, Bm = _members(A, big), _members(B, big)
        if _members(ix.extended_union(A, B), cutoff) != _brute_eunion(_below(Am, cutoff), _below(Bm, cutoff), cutoff):
            return False, f"extended_union mismatch in case {case}: {A} / {B}"
        if _members(ix.minkowski_sum(A, B), cutoff) != _brute_sum(Am, Bm, cutoff):
            return False, f"minkowski_sum mismatch in case {case}: {A} / {B}"
        out = ix.pushforward_triple(ix.IndexTriple(*L), ix.IndexTriple(*R))
        brute = _brute_pushforward(L, R, cutoff, lo)
        for got, want in zip(out.as_tuple(), brute):
            if _members(got, cutoff) != want:
                return False, f"pushforward mismatch in case {case}"
    return True, f"{n_cases} random cases agree exactly"


# ---------------------------------------------------------------------------
# checks


def _c1():
    return check_index_algebra()


def _c2():
    for nu in range(1, 7):
        for b in range(2, 9):
            bd = ix.heat_trace_bounds(nu, b)["phif0"]
            if bd is not None and (bd.value < b + 1 or (bd.value == b + 1 and bd.log_at_bound)):
                return False, f"heat trace phif0 bound {bd} < {b + 1} at nu={nu}, b={b}"
    for sigma in range(1, 7):
        for b in range(2, 9):
            bd = ix.resolvent_power_bounds(sigma, b)["phif0"]
            if bd.value != min(0, -2 * sigma + b + 1) or bd.strict:
                return False, f"resolvent phif0 bound {bd} at sigma={sigma}, b={b}"
    return True, "heat phif0 >= b+1 and resolvent phif0 = min(0, -2 sigma + b + 1) on the full grid"


def _c3():
    n = 0
    for twice in range(-12, 1):
        alpha = Fraction(twice, 2)
        for k in range(4):
            if not reg_int_zero_check(alpha, k).is_zero():
                return False, f"nonzero rational function at alpha={alpha}, k={k}"
            n += 1
    worst = 0.0
    samples = [(-1, 0, 5.0)] + [(-1, k, s) for k in range(4) for s in (0.2, 0.5, 2.5)] \
        + [(Fraction(-5, 2), k, s) for k in (0, 2) for s in (0.5, 1.5)] + [(0, 1, 0.7), (-3, 3, 1.0), (-2, 0, 4.0)]
    for alpha, k, s in samples[:20]:
        worst = max(worst, abs(reg_int_zero_numeric(alpha, k, s)))
    return worst < 1e-10, f"{n} exact cancellations; max numeric split sum {worst:.2e} over 20 points"


def _c4():
    worst = 0.0
    for f in regint_corpus():
        for lam in LAMBDAS:
            r = change_of_variable(f, lam, tol=1e-8)
            worst = max(worst, abs(r.direct - r.formula))
    return worst < 1e-8, f"max dual-path gap {worst:.2e} over 10 functions x 5 scales"


def _c5():
    worst = 0.0
    for f in regint_corpus():
        worst = max(worst, abs(sigma_finite_part(f) - epsilon_limit(f)))
    return worst < 1e-8, f"max sigma/epsilon gap {worst:.2e}"


def _c6():
    models = [circle(2 * math.pi), circle(3.0, 1.0), torus([1.0, 1.3]),
              product_model(circle(2.0), interval(1.5, "absolute")),
              product_model(torus([1.0, 2.0]), circle(1.5, 2.0))]
    worst = 0.0
    for m in models:
        plain, _ = supertraces(m, [0.1, 1.0, 10.0])
        worst = max(worst, float(np.max(np.abs(plain - m.chi))))
    return worst < 1e-10, f"max |supertrace - chi| {worst:.2e} on {len(models)} models"


def _c7():
    pinned = dunford_heat(truncated({0: [(1.0, 1)]}), ContourSpec(t=1.0, nu=2))
    if abs(pinned - math.exp(-1)) > 1e-10:
        return False, f"scalar residue oracle gives {pinned}"
    model = truncate_model(circle(2 * math.pi), 400.5)
    worst = 0.0
    for nu in (1, 2, 3):
        for theta in (0.6 * math.pi, 0.75 * math.pi):
            for t in (0.5, 1.0, 5.0):
                exact = model.heat_trace(0, [t])[0]
                got = dunford_heat(model, ContourSpec(theta=theta, t=t, nu=nu))
                worst = max(worst, abs(got - exact) / exact)
    return worst < 1e-6, f"max relative error {worst:.2e}; sign pinned by residue oracle"


def _c8():
    worst_oracle = worst_L = 0.0
    for theta in (math.pi / 3, math.pi / 2, 2 * math.pi / 3, math.pi):
        vals = [log_torsion(circle(L, theta)).logT for L in (1.0, 2 * math.pi, 10.0)]
        target = math.log(2 * abs(math.sin(theta / 2)))
        worst_oracle = max(worst_oracle, max(abs(v - target) for v in vals))
        worst_L = max(worst_L, max(vals) - min(vals))
    ok = worst_oracle < 1e-6 and worst_L < 1e-8
    return ok, f"oracle gap {worst_oracle:.2e}, L-spread {worst_L:.2e}"


def _c9():
    vals = []
    for L in (1.0, 2 * math.pi, 10.0):
        element = DetLineElement(L, {0: [lambda x: 1.0], 1: [lambda x, L=L: 1.0 / L]})
        vals.append(torsion_norm(circle(L), element))
    spread = max(vals) - min(vals)
    return spread < 1e-8, f"T*|mu| = {vals[0]:.12f}, spread {spread:.2e}"


def _c10():
    r = even_dim_vanishing(torus([1.0, 1.0]), (2.0, 3.0))
    worst = max(max(r["samples"].values()), r["derivative_at_zero"])
    return worst < 1e-8, f"max residual {worst:.2e}"


def _c11():
    worst = 0.0
    for b in (1, 2):
        cone = ConeTraceForm.flat(b)
        for f in (point(), torus([1.0, 1.0])):
            sym = wedge_torsion(cone, f, "symbolic")
            if not (sym.logT == 0 and isinstance(sym.logT, int)):
                return False, f"symbolic path returned {sym.logT!r}"
            worst = max(worst, abs(wedge_torsion(cone, f, "numeric").logT))
    return worst < 1e-8, f"symbolic exactly 0; numeric max {worst:.2e}"


def _c12():
    worst = worst_det = 0.0
    for L in (1.0, math.pi, 10.0):
        r = circle_gluing_check(L)
        if r.chi_factor != 2.0:
            return False, f"chi factor {r.chi_factor}"
        worst = max(worst, abs(r.ratio - 1.0))
        o = r.oracle_checks
        worst_det = max(worst_det, abs(o["det_circle"] - o["det_circle_expected"]) / o["det_circle_expected"],
                        abs(o["det_dirichlet"] - o["det_dirichlet_expected"]) / o["det_dirichlet_expected"])
    ok = worst < 1e-6 and worst_det < 1e-8
    return ok, f"max |ratio - 1| {worst:.2e}; determinant oracles {worst_det:.2e}"


def _c13():
    worst_odd = worst_lead = 0.0
    for model in (circle(2 * math.pi), circle(3.0, 1.0), torus([1.0, 1.3]), torus([2.0, 2.0])):
        m = model.dim
        vol = math.prod(b.length for b in model.degrees[0][0].atoms)
        for k in range(m + 1):
            e = short_time_expansion(model, k, n_terms=5)
            for t in e.terms:
                shift = (t.alpha + Fraction(m, 2)) * 2
                if shift % 2 == 1:
                    worst_odd = max(worst_odd, abs(t.coeff))
            lead = e.coefficient(Fraction(-m, 2))
            expected = math.comb(m, k) * vol / (4 * math.pi) ** (m / 2)
            worst_lead = max(worst_lead, abs(lead - expected))
    ok = worst_odd < 1e-8 and worst_lead < 1e-8
    return ok, f"odd-shift coefficients {worst_odd:.2e}; leading coefficient gap {worst_lead:.2e}"


CHECKS: list[tuple[int, str, float, Callable]] = [
    (1, "index algebra vs brute-force closure", 5, _c1),
    (2, "regenerated face bounds", 1, _c2),
    (3, "split Mellin integrals cancel", 5, _c3),
    (4, "change-of-variable rule", 10, _c4),
    (5, "finite-part equivalence", 10, _c5),
    (6, "McKean-Singer", 5, _c6),
    (7, "Dunford contour", 30, _c7),
    (8, "twisted-circle torsion", 30, _c8),
    (9, "determinant-line invariance", 10, _c9),
    (10, "even-dimension vanishing", 30, _c10),
    (11, "model-wedge torsion", 30, _c11),
    (12, "circle gluing", 60, _c12),
    (13, "short-time structure", 30, _c13),
]


def warm_up() -> None:
    """Compile the loop kernels once so budgets measure computation only."""
    lam = np.array([1.0, 2.0])
    mult = np.ones(2)
    ts = np.array([0.5, 1.0])
    for kernels in (LOOP_KERNELS, NUMPY_KERNELS):
        kernels["heat_sum"](lam, mult, ts)
        kernels["theta_dual"](1.0, 0.5, ts)
        kernels["resolvent_power_sum"](lam, mult, np.array([1.0 + 1.0j]), 2)
        kernels["dirichlet_sum"](lam, mult, 2.0)


def run_check(number: int) -> CheckResult:
    for n, name, budget, fn in CHECKS:
        if n == number:
            start = time.perf_counter()
            try:
                ok, detail = fn()
            except Exception as exc:  # a crashing check is a failing check
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            elapsed = time.perf_counter() - start
            if ok and elapsed > budget:
                ok, detail = False, f"{detail}; over time budget"
            return CheckResult(n, name, ok, detail, elapsed, budget)
    raise KeyError(number)


def run_all(echo: Callable[[str], None] | None = None) -> list[CheckResult]:
    warm_up()
    out = []
    for n, *_ in CHECKS:
        r = run_check(n)
        if echo:
            echo(r.line())
        out.append(r)
    return out
