import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from phitorsion.acceptance import LAMBDAS, regint_corpus
from phitorsion.regcalc import (
    DualPathMismatch,
    Expansion,
    ExpTerm,
    IllConditionedFit,
    PhgSample,
    PolarSum,
    change_of_variable,
    epsilon_limit,
    fit_expansion,
    log_change_coefficients,
    mellin_term,
    reg_int_zero_check,
    reg_int_zero_numeric,
    regularized_integral,
    regularized_limit,
    sigma_finite_part,
)

F = Fraction


def exp_sample():
    return PhgSample(lambda x: math.exp(-x),
                     Expansion(((0, 0, 1.0), (1, 0, -1.0)), 2, "zero"), label="exp")


def inv_one_plus():
    return PhgSample(lambda x: 1 / (1 + x),
                     Expansion(((0, 0, 1.0), (1, 0, -1.0)), 2, "zero"),
                     Expansion(((-1, 0, 1.0), (-2, 0, -1.0)), -3, "infinity"))


def power(b):
    return PhgSample(lambda x: x ** float(b), Expansion(((b, 0, 1.0),), None, "zero"),
                     Expansion(((b, 0, 1.0),), None, "infinity"))


# --- Mellin terms ----------------------------------------------------------

def test_mellin_unit_interval():
    assert mellin_term(0, 0).terms == {(0, 1): 1}
    assert mellin_term(0, 1).terms == {(0, 2): -1}


def test_mellin_tail():
    assert mellin_term(-2, 0, "tail").terms == {(2, 1): -1}


def test_mellin_term_matches_quadrature():
    from scipy import integrate
    s = 2.3
    val = integrate.quad(lambda x: x ** (F(1, 2) + s - 1) * math.log(x) ** 2, 0, 1)[0]
    assert mellin_term(F(1, 2), 2)(s) == pytest.approx(val, rel=1e-10)


def test_polar_sum_arithmetic():
    a = PolarSum({(0, 1): F(1)})
    assert (a - a).is_zero()
    assert a.scale(3)(2.0) == pytest.approx(1.5)


@pytest.mark.parametrize("alpha, k", [(0, 0), (-3, 2), (F(-7, 2), 3)])
def test_reg_int_zero(alpha, k):
    assert reg_int_zero_check(alpha, k).is_zero()


def test_reg_int_zero_numeric():
    assert abs(reg_int_zero_numeric(-1, 0, 5.0)) < 1e-10


@given(st.integers(-12, 0), st.integers(0, 3))
def test_reg_int_zero_property(twice_alpha, k):
    assert reg_int_zero_check(F(twice_alpha, 2), k).is_zero()


# --- regularized limits ----------------------------------------------------

def test_regularized_limit_constant():
    e = Expansion(((-1, 0, 3.0), (0, 0, 5.0), (1, 0, 7.0)), None, "zero")
    assert regularized_limit(e) == (5.0, False)


def test_regularized_limit_log_flag():
    e = Expansion(((0, 1, 2.0), (0, 0, 5.0)), None, "zero")
    r = regularized_limit(e)
    assert r.value == 5.0 and r.log_present
    with pytest.raises(ValueError):
        regularized_limit(e, strict=True)


def test_regularized_limit_no_constant():
    assert regularized_limit(Expansion(((F(-1, 2), 0, 1.0),), None, "zero")).value == 0


# --- regularized integral --------------------------------------------------

@pytest.mark.parametrize("b", [F(-3), F(-1, 2), F(0), F(2)])
def test_pure_power_integrates_to_zero(b):
    assert regularized_integral(power(b)).value == pytest.approx(0, abs=1e-12)


def test_exp_integral():
    assert regularized_integral(exp_sample()).value == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("split", [0.3, 1.0, 4.0])
def test_inv_one_plus_is_zero(split):
    assert regularized_integral(inv_one_plus(), split=split).value == pytest.approx(0, abs=1e-9)


def test_integral_of_corpus_function():
    # x^-1/2 e^-x integrates to Gamma(1/2)
    f = regint_corpus()[2]
    assert regularized_integral(f).value == pytest.approx(math.sqrt(math.pi), abs=1e-9)


def test_log_minus_one_over_x_term():
    # 1/(x(1+x)) = 1/x - 1/(1+x): both finite parts vanish
    f = regint_corpus()[8]
    assert regularized_integral(f).value == pytest.approx(0.0, abs=1e-9)


# --- change of variable ----------------------------------------------------

def test_change_of_variable_exp():
    r = change_of_variable(exp_sample(), 2.0)
    assert r.value == pytest.approx(0.5, abs=1e-10)
    assert all(c == 0 for c in r.log_coeffs)


def test_change_of_variable_log_term():
    r = change_of_variable(inv_one_plus(), math.e)
    assert r.value == pytest.approx(math.exp(-1), abs=1e-9)
    assert log_change_coefficients(inv_one_plus())[0] == pytest.approx(1.0)


@pytest.mark.parametrize("f", regint_corpus(), ids=lambda f: f.label)
def test_rescale_by_one_is_identity(f):
    r = change_of_variable(f, 1.0)
    assert r.value == pytest.approx(regularized_integral(f).value, abs=1e-10)


@pytest.mark.parametrize("f", regint_corpus(), ids=lambda f: f.label)
@pytest.mark.parametrize("lam", LAMBDAS)
def test_dual_paths(f, lam):
    r = change_of_variable(f, lam)
    assert abs(r.direct - r.formula) < 1e-8


def test_dual_path_mismatch_detected():
    # declared expansion at infinity is wrong (coefficient 2 instead of 1)
    bad = PhgSample(lambda x: 1 / (1 + x), Expansion(((0, 0, 1.0), (1, 0, -1.0)), 2, "zero"),
                    Expansion(((-1, 0, 2.0), (-2, 0, -1.0)), -3, "infinity"))
    with pytest.raises((DualPathMismatch, ArithmeticError, RuntimeError)):
        change_of_variable(bad, 10.0)


# --- finite parts ----------------------------------------------------------

def _cut(alpha, k=0):
    # x^alpha log^k x on (0,1], zero beyond
    return PhgSample(lambda x: x ** float(alpha) * math.log(x) ** k if x <= 1 else 0.0,
                     Expansion(((alpha, k, 1.0),), None, "zero"))


@pytest.mark.parametrize("alpha, k, expected", [(-1, 0, 0.0), (-2, 0, -1.0), (-1, 1, 0.0)])
def test_sigma_and_epsilon_on_singular_powers(alpha, k, expected):
    f = _cut(alpha, k)
    assert sigma_finite_part(f) == pytest.approx(expected, abs=1e-10)
    assert epsilon_limit(f) == pytest.approx(expected, abs=1e-10)


@pytest.mark.parametrize("f", regint_corpus(), ids=lambda f: f.label)
def test_sigma_matches_epsilon_on_corpus(f):
    assert sigma_finite_part(f) == pytest.approx(epsilon_limit(f), abs=1e-8)


# --- expansion fitting -----------------------------------------------------

def test_fit_exact_model():
    ts = 2.0 ** np.arange(-10, 0)
    samples = [(t, 2 * t ** -0.5 + 3) for t in ts]
    fit = fit_expansion(samples, [(F(-1, 2), 0), (F(0), 0)], "zero")
    assert fit.expansion.coefficient(F(-1, 2)) == pytest.approx(2, abs=1e-8)
    assert fit.expansion.coefficient(F(0)) == pytest.approx(3, abs=1e-8)


def test_fit_duplicate_exponents():
    with pytest.raises((ValueError, IllConditionedFit)):
        fit_expansion([(0.1, 1.0), (0.2, 2.0)], [(F(0), 0), (F(0), 0)], "zero")


def test_expansion_rejects_bad_endpoint():
    with pytest.raises(ValueError):
        Expansion((ExpTerm(F(0), 0, 1.0),), None, "middle")
