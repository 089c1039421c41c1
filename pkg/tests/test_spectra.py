import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from phitorsion.spectra import (
    ContourSpec,
    GeometryError,
    build_model,
    circle,
    cone_trace,
    dunford_heat,
    exact_short_time,
    heat_trace,
    interval,
    point,
    product_model,
    scaling_check,
    short_time_expansion,
    signed_power_prefactor_sign,
    supertraces,
    torus,
    trace_table,
    truncate_model,
    truncated,
)


def theta3(q_exp, N=200, phase=0.0):
    # sum_{n in Z} exp(-q (n + phase)^2)
    n = np.arange(-N, N + 1)
    return float(np.sum(np.exp(-q_exp * (n + phase) ** 2)))


# --- spectra ---------------------------------------------------------------

def test_circle_eigenvalues():
    lam, mult = circle(2 * math.pi).eigenvalues(0, 10)
    assert list(lam) == [0, 1, 4, 9]
    assert list(mult) == [1, 2, 2, 2]
    assert circle(2 * math.pi).betti == [1, 1]


def test_half_twisted_circle_eigenvalues():
    m = circle(2 * math.pi, math.pi)
    lam, mult = m.eigenvalues(0, 7)
    np.testing.assert_allclose(lam, [0.25, 2.25, 6.25])
    assert list(mult) == [2, 2, 2]
    assert m.betti == [0, 0]


def test_single_eigenvalue_model():
    m = truncated({0: [(1.0, 1)]})
    assert m.is_finite()
    assert m.heat_trace(0, [1.0])[0] == pytest.approx(math.exp(-1))


# --- heat traces -----------------------------------------------------------

def test_circle_heat_trace():
    v = heat_trace(circle(2 * math.pi), 0, 1.0)
    assert v.value == pytest.approx(1.772637204826652, abs=1e-12)
    assert v.error_bound < 1e-12


def test_dirichlet_interval_heat_trace():
    v = heat_trace(interval(math.pi, "relative"), 0, 1.0)
    assert v.value == pytest.approx(0.386318602413326, abs=1e-12)


@pytest.mark.parametrize("L", [0.3, 1.0, 2 * math.pi, 25.0])
@pytest.mark.parametrize("hol", [0.0, 1.0, math.pi])
@pytest.mark.parametrize("t", [1e-3, 0.1, 1.0, 30.0])
def test_circle_trace_against_direct_sum(L, hol, t):
    q = t * (2 * math.pi / L) ** 2
    direct = theta3(q, N=4000, phase=hol / (2 * math.pi))
    assert circle(L, hol).heat_trace(0, [t])[0] == pytest.approx(direct, rel=1e-12)


def test_dual_and_direct_series_agree_at_switch():
    atom = circle(3.0).degrees[0][0].atoms[0]
    ts = np.array([atom.t_switch * (1 - 1e-9), atom.t_switch * (1 + 1e-9)])
    a, b = circle(3.0).heat_trace(0, ts)
    assert a == pytest.approx(b, rel=1e-8)


# --- supertraces and products ----------------------------------------------

@pytest.mark.parametrize("model", [circle(1.0), circle(2.0, 2.5), torus([1.0, 2.0])],
                         ids=["circle", "twisted", "torus"])
def test_plain_supertrace_is_euler_characteristic(model):
    plain, _ = supertraces(model, [0.01, 0.1, 1.0, 10.0])
    np.testing.assert_allclose(plain, 0.0, atol=1e-10)


def test_weighted_supertrace_of_finite_model():
    m = truncated({0: [(1.0, 1)], 1: [(1.0, 1)]})
    _, w = supertraces(m, [0.5, 2.0])
    np.testing.assert_allclose(w, -np.exp(-np.array([0.5, 2.0])))


def test_circle_times_circle_is_torus():
    prod = product_model(circle(1.0), circle(1.7))
    tor = torus([1.0, 1.7])
    ts = [0.05, 0.5, 5.0]
    for k in range(3):
        np.testing.assert_allclose(prod.heat_trace(k, ts), tor.heat_trace(k, ts), rtol=1e-12)
    tr0 = circle(1.0).heat_trace(0, ts) * circle(1.7).heat_trace(0, ts)
    np.testing.assert_allclose(tor.heat_trace(1, ts), 2 * tr0, rtol=1e-12)


def test_product_with_point():
    m = product_model(circle(2.0), point())
    np.testing.assert_allclose(m.heat_trace(1, [0.3]), circle(2.0).heat_trace(1, [0.3]))


def test_supertrace_multiplicative():
    a, b = interval(1.0, "absolute"), torus([1.0, 1.5])
    plain, _ = supertraces(product_model(a, b), [0.7])
    assert plain[0] == pytest.approx(supertraces(a, 0.7)[0] * supertraces(b, 0.7)[0], abs=1e-12)


def test_interval_euler_characteristics():
    assert interval(1.0, "absolute").chi == 1
    assert interval(1.0, "relative").chi == -1


# --- descriptors -----------------------------------------------------------

DESCRIPTORS = [
    {"kind": "circle", "length": 2.5, "holonomy": 1.0},
    {"kind": "interval_rel", "length": 1.5},
    {"kind": "interval_abs", "length": 0.5},
    {"kind": "torus", "lengths": [1.0, 2.0]},
    {"kind": "product", "factors": [{"kind": "circle", "length": 1.0, "holonomy": 0.0},
                                    {"kind": "interval_abs", "length": 2.0}]},
    {"kind": "truncated", "eigenvalues": {"0": [[1.0, 2]], "1": [[2.0, 1]]}},
    {"kind": "point"},
]


@pytest.mark.parametrize("desc", DESCRIPTORS, ids=lambda d: d["kind"])
def test_descriptor_round_trip(desc):
    m = build_model(json.dumps(desc))
    again = build_model(m.to_json())
    assert again.to_json() == m.to_json()
    ts = [0.1, 1.0]
    for k in range(m.dim + 1):
        np.testing.assert_array_equal(again.heat_trace(k, ts), m.heat_trace(k, ts))


@pytest.mark.parametrize("bad", [
    '{"kind": "sphere"}',
    '{"kind": "circle", "length": -1}',
    '{"kind": "circle", "length": 1, "holonomy": 7}',
    '{"kind": "circle", "length": 1, "colour": "red"}',
    '{"kind": "torus"}',
    'not json',
    '[1, 2]',
])
def test_bad_descriptors(bad):
    with pytest.raises(GeometryError):
        build_model(bad)


@given(st.floats(0.1, 50.0), st.floats(0.0, 6.28))
def test_circle_descriptor_property(L, hol):
    m = build_model({"kind": "circle", "length": L, "holonomy": hol})
    assert build_model(m.to_json()).to_json() == m.to_json()


# --- cones -----------------------------------------------------------------

def test_cone_trace_values():
    assert cone_trace(1, 0, 0.5) == pytest.approx(1 / (4 * math.pi * 0.5))
    assert cone_trace(1, 1, 1.0) == pytest.approx(2 / (4 * math.pi))
    assert cone_trace(2, 5, 1.0) == 0.0


def test_cone_scaling_identity():
    assert scaling_check(3.0, b=1, t=1.0, r=2.0, r_tilde=2.0) < 1e-12


@given(st.floats(0.2, 5.0), st.integers(1, 4), st.floats(0.1, 3.0))
def test_cone_scaling_property(lam, b, t):
    assert scaling_check(lam, b=b, t=t) < 1e-10


# --- contour ---------------------------------------------------------------

def test_dunford_single_eigenvalue():
    m = truncated({0: [(1.0, 1)]})
    for nu in (1, 2):
        assert dunford_heat(m, ContourSpec(t=1.0, nu=nu)) == pytest.approx(math.exp(-1), abs=1e-10)


def test_dunford_truncated_circle():
    m = truncate_model(circle(2 * math.pi), 400.5)
    assert dunford_heat(m, ContourSpec(t=1.0, nu=1)) == pytest.approx(1.772637, abs=1e-6)


def test_alternative_prefactor_sign_flips_even_powers():
    assert [signed_power_prefactor_sign(n) for n in (1, 2, 3)] == [1, -1, 1]


def test_dunford_rejects_infinite_model():
    with pytest.raises(GeometryError):
        dunford_heat(circle(1.0), ContourSpec())


def test_contour_spec_validation():
    with pytest.raises(ValueError):
        ContourSpec(theta=0.4)
    with pytest.raises(ValueError):
        ContourSpec(nu=0)


# --- short-time structure --------------------------------------------------

@pytest.mark.parametrize("L", [1.0, 2 * math.pi, 7.0])
def test_circle_leading_coefficient(L):
    e = short_time_expansion(circle(L), 0, n_terms=4)
    assert e.coefficient(Fraction(-1, 2)) == pytest.approx(L / math.sqrt(4 * math.pi), abs=1e-9)
    assert abs(e.coefficient(Fraction(0))) < 1e-8


def test_torus_leading_coefficient():
    e = short_time_expansion(torus([1.0, 1.5]), 0, n_terms=4)
    assert e.coefficient(Fraction(-1)) == pytest.approx(1.5 / (4 * math.pi), abs=1e-9)


def test_interval_carries_boundary_term():
    e = exact_short_time(interval(2.0, "absolute"), 0)
    assert e.coefficient(Fraction(0)) == pytest.approx(0.5)


# --- tables ----------------------------------------------------------------

def test_trace_table_residual_vanishes_at_both_ends():
    ts = 2.0 ** np.arange(-10, 5)
    rows = trace_table(circle(2 * math.pi), 0, ts)
    assert abs(rows[0][3]) < 1e-12 and abs(rows[-1][3]) < 1e-6


def test_trace_table_empty():
    assert trace_table(circle(1.0), 0, []) == []


def test_trace_table_rejects_unsorted():
    with pytest.raises(ValueError):
        trace_table(circle(1.0), 0, [1.0, 0.5])


def test_trace_table_truncated_closed_form():
    rows = trace_table(truncated({0: [(1.0, 2), (3.0, 1)]}), 0, [0.5, 1.0])
    for t, tr, _, _ in rows:
        assert tr == pytest.approx(2 * math.exp(-t) + math.exp(-3 * t), rel=1e-15)
