"""Hot numeric loops: heat sums, theta dual series, resolvent sums, Dirichlet sums.

Every kernel exists twice: an explicit-loop version compiled with numba and a
vectorised numpy version.  The public names are bound to one of the two at
import time according to :mod:`phitorsion._accel`.  Reductions run in a fixed
order in both versions so results are reproducible run to run.
"""

from __future__ import annotations

import math

import numpy as np

from ._accel import USE_NUMBA, njit

# Terms below this relative size are dropped from the theta dual series.
_DUAL_CUTOFF = 46.0  # exp(-46) ~ 1e-20


@njit(cache=True)
def _heat_sum_loop(lam, mult, ts):
    out = np.zeros(ts.shape[0])
    for i in range(ts.shape[0]):
        t = ts[i]
        acc = 0.0
        for j in range(lam.shape[0]):
            acc += mult[j] * math.exp(-lam[j] * t)
        out[i] = acc
    return out


def _heat_sum_numpy(lam, mult, ts):
    return np.exp(-np.outer(ts, lam)) @ mult


@njit(cache=True)
def _theta_dual_loop(scale, phase, ts):
    # sum_{m>=1} exp(-m^2 scale / t) cos(m phase)
    out = np.zeros(ts.shape[0])
    for i in range(ts.shape[0]):
        q = scale / ts[i]
        acc = 0.0
        m = 1
        while m * m * q < _DUAL_CUTOFF:
            acc += math.exp(-m * m * q) * math.cos(m * phase)
            m += 1
        out[i] = acc
    return out


def _theta_dual_numpy(scale, phase, ts):
    qmin = scale / ts.max() if ts.size else 1.0
    mmax = int(math.sqrt(_DUAL_CUTOFF / qmin)) + 1
    m = np.arange(1, mmax + 1, dtype=np.float64)
    expo = np.outer(scale / ts, m * m)
    terms = np.where(expo < _DUAL_CUTOFF, np.exp(-expo), 0.0)
    return terms @ np.cos(m * phase)


@njit(cache=True)
def _resolvent_power_sum_loop(lam, mult, xi, nu):
    out = np.zeros(xi.shape[0], dtype=np.complex128)
    for i in range(xi.shape[0]):
        acc = 0.0 + 0.0j
        for j in range(lam.shape[0]):
            r = 1.0 / (lam[j] + xi[i])
            p = r
            for _ in range(nu - 1):
                p *= r
            acc += mult[j] * p
        out[i] = acc
    return out


def _resolvent_power_sum_numpy(lam, mult, xi, nu):
    return (np.add.outer(xi, lam) ** (-nu)) @ mult


@njit(cache=True)
def _dirichlet_sum_loop(lam, mult, s):
    acc = 0.0
    for j in range(lam.shape[0]):
        if lam[j] > 0.0:
            acc += mult[j] * lam[j] ** (-s)
    return acc


def _dirichlet_sum_numpy(lam, mult, s):
    pos = lam > 0.0
    return float(np.sum(mult[pos] * lam[pos] ** (-s)))


if USE_NUMBA:
    _heat_sum = _heat_sum_loop
    _theta_dual = _theta_dual_loop
    _resolvent_power_sum = _resolvent_power_sum_loop
    _dirichlet_sum = _dirichlet_sum_loop
else:
    _heat_sum = _heat_sum_numpy
    _theta_dual = _theta_dual_numpy
    _resolvent_power_sum = _resolvent_power_sum_numpy
    _dirichlet_sum = _dirichlet_sum_numpy


def _as_f64(a):
    return np.ascontiguousarray(np.asarray(a, dtype=np.float64).ravel())


def heat_sum(lam, mult, ts):
    """``sum_j mult[j] * exp(-lam[j] * t)`` for every ``t`` in ``ts``."""
    return _heat_sum(_as_f64(lam), _as_f64(mult), _as_f64(ts))


def theta_dual(scale: float, phase: float, ts):
    """``sum_{m>=1} exp(-m^2 scale/t) cos(m phase)`` for every ``t`` in ``ts``."""
    ts = _as_f64(ts)
    if ts.size == 0:
        return ts.copy()
    return _theta_dual(float(scale), float(phase), ts)


def resolvent_power_sum(lam, mult, xi, nu: int):
    """``sum_j mult[j] * (lam[j] + xi)^(-nu)`` at complex nodes ``xi``."""
    xi = np.ascontiguousarray(np.asarray(xi, dtype=np.complex128).ravel())
    return _resolvent_power_sum(_as_f64(lam), _as_f64(mult), xi, int(nu))


def dirichlet_sum(lam, mult, s: float) -> float:
    """``sum mult * lam^(-s)`` over the strictly positive entries of ``lam``."""
    return float(_dirichlet_sum(_as_f64(lam), _as_f64(mult), float(s)))


def exp_taylor_remainder(x, order: int):
    """``exp(-x) - sum_{j<order} (-x)^j / j!`` without cancellation at small x."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    small = np.abs(x) < 2.0
    xs = x[small]
    term = (-xs) ** order / math.factorial(order)
    acc = term.copy()
    for j in range(order + 1, order + 60):
        term = term * (-xs) / j
        acc += term
    out[small] = acc
    xl = x[~small]
    partial = np.zeros_like(xl)
    term = np.ones_like(xl)
    for j in range(order):
        partial += term
        term = term * (-xl) / (j + 1)
    out[~small] = np.exp(-xl) - partial
    return out


LOOP_KERNELS = {
    "heat_sum": _heat_sum_loop,
    "theta_dual": _theta_dual_loop,
    "resolvent_power_sum": _resolvent_power_sum_loop,
    "dirichlet_sum": _dirichlet_sum_loop,
}
NUMPY_KERNELS = {
    "heat_sum": _heat_sum_numpy,
    "theta_dual": _theta_dual_numpy,
    "resolvent_power_sum": _resolvent_power_sum_numpy,
    "dirichlet_sum": _dirichlet_sum_numpy,
}
