"""Mittag-Leffler function ``E_alpha(-x**alpha)`` for ``0 < alpha <= 1``.

For ``x`` above a switch point the Laplace-type integral representation

    E_alpha(-x^alpha) = sin(alpha pi)/pi \\int_0^inf e^{-r x} r^{alpha-1}
                        / (r^{2 alpha} + 2 r^alpha cos(alpha pi) + 1) dr

is integrated on the axis ``u = ln r`` (the substitution removes the
``r^{alpha-1}`` endpoint singularity).  Near ``x = 0`` the power series is
cheaper and carries a rigorous remainder bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._checks import divided_difference_signs
from ._quad import QuadratureError, log_axis_quad

__all__ = ["X_SWITCH", "ml_neg_power", "ml_series", "ml_integral", "ml_cm_probe",
           "MlProbeReport"]

X_SWITCH = 0.1


def _check(alpha, x):
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha!r}")
    if not x >= 0:
        raise ValueError(f"x must be >= 0, got {x!r}")


def ml_series(alpha, x, tol=1e-17):
    """Alternating series ``sum_k (-x^alpha)^k / Gamma(1 + alpha k)``.

    Returns ``(value, remainder_bound)``.  The bound is the first omitted
    term, valid because the terms decrease monotonically once their ratio
    drops below one (log-convexity of Gamma), which holds from the first
    term for ``x^alpha < Gamma(1 + alpha)``.
    """
    _check(alpha, x)
    if x == 0:
        return 1.0, 0.0
    z = x ** alpha
    lz = math.log(z)
    total = 0.0
    k = 0
    while True:
        term = math.exp(k * lz - math.lgamma(1.0 + alpha * k))
        nxt = math.exp((k + 1) * lz - math.lgamma(1.0 + alpha * (k + 1)))
        total += term if k % 2 == 0 else -term
        if nxt < term and nxt <= tol * abs(total):
            return total, nxt
        k += 1
        if k > 10000:
            raise QuadratureError("Mittag-Leffler series did not converge", partial=total)


def ml_integral(alpha, x, epsabs=1e-15, epsrel=1e-13):
    """Integral branch; returns ``(value, error_estimate)``.  Needs ``x > 0``."""
    _check(alpha, x)
    if x == 0:
        raise ValueError("integral branch needs x > 0")
    c = math.cos(alpha * math.pi)

    def f(r):
        ra = r ** alpha
        return math.exp(-r * x) * ra / r / (ra * ra + 2.0 * ra * c + 1.0)

    # e^{-r x} is below 1e-30 past r = 70 / x
    val, err = log_axis_quad(f, 0.0, 70.0 / x, breakpoints=(1.0, 1.0 / x),
                             epsabs=epsabs, epsrel=epsrel)
    s = math.sin(alpha * math.pi) / math.pi
    return s * val, s * err


def ml_neg_power(alpha, x, x_switch=X_SWITCH):
    """``E_alpha(-x**alpha)``; vectorised over ``x``."""
    def one(xv):
        _check(alpha, xv)
        if alpha == 1:
            return math.exp(-xv)
        if xv == 0:
            return 1.0
        if xv < x_switch:
            return ml_series(alpha, xv)[0]
        val, err = ml_integral(alpha, xv)
        if err > 1e-10:
            raise QuadratureError(f"Mittag-Leffler quadrature reached only {err:.2e}",
                                  partial=val)
        return val

    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        return one(float(arr))
    return np.array([one(v) for v in arr.ravel()]).reshape(arr.shape)


@dataclass(frozen=True)
class MlProbeReport:
    alpha: float
    passed: bool
    violations: list
    max_order: int


def ml_cm_probe(alpha, grid, max_order=4):
    """Check complete monotonicity of ``E_alpha(-x^alpha)`` on ``grid``.

    Divided differences of order ``n`` must have sign ``(-1)^n`` (through
    ``max_order``), values must lie in ``(0, 1]`` and decrease strictly (up to
    underflow far out on the grid).  A
    violation points at a quadrature problem, not at the mathematics.
    """
    grid = np.asarray(grid, dtype=float)
    vals = ml_neg_power(alpha, grid)
    violations = []
    # a value that underflows to 0 is only acceptable when it should be tiny
    tiny = (vals == 0) & (grid ** alpha > 700)
    bad = np.flatnonzero(((vals <= 0) & ~tiny) | (vals > 1))
    violations += [("range", float(grid[i])) for i in bad]
    bad = np.flatnonzero((np.diff(vals) >= 0) & (vals[1:] > 0))
    violations += [("decreasing", float(grid[i])) for i in bad]
    violations += divided_difference_signs(grid, vals, max_order, rtol=1e-9)
    return MlProbeReport(alpha, not violations, violations, max_order)
