"""Adaptive quadrature on a logarithmic axis.

All spectral integrals in this package have the form

    I = \\int_a^\\infty h(r) g(r) dr

with a density ``h`` that may be singular at the lower end or decay slowly
at infinity, and a weight ``g`` whose characteristic scale (a frequency, a
time, a complex Laplace variable) moves across many decades.  The body of
the integral is computed on the axis ``u = ln r`` with QUADPACK (scipy's
``quad``) panel by panel; the two tails are either closed-form (when the
density declares an exact power-law behaviour) or handled by doubling /
halving cutoffs with divergence detection.
"""
from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import integrate

DEFAULT_EPSABS = 1e-12
DEFAULT_EPSREL = 1e-10

# cutoff doubling: a ratio above this for three consecutive doublings at the
# end of the budget marks the integral as divergent
GROWTH_RATIO = 1.0 + 1e-3
MAX_DOUBLINGS = 200

# decades between the outermost weight scale and the start of the tails
TAIL_DECADES = 8.0


class QuadratureError(ArithmeticError):
    """Numerical integration failed; ``partial`` holds the value reached."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class DivergentIntegralError(QuadratureError):
    """The integral is infinite (decided analytically or by cutoff growth)."""


def tolerances(epsabs=None, epsrel=None):
    """Resolve quadrature tolerances; ``VISCOWAVE_TOL`` overrides the
    default relative tolerance."""
    if epsrel is None:
        env = os.environ.get("VISCOWAVE_TOL")
        epsrel = float(env) if env else DEFAULT_EPSREL
    if epsabs is None:
        epsabs = DEFAULT_EPSABS
    return float(epsabs), float(epsrel)


@dataclass(frozen=True)
class PowerLaw:
    """``h(r) = prefactor * r**exponent / ln(r)**log_exponent``.

    Used for the upper tail (``bound`` is where the law starts) or the lower
    head (``bound`` is where it ends).  When ``exact`` is False the law is an
    asymptotic statement only: it decides integrability but is never
    substituted for the density.
    """

    prefactor: float
    exponent: float
    log_exponent: float = 0.0
    bound: float = 0.0
    exact: bool = False


@dataclass(frozen=True)
class Weight:
    """Integration weight ``g(r)`` with its power behaviour at both ends.

    ``hi = (c, q)`` means ``g(r) ~ c r**q`` as ``r -> inf``; ``lo`` likewise
    for ``r -> 0``.  ``None`` means faster than any power.
    """

    func: Callable
    scale: float
    hi: Optional[tuple] = None
    lo: Optional[tuple] = None
    is_complex: bool = False


def _quad(f, a, b, epsabs, epsrel, is_complex):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        if is_complex:
            re, e1 = integrate.quad(lambda u: f(u).real, a, b, epsabs=epsabs,
                                    epsrel=epsrel, limit=200)
            im, e2 = integrate.quad(lambda u: f(u).imag, a, b, epsabs=epsabs,
                                    epsrel=epsrel, limit=200)
            return complex(re, im), math.hypot(e1, e2)
        val, err = integrate.quad(f, a, b, epsabs=epsabs, epsrel=epsrel,
                                  limit=200)
        return val, err


def log_axis_quad(f, r_lo, r_hi, *, breakpoints=(), epsabs=None, epsrel=None,
                  is_complex=False, panel_width=math.log(10.0)):
    """Integrate ``f(r) dr`` over ``[r_lo, r_hi]`` on the axis ``u = ln r``.

    The interval is cut into panels no wider than ``panel_width`` (in ``u``)
    and at every breakpoint; each panel is handed to QUADPACK.  ``r_lo`` may
    be 0 and ``r_hi`` may be ``inf``, in which case the outermost panels run
    to the corresponding infinite ``u`` limit.

    Returns ``(value, abserr)``.
    """
    epsabs, epsrel = tolerances(epsabs, epsrel)

    def fu(u):
        if not -700.0 < u < 700.0:
            return 0.0
        r = math.exp(u)
        return f(r) * r

    u_lo = -math.inf if r_lo == 0 else math.log(r_lo)
    u_hi = math.inf if math.isinf(r_hi) else math.log(r_hi)
    finite = [math.log(b) for b in breakpoints if r_lo < b < r_hi]
    if math.isfinite(u_lo) and math.isfinite(u_hi):
        inner_lo, inner_hi = u_lo, u_hi
    elif math.isfinite(u_lo):
        inner_lo = u_lo
        inner_hi = max(finite, default=u_lo)
    elif math.isfinite(u_hi):
        inner_hi = u_hi
        inner_lo = min(finite, default=u_hi)
    else:
        inner_lo = min(finite, default=0.0)
        inner_hi = max(finite, default=0.0)
    cuts = {inner_lo, inner_hi, *finite}
    edges = sorted(cuts)
    nodes = [edges[0]]
    for a, b in zip(edges[:-1], edges[1:]):
        n = max(1, int(math.ceil((b - a) / panel_width)))
        nodes.extend(np.linspace(a, b, n + 1)[1:])
    if not math.isfinite(u_lo):
        nodes.insert(0, -math.inf)
    if not math.isfinite(u_hi):
        nodes.append(math.inf)
    total = 0j if is_complex else 0.0
    err = 0.0
    npan = max(1, len(nodes) - 1)
    for a, b in zip(nodes[:-1], nodes[1:]):
        if a == b:
            continue
        v, e = _quad(fu, a, b, epsabs / npan, epsrel, is_complex)
        total += v
        err += e
    return total, err


def _power_tail(weight_coef, weight_pow, law: PowerLaw, log_start):
    """``c b \\int_L^\\infty e^{e y} y^{-gamma} dy`` with ``y = ln r``."""
    e = law.exponent + weight_pow + 1.0
    gam = law.log_exponent
    L = log_start
    if e > 1e-12 or (abs(e) <= 1e-12 and gam <= 1.0):
        raise DivergentIntegralError("power-law tail diverges")
    if abs(e) <= 1e-12:
        val = L ** (1.0 - gam) / (gam - 1.0)
    elif gam == 0.0:
        val = math.exp(e * L) / (-e)
    else:
        if L <= 0:
            raise QuadratureError("log-power tail needs ln r > 0")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, _ = integrate.quad(lambda y: math.exp(e * (y - L)) * y ** (-gam),
                                    L, math.inf, epsabs=0.0, epsrel=1e-13,
                                    limit=200)
        val *= math.exp(e * L)
    return weight_coef * law.prefactor * val


def _power_head(weight_coef, weight_pow, law: PowerLaw, r0):
    e = law.exponent + weight_pow + 1.0
    if e <= 0:
        raise DivergentIntegralError("power-law head diverges at r = 0")
    return weight_coef * law.prefactor * r0 ** e / e


def _check_power(law: PowerLaw, weight_pow, upper):
    e = law.exponent + weight_pow + 1.0
    if upper:
        ok = e < -1e-12 or (abs(e) <= 1e-12 and law.log_exponent > 1.0)
    else:
        ok = e > 0
    if not ok:
        raise DivergentIntegralError(
            "power-law %s diverges" % ("tail" if upper else "head"))


def _cutoff_series(piece, start, factor, epsabs, epsrel, base):
    """Accumulate ``piece(r_k, r_{k+1})`` over cutoffs ``r_{k+1} = factor r_k``.

    Returns ``(increment_sum, status)`` with status one of ``"converged"``,
    ``"slow"`` (budget spent, growth below the divergence ratio) or
    ``"diverged"``.
    """
    acc = 0.0
    small = 0
    ratios = []
    r = start
    for _ in range(MAX_DOUBLINGS):
        r_next = r * factor
        if r_next == 0.0 or math.isinf(r_next):
            return acc, "converged"
        d = piece(min(r, r_next), max(r, r_next))
        before = abs(base + acc)
        acc += d
        after = abs(base + acc)
        ratios.append(after / before if before > 0 else (math.inf if after > 0 else 1.0))
        if abs(d) <= max(epsabs, epsrel * after):
            small += 1
            if small >= 3:
                return acc, "converged"
        else:
            small = 0
        r = r_next
    if all(q > GROWTH_RATIO for q in ratios[-3:]):
        return acc, "diverged"
    return acc, "slow"


@dataclass
class DensityIntegral:
    value: complex
    abserr: float
    status: str = "converged"


def integrate_density(h, weight: Weight, *, support_min=0.0, tail=None,
                      head=None, hints=(), epsabs=None, epsrel=None):
    """``\\int h(r) g(r) dr`` over ``(support_min, inf)``.

    ``tail``/``head`` are :class:`PowerLaw` descriptors of ``h``.  Raises
    :class:`DivergentIntegralError` when the integral is infinite.
    """
    epsabs, epsrel = tolerances(epsabs, epsrel)
    g = weight.func

    def f(r):
        return h(r) * g(r)

    scales = [s for s in (weight.scale, *hints) if s and math.isfinite(s) and s > 0]
    if support_min > 0:
        scales.append(support_min)
    s_lo, s_hi = min(scales), max(scales)
    pad = 10.0 ** TAIL_DECADES

    # upper end of the numerically integrated body
    r_top = s_hi * pad
    use_tail = tail is not None and tail.exact and weight.hi is not None
    if use_tail:
        r_top = max(r_top, tail.bound)
    elif tail is not None and tail.exact and weight.hi is None:
        r_top = max(r_top, tail.bound)

    # lower end
    if support_min > 0:
        r_bot = support_min
        use_head = False
    else:
        r_bot = s_lo / pad
        use_head = head is not None and head.exact and weight.lo is not None
        if use_head:
            r_bot = min(r_bot, head.bound)

    body, err = log_axis_quad(f, r_bot, r_top, breakpoints=scales,
                              epsabs=epsabs, epsrel=epsrel,
                              is_complex=weight.is_complex)
    total = body
    status = "converged"

    if weight.hi is None and weight.scale > 0:
        pass  # weight decays faster than any power beyond r_top
    elif use_tail:
        c, q = weight.hi
        total += _power_tail(c, q, tail, math.log(r_top))
    elif tail is not None and weight.hi is not None:
        # asymptotic law only: it decides convergence, quad does the rest on
        # the log axis (the integrand decays like exp(e u) there)
        _check_power(tail, weight.hi[1], upper=True)
        v, e = log_axis_quad(f, r_top, math.inf, epsabs=epsabs, epsrel=epsrel,
                             is_complex=weight.is_complex)
        total += v
        err += e
    else:
        def piece(a, b):
            return log_axis_quad(f, a, b, epsabs=epsabs, epsrel=epsrel,
                                 is_complex=weight.is_complex,
                                 panel_width=math.inf)[0]
        inc, st = _cutoff_series(piece, r_top, 2.0, epsabs, epsrel, total)
        total += inc
        if st == "diverged":
            raise DivergentIntegralError("integral grows without bound at large r",
                                         partial=total)
        if st == "slow":
            status = "slow"

    if support_min <= 0:
        if use_head:
            c, q = weight.lo
            total += _power_head(c, q, head, r_bot)
        elif head is not None and weight.lo is not None:
            _check_power(head, weight.lo[1], upper=False)
            v, e = log_axis_quad(f, 0.0, r_bot, epsabs=epsabs, epsrel=epsrel,
                                 is_complex=weight.is_complex)
            total += v
            err += e
        else:
            def piece(a, b):
                return log_axis_quad(f, a, b, epsabs=epsabs, epsrel=epsrel,
                                     is_complex=weight.is_complex,
                                     panel_width=math.inf)[0]
            inc, st = _cutoff_series(piece, r_bot, 0.5, epsabs, epsrel, total)
            total += inc
            if st == "diverged":
                raise DivergentIntegralError("integral grows without bound at small r",
                                             partial=total)
            if st == "slow":
                status = "slow"
    return DensityIntegral(total, err, status)
