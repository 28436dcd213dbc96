"""Positive Radon measures on the half-line and their integral transforms.

A :class:`SpectralMeasure` is a finite set of atoms plus an optional smooth
density.  It is the common currency of the package: the Bernstein measure of
a relaxation kernel and the attenuation spectrum of the wavenumber function
are both represented this way, and the attenuation, dispersion, CBF and
Laplace-type integrals are all evaluated by :func:`integrate`.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ._quad import (DivergentIntegralError, PowerLaw, QuadratureError, Weight,
                    integrate_density, tolerances)

__all__ = [
    "Density", "SpectralMeasure", "IntegrabilityReport", "PowerLaw",
    "QuadratureError", "DivergentIntegralError", "MeasureError",
    "integrate", "integrability_report", "attenuation_from_measure",
    "dispersion_from_measure", "beta_eval", "deficit_eval", "bernstein_eval", "stieltjes",
    "first_moment", "total_mass", "power_density",
    "measure_to_json", "measure_from_json",
]


class MeasureError(ValueError):
    """The measure violates a structural invariant (names the invariant)."""

    def __init__(self, invariant, message):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


@dataclass(frozen=True)
class Density:
    """Absolutely continuous part ``h(r) dr`` of a measure.

    Parameters
    ----------
    func : callable
        Vectorised ``h(r) >= 0``; it is only evaluated for ``r > support_min``.
    tail, head : PowerLaw, optional
        Behaviour as ``r -> inf`` and ``r -> 0``.  Exact laws are used for
        closed-form tail integration, asymptotic ones only for integrability
        decisions.
    support_min : float
        ``h`` vanishes below this rate.
    kind, params
        Serialisable description (only ``kind == "quasilinear"`` round-trips
        through JSON).
    """

    func: Callable
    tail: Optional[PowerLaw] = None
    head: Optional[PowerLaw] = None
    support_min: float = 0.0
    kind: str = "callable"
    params: dict = field(default_factory=dict)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        out = np.where(r > self.support_min, self.func(np.maximum(r, self.support_min)), 0.0)
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class SpectralMeasure:
    """Atoms ``sum_k m_k delta(r - r_k)`` plus an optional density.

    ``grid`` is a ``(r_lo, r_hi)`` hint telling the quadrature where the
    measure carries its structure.
    """

    atoms: tuple = ()
    density: Optional[Density] = None
    grid: Optional[tuple] = None

    def __post_init__(self):
        atoms = tuple((float(r), float(m)) for r, m in self.atoms)
        for r, m in atoms:
            if not (r > 0 and math.isfinite(r)):
                raise MeasureError("positive_locations", f"atom location {r!r} must be > 0")
            if not (m > 0 and math.isfinite(m)):
                raise MeasureError("positive_weights", f"atom weight {m!r} must be > 0")
        object.__setattr__(self, "atoms", atoms)

    @property
    def is_zero(self):
        return not self.atoms and self.density is None

    @property
    def hints(self):
        pts = [r for r, _ in self.atoms]
        if self.grid:
            pts.extend(self.grid)
        if self.density is not None and self.density.support_min > 0:
            pts.append(self.density.support_min)
        return tuple(pts)


def integrate(measure: SpectralMeasure, weight: Weight, *, epsabs=None, epsrel=None):
    """``\\int g(r) nu(dr)``: exact atom sum plus density quadrature."""
    acc = 0j if weight.is_complex else 0.0
    for r, m in measure.atoms:
        acc += m * weight.func(r)
    dens = measure.density
    if dens is None:
        return acc
    res = integrate_density(dens.func, weight, support_min=dens.support_min,
                            tail=dens.tail, head=dens.head, hints=measure.hints,
                            epsabs=epsabs, epsrel=epsrel)
    return acc + res.value


# -- weights ---------------------------------------------------------------

def _w_mass():
    return Weight(lambda r: np.ones_like(np.asarray(r, dtype=float)), 1.0,
                  hi=(1.0, 0.0), lo=(1.0, 0.0))


def _w_over_1plus_r():
    return Weight(lambda r: 1.0 / (1.0 + r), 1.0, hi=(1.0, -1.0), lo=(1.0, 0.0))


def _w_over_r():
    return Weight(lambda r: 1.0 / r, 1.0, hi=(1.0, -1.0), lo=(1.0, -1.0))


def _w_first_moment():
    return Weight(lambda r: r, 1.0, hi=(1.0, 1.0), lo=(1.0, 1.0))


def _w_attenuation(omega):
    w2 = omega * omega
    return Weight(lambda r: w2 / (w2 + r * r), omega, hi=(w2, -2.0), lo=(1.0, 0.0))


def _w_dispersion(omega):
    w2 = omega * omega
    return Weight(lambda r: omega * r / (w2 + r * r), omega, hi=(omega, -1.0),
                  lo=(1.0 / omega, 1.0))


def _w_beta(p):
    return Weight(lambda r: p / (r + p), abs(p), hi=(p, -1.0), lo=(1.0, 0.0),
                  is_complex=True)


def _w_deficit(p):
    # r/(r + p): the complement of the beta weight, without cancellation
    return Weight(lambda r: r / (r + p), abs(p), hi=(1.0, 0.0), lo=(1.0 / p, 1.0),
                  is_complex=True)


def _w_laplace(t):
    return Weight(lambda r: np.exp(-r * t), 1.0 / t, hi=None, lo=(1.0, 0.0))


def _w_stieltjes(x):
    return Weight(lambda r: 1.0 / (x + r), x, hi=(1.0, -1.0), lo=(1.0 / x, 0.0))


# -- integrability -----------------------------------------------------------

@dataclass(frozen=True)
class IntegrabilityReport:
    finite_over_1plus_r: bool
    finite_over_r: bool
    total_mass: float


def _tail_decision(law: PowerLaw, weight_pow):
    """Finiteness of ``\\int^inf r**(lam + q) / ln(r)**gamma dr``."""
    e = law.exponent + weight_pow + 1.0
    if abs(e) <= 1e-12:
        return law.log_exponent > 1.0
    return e < 0


def _head_decision(law: PowerLaw, weight_pow):
    return law.exponent + weight_pow + 1.0 > 0


def _finite(measure, weight, weight_hi_pow, weight_lo_pow):
    dens = measure.density
    if dens is None:
        return True, integrate(measure, weight)
    decided = []
    if dens.tail is not None:
        decided.append(_tail_decision(dens.tail, weight_hi_pow))
    if dens.support_min <= 0 and dens.head is not None:
        decided.append(_head_decision(dens.head, weight_lo_pow))
    if decided and not all(decided):
        return False, None
    try:
        val = integrate(measure, weight)
    except DivergentIntegralError:
        return False, None
    return True, val


def integrability_report(measure: SpectralMeasure) -> IntegrabilityReport:
    """Decide ``\\int nu/(1+r)``, ``\\int nu/r`` and the total mass.

    Tail/head descriptors settle the question analytically where present;
    otherwise the integral is computed with doubling cutoffs and declared
    infinite when it keeps growing.
    """
    try:
        f1, _ = _finite(measure, _w_over_1plus_r(), -1.0, 0.0)
        fr, _ = _finite(measure, _w_over_r(), -1.0, -1.0)
        fm, mass = _finite(measure, _w_mass(), 0.0, 0.0)
    except QuadratureError as exc:
        raise QuadratureError(f"density not evaluable: {exc}") from exc
    total = float(mass.real if isinstance(mass, complex) else mass) if fm else math.inf
    return IntegrabilityReport(f1, fr, total)


# -- transforms --------------------------------------------------------------

def _vectorize(fn, x):
    arr = np.asarray(x)
    if arr.ndim == 0:
        return fn(arr.item())
    out = [fn(v) for v in arr.ravel()]
    return np.asarray(out).reshape(arr.shape)


def attenuation_from_measure(measure: SpectralMeasure, omega, *, epsabs=None, epsrel=None):
    """Attenuation ``omega^2 \\int nu(dr) / (omega^2 + r^2)`` in Np/m.

    Raises :class:`DivergentIntegralError` (with ``partial``) if the
    integral does not converge.
    """
    def one(w):
        if w < 0:
            raise ValueError("omega must be >= 0")
        if w == 0 or measure.is_zero:
            return 0.0
        return float(np.real(integrate(measure, _w_attenuation(w), epsabs=epsabs, epsrel=epsrel)))
    return _vectorize(one, omega)


def dispersion_from_measure(measure: SpectralMeasure, omega, *, epsabs=None, epsrel=None):
    """Excess dispersion ``omega \\int r nu(dr) / (omega^2 + r^2)`` in rad/m."""
    def one(w):
        if w < 0:
            raise ValueError("omega must be >= 0")
        if w == 0 or measure.is_zero:
            return 0.0
        return float(np.real(integrate(measure, _w_dispersion(w), epsabs=epsabs, epsrel=epsrel)))
    return _vectorize(one, omega)


def beta_eval(measure: SpectralMeasure, p, *, epsabs=None, epsrel=None):
    """CBF part ``beta(p) = p \\int nu(dr) / (r + p)``.

    At ``p = -i omega`` the real part is the attenuation and minus the
    imaginary part the excess dispersion.  The negative real axis is the
    branch cut; boundary values there are obtained with
    :func:`viscowave.dispersion.extract_measure`'s one-sided limit instead.
    """
    def one(z):
        z = complex(z)
        if z.imag == 0 and z.real < 0:
            raise ValueError("p lies on the branch cut (negative real axis); "
                             "use the one-sided limit in viscowave.dispersion")
        if z == 0 or measure.is_zero:
            return 0j
        return complex(integrate(measure, _w_beta(z), epsabs=epsabs, epsrel=epsrel))
    return _vectorize(one, p)


def deficit_eval(measure: SpectralMeasure, p, *, epsabs=None, epsrel=None):
    """``\\int r nu(dr) / (r + p)``, i.e. total mass minus ``beta(p)``."""
    def one(z):
        z = complex(z)
        if z.imag == 0 and z.real < 0:
            raise ValueError("p lies on the branch cut (negative real axis)")
        if measure.is_zero:
            return 0j
        if z == 0:
            return complex(integrate(measure, _w_mass()))
        return complex(integrate(measure, _w_deficit(z), epsabs=epsabs, epsrel=epsrel))
    return _vectorize(one, p)


def bernstein_eval(measure: SpectralMeasure, t, *, epsabs=None, epsrel=None):
    """Laplace transform ``\\int e^{-r t} nu(dr)`` for ``t > 0``."""
    def one(s):
        if not s > 0:
            raise ValueError("t must be > 0 (the value at t = 0 may be infinite)")
        if measure.is_zero:
            return 0.0
        return float(np.real(integrate(measure, _w_laplace(s), epsabs=epsabs, epsrel=epsrel)))
    return _vectorize(one, t)


def first_moment(measure: SpectralMeasure):
    """``\\int r nu(dr)``, ``inf`` when divergent."""
    dens = measure.density
    if dens is not None and dens.tail is not None and not _tail_decision(dens.tail, 1.0):
        return math.inf
    try:
        return float(np.real(integrate(measure, _w_first_moment())))
    except DivergentIntegralError:
        return math.inf


def total_mass(measure: SpectralMeasure):
    return integrability_report(measure).total_mass


def stieltjes(measure: SpectralMeasure, x, *, epsabs=None, epsrel=None):
    """Stieltjes transform ``\\int nu(dy) / (x + y)`` for ``x > 0``."""
    return _vectorize(lambda s: float(np.real(integrate(measure, _w_stieltjes(s),
                                                        epsabs=epsabs, epsrel=epsrel))), x)


# -- constructors and JSON -----------------------------------------------------

def power_density(prefactor, exponent, log_exponent=0.0, support_min=0.0, kind="quasilinear"):
    """Density ``b r**lam / ln(r)**gamma`` on ``r > support_min``."""
    b, lam, gam = float(prefactor), float(exponent), float(log_exponent)
    if gam != 0.0 and support_min < 1.0:
        raise MeasureError("log_support", "a log factor needs support_min >= 1 so that ln r > 0")

    def h(r):
        r = np.asarray(r, dtype=float)
        out = b * r ** lam
        if gam:
            out = out / np.log(r) ** gam
        return out

    tail = PowerLaw(b, lam, gam, bound=max(support_min, 1.0 if gam else 0.0), exact=True)
    head = PowerLaw(b, lam, 0.0, bound=math.inf, exact=True) if (support_min == 0 and gam == 0) else None
    params = {"b": b, "lambda": lam, "gamma": gam, "support_min": float(support_min)}
    return Density(h, tail=tail, head=head, support_min=float(support_min), kind=kind,
                   params=params)


def measure_to_json(measure: SpectralMeasure) -> str:
    doc = {"atoms": [[r, m] for r, m in measure.atoms]}
    if measure.density is not None:
        if measure.density.kind != "quasilinear":
            raise TypeError(f"density of kind {measure.density.kind!r} is not serialisable")
        doc["density"] = {"kind": "quasilinear", **measure.density.params}
    return json.dumps(doc, sort_keys=True)


def measure_from_json(doc) -> SpectralMeasure:
    """Inverse of :func:`measure_to_json`; accepts a string or a parsed dict."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    atoms = tuple(tuple(a) for a in doc.get("atoms", []))
    for a in atoms:
        if len(a) != 2:
            raise MeasureError("atom_shape", f"atom {list(a)!r} must be [r, m]")
    density = None
    d = doc.get("density")
    if d is not None:
        if d.get("kind") != "quasilinear":
            raise MeasureError("density_kind", f"unsupported density kind {d.get('kind')!r}")
        from .kernels import quasilinear_measure
        density = quasilinear_measure(d["b"], d["lambda"], d["gamma"], d["support_min"]).density
    return SpectralMeasure(atoms, density)
