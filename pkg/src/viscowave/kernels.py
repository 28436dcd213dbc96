"""Completely monotone relaxation kernels and their Laplace symbols.

Every family exposes its symbol ``p K~(p)`` in closed form, so the complex
wavenumber never depends on a numerical Laplace transform.  Families with a
finite instantaneous modulus ``K0`` also expose the *deficit*
``K0 - p K~(p)``, which lets the dispersion module form ``kappa(p) - B p``
without cancellation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.special import gamma as gamma_fn

from . import measures as _m
from .measures import Density, MeasureError, PowerLaw, SpectralMeasure
from .mlf import ml_neg_power

__all__ = [
    "Medium", "RelaxationKernel", "PronyKernel", "ColeColeKernel", "ConstantQKernel",
    "NewtonianKernel", "MeasureKernel", "UnsupportedOperationError", "KernelError",
    "prony_kernel", "cole_cole_kernel", "constant_q_kernel", "newtonian_kernel",
    "measure_kernel", "quasilinear_measure", "normalize_static",
]


class KernelError(ValueError):
    pass


class UnsupportedOperationError(NotImplementedError):
    pass


@dataclass(frozen=True)
class Medium:
    """Background fluid: elastic speed ``c0`` (m/s) and density ``rho0`` (kg/m^3)."""

    c0: float
    rho0: float

    def __post_init__(self):
        if not (self.c0 > 0 and math.isfinite(self.c0)):
            raise KernelError(f"c0 must be positive, got {self.c0!r}")
        if not (self.rho0 > 0 and math.isfinite(self.rho0)):
            raise KernelError(f"rho0 must be positive, got {self.rho0!r}")

    @property
    def bigK(self):
        """Bulk parameter ``rho0 c0^2`` (Pa)."""
        return self.rho0 * self.c0 ** 2


def _as_complex(p):
    return np.asarray(p, dtype=complex)


def _out(x):
    return x if np.ndim(x) else x.item()


class RelaxationKernel:
    """Interface shared by all kernel families.

    Subclasses provide ``family``, ``K``, ``symbol``, ``K0``, ``Kinf``,
    ``K0prime``, ``measure`` (Bernstein measure, if known) and ``tau_char``.
    """

    family = "custom"
    measure: Optional[SpectralMeasure] = None

    def K(self, t):
        raise UnsupportedOperationError(f"{self.family} kernel has no pointwise values")

    def symbol(self, p):
        raise NotImplementedError

    def deficit(self, p):
        """``K0 - p K~(p)``; only meaningful when ``K0`` is finite."""
        if not math.isfinite(self.K0):
            raise UnsupportedOperationError("deficit needs a finite K0")
        return _out(self.K0 - _as_complex(self.symbol(p)))

    @property
    def is_zero(self):
        return False

    # names used by the public capability contract
    def eval_K(self, t):
        return self.K(t)

    def eval_symbol(self, p):
        return self.symbol(p)


@dataclass(frozen=True)
class PronyKernel(RelaxationKernel):
    """``K(t) = offset + sum_n lambda_n exp(-r_n t)``."""

    terms: tuple = ()
    offset: float = 0.0
    family = "prony"

    def __post_init__(self):
        terms = tuple((float(lam), float(r)) for lam, r in self.terms)
        for lam, r in terms:
            if not (lam > 0 and r > 0 and math.isfinite(lam) and math.isfinite(r)):
                raise KernelError(f"Prony term ({lam!r}, {r!r}) needs lambda_n > 0 and r_n > 0")
        if self.offset < 0:
            raise KernelError("offset (static modulus) must be >= 0")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_lam", np.array([t[0] for t in terms]))
        object.__setattr__(self, "_r", np.array([t[1] for t in terms]))

    @property
    def is_zero(self):
        return not self.terms and self.offset == 0

    def K(self, t):
        t = np.asarray(t, dtype=float)
        vals = self.offset + np.sum(self._lam * np.exp(-np.multiply.outer(t, self._r)), axis=-1)
        return _out(np.asarray(vals))

    def symbol(self, p):
        p = _as_complex(p)
        pe = p[..., None]
        return _out(self.offset + np.sum(self._lam * pe / (pe + self._r), axis=-1))

    def deficit(self, p):
        p = _as_complex(p)
        pe = p[..., None]
        return _out(np.sum(self._lam * self._r / (pe + self._r), axis=-1) + 0j)

    @property
    def K0(self):
        return float(self.offset + self._lam.sum())

    @property
    def Kinf(self):
        return float(self.offset)

    @property
    def K0prime(self):
        return float(-(self._r * self._lam).sum())

    @property
    def measure(self):
        return SpectralMeasure(tuple(zip(self._r, self._lam)))

    @property
    def tau_char(self):
        if not self.terms:
            return 1.0
        return float(self.K0 - self.offset) / float((self._r * self._lam).sum())


@dataclass(frozen=True)
class ColeColeKernel(RelaxationKernel):
    """``K(t) = M (1 - a) E_alpha(-(t/tau)^alpha)``; the static part ``M a`` is
    subtracted so that ``Kinf = 0``."""

    M: float
    a: float
    tau: float
    alpha: float
    family = "cole_cole"

    def __post_init__(self):
        if not self.M > 0:
            raise KernelError("Cole-Cole M must be > 0")
        if not self.tau > 0:
            raise KernelError("Cole-Cole tau must be > 0")
        if not 0 < self.alpha < 1:
            raise KernelError("Cole-Cole alpha must lie in (0, 1)")
        if not 0 < self.a <= 1:
            raise KernelError("Cole-Cole a must lie in (0, 1]")

    @property
    def is_zero(self):
        return self.a == 1

    def K(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t <= 0):
            raise ValueError("t must be > 0")
        return _out(np.asarray(self.K0 * ml_neg_power(self.alpha, t / self.tau)))

    def _y(self, p):
        return (self.tau * _as_complex(p)) ** self.alpha

    def symbol(self, p):
        y = self._y(p)
        with np.errstate(invalid="ignore"):
            s = self.K0 * y / (1.0 + y)
        s = np.where(np.isinf(y), self.K0 + 0j, s)
        return _out(s)

    def deficit(self, p):
        return _out(self.K0 / (1.0 + self._y(p)))

    @property
    def K0(self):
        return self.M * (1.0 - self.a)

    Kinf = 0.0

    @property
    def K0prime(self):
        return -math.inf if self.K0 > 0 else 0.0

    @property
    def measure(self):
        if self.K0 == 0:
            return SpectralMeasure()
        al, tau, k0 = self.alpha, self.tau, self.K0
        s = math.sin(al * math.pi) / math.pi
        c = math.cos(al * math.pi)

        def h(r):
            x = tau * np.asarray(r, dtype=float)
            xa = x ** al
            with np.errstate(over="ignore"):
                return k0 * s * tau * xa / x / (xa * xa + 2.0 * xa * c + 1.0)

        dens = Density(h, tail=PowerLaw(k0 * s * tau ** -al, -al - 1.0),
                       head=PowerLaw(k0 * s * tau ** al, al - 1.0), kind="cole_cole")
        return SpectralMeasure((), dens, grid=(1.0 / tau, 1.0 / tau))

    @property
    def tau_char(self):
        return self.tau


@dataclass(frozen=True)
class ConstantQKernel(RelaxationKernel):
    """``K(t) = A (t/tau)^{-alpha} / Gamma(1 - alpha)``, symbol ``A (tau p)^alpha``.

    Strongly singular at ``t = 0``: ``K0 = inf`` and there is no wavefront.
    """

    A: float
    tau: float
    alpha: float
    family = "constant_q"

    def __post_init__(self):
        if not (self.A > 0 and self.tau > 0):
            raise KernelError("constant-Q A and tau must be > 0")
        if not 0 < self.alpha < 1:
            raise KernelError("constant-Q alpha must lie in (0, 1)")

    def K(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t <= 0):
            raise ValueError("t must be > 0")
        return _out(self.A * (t / self.tau) ** -self.alpha / gamma_fn(1.0 - self.alpha))

    def symbol(self, p):
        return _out(self.A * (self.tau * _as_complex(p)) ** self.alpha)

    K0 = math.inf
    Kinf = 0.0
    K0prime = -math.inf

    @property
    def measure(self):
        b = self.A * self.tau ** self.alpha * math.sin(math.pi * self.alpha) / math.pi
        dens = _m.power_density(b, self.alpha - 1.0, 0.0, 0.0, kind="power")
        return SpectralMeasure((), dens, grid=(1.0 / self.tau, 1.0 / self.tau))

    @property
    def tau_char(self):
        return self.tau


@dataclass(frozen=True)
class NewtonianKernel(RelaxationKernel):
    """Newtonian viscosity ``K(t) = N delta(t)``: symbol ``N p`` only."""

    N: float
    family = "newtonian"

    def __post_init__(self):
        if not self.N > 0:
            raise KernelError("Newtonian N must be > 0")

    def K(self, t):
        raise UnsupportedOperationError(
            "the Newtonian kernel N delta(t) is a distribution; only its symbol N p exists")

    def symbol(self, p):
        return _out(self.N * _as_complex(p))

    K0 = math.inf
    Kinf = 0.0
    K0prime = -math.inf
    measure = None
    tau_char = None


@dataclass(frozen=True)
class MeasureKernel(RelaxationKernel):
    """``K(t) = offset + \\int e^{-r t} lambda(dr)`` for a user-supplied measure."""

    bernstein: SpectralMeasure
    offset: float = 0.0
    family = "custom_measure"

    def __post_init__(self):
        rep = _m.integrability_report(self.bernstein)
        if not rep.finite_over_1plus_r:
            raise KernelError("Bernstein measure violates \\int lambda(dr)/(1+r) < inf "
                              "(kernel not locally integrable)")
        if self.offset < 0:
            raise KernelError("offset (static modulus) must be >= 0")
        object.__setattr__(self, "_mass", rep.total_mass)

    @property
    def measure(self):
        return self.bernstein

    @property
    def is_zero(self):
        return self.bernstein.is_zero and self.offset == 0

    def K(self, t):
        return _out(np.asarray(self.offset + np.asarray(_m.bernstein_eval(self.bernstein, t))))

    def symbol(self, p):
        return _out(self.offset + _as_complex(_m.beta_eval(self.bernstein, p)))

    def deficit(self, p):
        if not math.isfinite(self.K0):
            raise UnsupportedOperationError("deficit needs a finite K0")
        return _out(_as_complex(_m.deficit_eval(self.bernstein, p)))

    @property
    def K0(self):
        return self.offset + self._mass

    @property
    def Kinf(self):
        return float(self.offset)

    @property
    def K0prime(self):
        return -_m.first_moment(self.bernstein)

    @property
    def tau_char(self):
        pts = self.bernstein.hints
        if not pts:
            return 1.0
        return 1.0 / math.exp(np.mean(np.log(pts)))


# -- constructors --------------------------------------------------------------

def prony_kernel(terms, offset=0.0) -> PronyKernel:
    """Prony series from ``[(lambda_n, r_n), ...]``; an empty list is the zero kernel."""
    return PronyKernel(tuple(terms), float(offset))


def cole_cole_kernel(M, a, tau, alpha) -> ColeColeKernel:
    return ColeColeKernel(float(M), float(a), float(tau), float(alpha))


def constant_q_kernel(A, tau, alpha) -> ConstantQKernel:
    return ConstantQKernel(float(A), float(tau), float(alpha))


def newtonian_kernel(N) -> NewtonianKernel:
    return NewtonianKernel(float(N))


def measure_kernel(measure: SpectralMeasure, offset=0.0) -> MeasureKernel:
    return MeasureKernel(measure, float(offset))


def quasilinear_measure(b, lambda_q, gamma, support_min) -> SpectralMeasure:
    """Measure with density ``b r^lambda_q / ln(r)^gamma`` for ``r > support_min``.

    The integrability condition (``lambda_q < 0``, or ``lambda_q == 0`` and ``gamma > 1``)
    is exactly the requirement ``\\int nu(dr)/(1 + r) < inf``; anything else
    is rejected.
    """
    b, lam, gam, rmin = float(b), float(lambda_q), float(gamma), float(support_min)
    if not b > 0:
        raise MeasureError("positive_density", "prefactor b must be > 0")
    if not rmin > 1:
        raise MeasureError("log_support", "support_min must exceed 1 so that ln r > 0")
    if not (lam < 0 or (lam == 0 and gam > 1)):
        raise MeasureError(
            "condition_star",
            f"lambda_q={lam:g}, gamma={gam:g} violates the integrability condition (need lambda_q < 0, "
            "or lambda_q = 0 and gamma > 1): \\int nu(dr)/(1+r) diverges")
    return SpectralMeasure((), _m.power_density(b, lam, gam, rmin, kind="quasilinear"),
                           grid=(rmin, rmin))


def normalize_static(kernel: RelaxationKernel, medium: Medium):
    """Move the static modulus ``Kinf`` from the kernel into ``bigK``.

    Returns ``(kernel', medium')`` with ``kernel'.Kinf == 0`` and
    ``medium'.bigK = medium.bigK + Kinf``; the wavenumber is unchanged.
    """
    kinf = kernel.Kinf
    if not math.isfinite(kinf):
        raise KernelError("Kinf must be finite")
    if kinf == 0:
        return kernel, medium
    new_medium = Medium(math.sqrt((medium.bigK + kinf) / medium.rho0), medium.rho0)
    return replace(kernel, offset=0.0), new_medium
