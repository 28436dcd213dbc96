"""Green's functions of the viscoelastic pressure equation by Fourier synthesis.

The 1-D field for an impulsive initial velocity source is

    P(t, x) = 1/(4 pi i) \\int_Br F1(p) exp(p t - kappa(p) |x|) S(p) dp,
    F1(p) = kappa(p) / p^2,

with an optional Gaussian source taper ``S(p) = exp(p^2 / (2 sigma_s^2))``
(a Gaussian smoothing in time of width ``1/sigma_s``).  The Bromwich line is
placed at ``Re p = eps > 0``, which moves the double pole at ``p = 0`` off
the contour; on ``p = eps - i omega`` the integral is an ordinary Fourier
integral of ``P(t) e^{-eps t}``, evaluated with a real inverse FFT.  Time
aliasing is suppressed by ``exp(-eps T)`` with ``eps T = 23``.

The 3-D field follows from the 1-D one by radial differentiation,
``P3(t, r) = -(1/(2 pi r)) dQ/dr``.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .dispersion import attenuation, characteristic_time, kappa, wavefront_speed
from .kernels import Medium, RelaxationKernel

__all__ = ["GreenField", "GreenError", "green_1d", "green_derivatives", "green_3d",
           "arrival_diagnostics", "EPS_T", "ALIAS_RTOL"]

EPS_T = 23.0          # damping times period: aliasing suppressed by e^-23
NYQUIST_SIGMAS = 8.0  # Nyquist frequency in units of the taper width
RAW_DECAY = 40.0      # raw synthesis: cut where A(omega) x reaches this
ALIAS_RTOL = 1e-4
MAX_N = 2 ** 22
FD_STEP = 1e-4


class GreenError(ValueError):
    pass


@dataclass
class GreenField:
    """Sampled field ``P(t)`` at one position.

    ``predicted_arrival`` is ``position / C0`` (0 when ``C0`` is infinite).
    """

    dim: int
    position: float
    t: np.ndarray
    values: np.ndarray
    sigma_s: float
    C0: float
    predicted_arrival: float
    orders: tuple = (0, 0)
    meta: dict = field(default_factory=dict)

    @property
    def dt(self):
        return float(self.t[1] - self.t[0]) if self.t.size > 1 else 0.0

    def metadata(self):
        d = {
            "schema_version": 1,
            "dim": self.dim,
            "position_m": self.position,
            "sigma_s": self.sigma_s,
            "C0": "inf" if math.isinf(self.C0) else self.C0,
            "predicted_arrival_s": self.predicted_arrival,
            "derivative_orders": list(self.orders),
        }
        d.update(self.meta)
        return d

    def to_csv(self, path):
        path = Path(path)
        with path.open("w", newline="") as fh:
            wr = csv.writer(fh, lineterminator="\n")
            wr.writerow(("t_s", "value"))
            for t, v in zip(self.t, self.values):
                wr.writerow((repr(float(t)), repr(float(v))))
        side = path.with_suffix(".json")
        side.write_text(json.dumps(self.metadata(), indent=2, sort_keys=True) + "\n")
        return path, side


def _check_grid(t_grid):
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size < 2:
        raise GreenError("time grid needs at least two points")
    dt = np.diff(t)
    if np.any(dt <= 0) or np.ptp(dt) > 1e-9 * dt.mean():
        raise GreenError("time grid must be uniform and increasing")
    if t[0] < 0:
        raise GreenError("time grid must start at t >= 0")
    return t, float(dt.mean())


def _raw_cutoff(medium, kernel, x_min):
    """Frequency where ``A(omega) x_min`` first exceeds RAW_DECAY."""
    tau = characteristic_time(medium, kernel) or 1.0
    w = 1.0 / tau
    for _ in range(400):
        if attenuation(medium, kernel, w) * x_min >= RAW_DECAY:
            return w
        w *= 2.0
    raise GreenError("attenuation grows too slowly for raw synthesis; use sigma_s > 0")


def _bounded_attenuation(kernel):
    return kernel.is_zero or (math.isfinite(kernel.K0) and math.isfinite(kernel.K0prime))


def _plan(t, dt, bandwidth, sigma_s, refine):
    """Internal step (a divisor of ``dt``) and FFT size."""
    sub = max(1, int(math.ceil(dt * bandwidth / math.pi)))
    sub *= 2 ** refine
    dti = dt / sub
    T = max(2.0 * t[-1], 40.0 / sigma_s if sigma_s > 0 else 0.0, 4.0 * dt)
    n = 1 << int(math.ceil(math.log2(T / dti)))
    if n > MAX_N:
        raise GreenError(f"FFT size {n} exceeds {MAX_N}; lower t_max or sigma_s")
    return sub, dti, n


def _synth(medium, kernel, xs, t, dt, sigma_s, m, n_ord, source, bandwidth, refine):
    sub, dti, N = _plan(t, dt, bandwidth, sigma_s, refine)
    T = N * dti
    eps = EPS_T / T
    t0 = t[0]
    dw = 2.0 * math.pi / T
    w = dw * np.arange(N // 2 + 1)
    p = eps - 1j * w
    kap = np.asarray(kappa(medium, kernel, p), dtype=complex)
    base = kap / p ** 2 * np.exp(-1j * w * t0)
    if m:
        base = base * p ** m
    if n_ord:
        base = base * (-kap) ** n_ord
    if source is not None:
        base = base * np.asarray(source(p), dtype=complex)
    elif sigma_s > 0:
        base = base * np.exp(p * p / (2.0 * sigma_s ** 2))
    j = np.arange(t.size) * sub
    s = j * dti
    out = np.empty((len(xs), t.size))
    resid = 0.0
    for i, x in enumerate(xs):
        H = base * np.exp(-kap * x)
        H[~np.isfinite(H)] = 0.0
        # 1/(4 pi): the residue at k = i kappa carries a factor 1/2
        seq = np.fft.irfft(np.conj(H), n=N) * (N * dw / (4.0 * math.pi))
        out[i] = seq[j] * np.exp(eps * (t0 + s))
        if i == 0:
            # two-sided spectrum through a complex FFT: its imaginary part
            # measures how far the samples are from Hermitian symmetry
            G = np.conj(H)
            G[0] = G[0].real
            G[-1] = G[-1].real
            full = np.concatenate([G, np.conj(G[-2:0:-1])])
            z = np.fft.ifft(full)
            resid = float(np.max(np.abs(z.imag)) / max(np.max(np.abs(z.real)), 1e-300))
    return out, {"fft_size": N, "dt_internal": dti, "epsilon": eps, "imag_residue": resid}


def _fields(medium, kernel, xs, t_grid, sigma_s, m=0, n_ord=0, source=None):
    t, dt = _check_grid(t_grid)
    xs = [float(x) for x in xs]
    if any(not x > 0 for x in xs):
        raise GreenError("positions must be > 0")
    if sigma_s < 0:
        raise GreenError("sigma_s must be >= 0")
    if sigma_s == 0 and source is None:
        if _bounded_attenuation(kernel):
            raise GreenError("attenuation is bounded, so the untapered integrand does not "
                             "decay; pass sigma_s > 0")
        bandwidth = _raw_cutoff(medium, kernel, min(xs))
    else:
        if sigma_s == 0:
            raise GreenError("a custom source needs sigma_s > 0 to set the bandwidth")
        bandwidth = NYQUIST_SIGMAS * sigma_s
    prev, info = _synth(medium, kernel, xs, t, dt, sigma_s, m, n_ord, source, bandwidth, 0)
    change = math.inf
    for refine in range(1, 4):
        cur, info = _synth(medium, kernel, xs, t, dt, sigma_s, m, n_ord, source,
                           bandwidth, refine)
        scale = np.max(np.abs(cur), axis=1, keepdims=True)
        scale[scale == 0] = 1.0
        change = float(np.max(np.abs(cur - prev) / scale))
        prev = cur
        if change < ALIAS_RTOL:
            break
    else:
        raise GreenError(f"synthesis did not settle under grid doubling (change {change:.2e})")
    info["alias_change"] = change
    return t, prev, info


def green_1d(medium: Medium, kernel: RelaxationKernel, x, t_grid, sigma_s=0.0, *,
             source: Optional[Callable] = None):
    """1-D Green's function at position(s) ``x``.

    Returns a :class:`GreenField`, or a list of them when ``x`` is a
    sequence (all positions share one spectral pass).  ``source(p)``, if
    given, replaces the Gaussian taper; ``sigma_s`` then only sets the
    bandwidth.
    """
    many = np.ndim(x) > 0
    xs = list(np.atleast_1d(x))
    t, vals, info = _fields(medium, kernel, xs, t_grid, sigma_s, source=source)
    out = [_wrap(1, medium, kernel, xi, t, v, sigma_s, (0, 0), info) for xi, v in zip(xs, vals)]
    return out if many else out[0]


def green_derivatives(medium, kernel, x, t_grid, m, n, sigma_s, *, source=None):
    """``d^m/dt^m d^n/dx^n P`` by synthesis with the extra factor ``p^m (-kappa)^n``."""
    if m < 0 or n < 0 or m + n > 4:
        raise GreenError("derivative orders must satisfy m, n >= 0 and m + n <= 4")
    if not sigma_s > 0:
        raise GreenError("derivative fields need a source taper (sigma_s > 0)")
    many = np.ndim(x) > 0
    xs = list(np.atleast_1d(x))
    t, vals, info = _fields(medium, kernel, xs, t_grid, sigma_s, m, n, source)
    out = [_wrap(1, medium, kernel, xi, t, v, sigma_s, (m, n), info) for xi, v in zip(xs, vals)]
    return out if many else out[0]


def green_3d(medium, kernel, r, t_grid, sigma_s=0.0, *, h=FD_STEP, source=None):
    """3-D Green's function ``-(1/(2 pi r)) dQ/dr`` from the 1-D field ``Q``.

    The radial derivative is a central difference with relative step ``h``
    refined once by Richardson extrapolation (steps ``h`` and ``h/2``).
    """
    many = np.ndim(r) > 0
    rs = [float(v) for v in np.atleast_1d(r)]
    for rv in rs:
        if not rv > 0:
            raise GreenError("r must be > 0")
        if rv * (1 - h / 2) == rv or rv * (1 + h / 2) == rv:
            raise GreenError("finite-difference step underflows at this radius")
    pts = []
    for rv in rs:
        pts += [rv * (1 - h), rv * (1 + h), rv * (1 - h / 2), rv * (1 + h / 2)]
    t, vals, info = _fields(medium, kernel, pts, t_grid, sigma_s, source=source)
    out = []
    for i, rv in enumerate(rs):
        q = vals[4 * i:4 * i + 4]
        d1 = (q[1] - q[0]) / (2 * rv * h)
        d2 = (q[3] - q[2]) / (rv * h)
        dq = d2 + (d2 - d1) / 3.0
        out.append(_wrap(3, medium, kernel, rv, t, -dq / (2 * math.pi * rv), sigma_s, (0, 0),
                         dict(info, fd_step=h)))
    return out if many else out[0]


def _wrap(dim, medium, kernel, x, t, v, sigma_s, orders, info):
    C0 = wavefront_speed(medium, kernel)
    arr = 0.0 if math.isinf(C0) else x / C0
    return GreenField(dim, float(x), t, np.asarray(v), float(sigma_s), C0, arr, orders,
                      dict(info, family=kernel.family))


def arrival_diagnostics(field: GreenField, threshold=1e-3):
    """Arrival time, pedestal flatness and delay behind the wavefront.

    The arrival is the first sample with ``|P| > threshold * max|P|``.  The
    pedestal flatness is ``max|P|`` on ``[B r, arrival)`` over ``max|P|``.
    """
    if math.isinf(field.C0):
        raise GreenError("no wavefront (C0 infinite): arrival diagnostics need B > 0")
    a = np.abs(field.values)
    peak = float(a.max())
    if peak == 0:
        raise GreenError("field is identically zero")
    idx = int(np.argmax(a > threshold * peak))
    arrival = float(field.t[idx])
    front = field.predicted_arrival
    ped = (field.t >= front) & (field.t < arrival)
    flat = float(a[ped].max() / peak) if np.any(ped) else 0.0
    return {"arrival": arrival, "predicted_arrival": front, "delay": arrival - front,
            "pedestal_flatness": flat, "threshold": threshold}
