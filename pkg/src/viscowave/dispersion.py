"""Complex wavenumber, dispersion curves and boundary values on the cut.

The wavenumber of the pressure wave equation with relaxation kernel ``K`` is

    kappa(p) = (p / c0) (1 + p K~(p) / bigK)^{-1/2},   bigK = rho0 c0^2,

a complete Bernstein function of ``p``.  Writing ``kappa = B p + beta(p)``
with ``B = 1/C0``, the attenuation and excess dispersion on the frequency
axis are ``A = Re kappa(-i omega)`` and ``D = -Im beta(-i omega)``; the phase
speed follows from ``1/c = B + D/omega``.

All quantities here are computed from ``kappa`` directly.  The spectral
measure route in :mod:`viscowave.measures` is an independent cross-check.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .kernels import ColeColeKernel, Medium, NewtonianKernel, RelaxationKernel
from .measures import Density, PowerLaw, SpectralMeasure

__all__ = [
    "kappa", "beta", "attenuation", "excess_dispersion", "phase_speed",
    "wavefront_speed", "static_speed", "characteristic_time", "DispersionCurve",
    "CurveInvariantError", "ExtractionError", "curve", "curve_violations",
    "cole_cole_closed_form", "extract_measure", "boundary_density", "prony_saturation",
    "CSV_COLUMNS",
]

CSV_COLUMNS = ("omega_rad_per_s", "attenuation_neper_per_m", "dispersion_rad_per_m",
               "phase_speed_m_per_s", "q_factor")

CURVE_RTOL = 1e-9


class CurveInvariantError(ArithmeticError):
    """A sampled curve broke a structural invariant; names the frequency."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class ExtractionError(ArithmeticError):
    """Boundary values on the cut are inconsistent with a positive measure."""


def _cplx(p):
    p = np.asarray(p, dtype=complex)
    if np.any((p.imag == 0) & (p.real < 0)):
        raise ValueError("p lies on the negative real axis (branch cut of kappa)")
    return p


def _out(x):
    x = np.asarray(x)
    return x if x.ndim else x.item()


def kappa(medium: Medium, kernel: RelaxationKernel, p):
    """``(p/c0) (1 + pK~(p)/bigK)^{-1/2}`` on the principal branch."""
    p = _cplx(p)
    w = 1.0 + np.asarray(kernel.symbol(p), dtype=complex) / medium.bigK
    return _out(p / medium.c0 / np.sqrt(w))


def _slowness(medium, kernel):
    k0 = kernel.K0
    if not math.isfinite(k0):
        return 0.0
    return 1.0 / (medium.c0 * math.sqrt(1.0 + k0 / medium.bigK))


def beta(medium: Medium, kernel: RelaxationKernel, p):
    """``kappa(p) - B p`` without cancellation.

    For finite ``K0`` the difference of the two inverse square roots is
    rewritten through the deficit ``K0 - pK~(p)``, which every family
    evaluates directly.
    """
    p = _cplx(p)
    k0 = kernel.K0
    if not math.isfinite(k0):
        return kappa(medium, kernel, p)
    bigK = medium.bigK
    sw = np.sqrt(1.0 + np.asarray(kernel.symbol(p), dtype=complex) / bigK)
    sw0 = math.sqrt(1.0 + k0 / bigK)
    dfc = np.asarray(kernel.deficit(p), dtype=complex) / bigK
    return _out(p / medium.c0 * dfc / (sw * sw0 * (sw + sw0)))


def wavefront_speed(medium: Medium, kernel: RelaxationKernel):
    """``C0 = c0 (1 + K0/bigK)^{1/2}``, ``inf`` when ``K0`` is infinite."""
    if not math.isfinite(kernel.K0):
        return math.inf
    return medium.c0 * math.sqrt(1.0 + kernel.K0 / medium.bigK)


def static_speed(medium: Medium, kernel: RelaxationKernel):
    """``Cinf = c0 (1 + Kinf/bigK)^{1/2}``."""
    return medium.c0 * math.sqrt(1.0 + kernel.Kinf / medium.bigK)


def characteristic_time(medium: Medium, kernel: RelaxationKernel):
    """Relaxation time scale of the kernel; ``N/bigK`` for Newtonian viscosity."""
    if isinstance(kernel, NewtonianKernel):
        return kernel.N / medium.bigK
    return kernel.tau_char


def _omega(omega):
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise ValueError("omega must be >= 0")
    return w


def attenuation(medium, kernel, omega):
    """``A(omega) = Re kappa(-i omega)`` in Np/m."""
    w = _omega(omega)
    return _out(np.real(kappa(medium, kernel, -1j * w)) + 0.0)


def excess_dispersion(medium, kernel, omega):
    """``D(omega) = -Im beta(-i omega)`` in rad/m."""
    w = _omega(omega)
    return _out(-np.imag(beta(medium, kernel, -1j * w)) + 0.0)


def _speed_from(B, D, w):
    with np.errstate(divide="ignore", invalid="ignore"):
        slow = B + np.where(w > 0, D / np.where(w > 0, w, 1.0), 0.0)
        return np.where(slow > 0, 1.0 / slow, np.inf)


def phase_speed(medium, kernel, omega):
    """``c(omega) = 1 / (B + D(omega)/omega)`` in m/s."""
    w = _omega(omega)
    return _out(_speed_from(_slowness(medium, kernel),
                            np.asarray(excess_dispersion(medium, kernel, w)), w))


@dataclass
class DispersionCurve:
    """Attenuation, excess dispersion, phase speed and Q on a frequency grid.

    ``Q`` is ``inf`` where the attenuation vanishes (``q_infinite`` flags
    those nodes).  ``violations`` lists invariant checks that failed, as
    ``(name, omega)`` pairs; :func:`curve` raises unless asked not to.
    """

    omega: np.ndarray
    A: np.ndarray
    D: np.ndarray
    c: np.ndarray
    Q: np.ndarray
    C0: float
    Cinf: float
    B: float
    family: str = ""
    violations: list = field(default_factory=list)

    @property
    def q_infinite(self):
        return np.isinf(self.Q)

    def metadata(self):
        return {
            "schema_version": 1,
            "family": self.family,
            "C0": "inf" if math.isinf(self.C0) else self.C0,
            "Cinf": self.Cinf,
            "B": self.B,
            "points": int(self.omega.size),
            "q_infinite_points": int(self.q_infinite.sum()),
            "violations": [[n, w] for n, w in self.violations],
        }

    def write_rows(self, stream):
        wr = csv.writer(stream, lineterminator="\n")
        wr.writerow(CSV_COLUMNS)
        for row in zip(self.omega, self.A, self.D, self.c, self.Q):
            wr.writerow([_fmt(v) for v in row])

    def to_csv(self, path):
        """Write the CSV and a JSON sidecar (same stem, ``.json``)."""
        path = Path(path)
        with path.open("w", newline="") as fh:
            self.write_rows(fh)
        side = path.with_suffix(".json")
        side.write_text(json.dumps(self.metadata(), indent=2, sort_keys=True) + "\n")
        return path, side


def _fmt(v):
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(v)


def curve_violations(cv: DispersionCurve, rtol=CURVE_RTOL):
    """Check the structural invariants of a sampled curve."""
    w, A, D, c = cv.omega, cv.A, cv.D, cv.c
    out = []
    scaleA = np.max(np.abs(A)) if A.size else 0.0
    for i in np.flatnonzero(A < -rtol * scaleA):
        out.append(("attenuation_nonnegative", float(w[i])))
    for i in np.flatnonzero(np.diff(A) < -rtol * np.abs(A[1:])):
        out.append(("attenuation_nondecreasing", float(w[i + 1])))
    scaleD = np.max(np.abs(D)) if D.size else 0.0
    for i in np.flatnonzero(D < -rtol * scaleD):
        out.append(("dispersion_nonnegative", float(w[i])))
    ratio = D / w
    for i in np.flatnonzero(np.diff(ratio) > rtol * np.abs(ratio[:-1]) + 1e-300):
        out.append(("dispersion_over_omega_nonincreasing", float(w[i + 1])))
    for i in np.flatnonzero(np.diff(c) < -rtol * c[1:]):
        out.append(("phase_speed_nondecreasing", float(w[i + 1])))
    for i in np.flatnonzero(c < cv.Cinf * (1 - rtol)):
        out.append(("phase_speed_above_Cinf", float(w[i])))
    if math.isfinite(cv.C0):
        for i in np.flatnonzero(c > cv.C0 * (1 + rtol)):
            out.append(("phase_speed_below_C0", float(w[i])))
    lhs = 1.0 / c
    rhs = cv.B + ratio
    for i in np.flatnonzero(np.abs(lhs - rhs) > rtol * np.abs(rhs)):
        out.append(("slowness_identity", float(w[i])))
    return out


def curve(medium: Medium, kernel: RelaxationKernel, omega_grid, *, strict=True) -> DispersionCurve:
    """Sample ``A, D, c, Q`` on a strictly increasing positive grid.

    With ``strict`` (the default) an invariant violation raises
    :class:`CurveInvariantError` naming the first failing frequency;
    otherwise the violations are stored on the curve.
    """
    w = np.asarray(omega_grid, dtype=float)
    if w.ndim != 1 or w.size < 1 or np.any(w <= 0) or np.any(np.diff(w) <= 0):
        raise ValueError("omega grid must be positive and strictly increasing")
    p = -1j * w
    k = np.asarray(kappa(medium, kernel, p), dtype=complex).reshape(w.shape)
    b = np.asarray(beta(medium, kernel, p), dtype=complex).reshape(w.shape)
    A = k.real + 0.0
    D = -b.imag + 0.0
    B = _slowness(medium, kernel)
    c = _speed_from(B, D, w)
    with np.errstate(divide="ignore"):
        Q = np.where(A > 0, w / (2.0 * c * np.where(A > 0, A, 1.0)), np.inf)
    cv = DispersionCurve(w, A, D, c, Q, wavefront_speed(medium, kernel),
                         static_speed(medium, kernel), B, kernel.family)
    bad = [("kappa_real_part_nonnegative", float(w[i])) for i in np.flatnonzero(A < 0)]
    cv.violations = bad + curve_violations(cv)
    if strict and cv.violations:
        name, at = cv.violations[0]
        raise CurveInvariantError(f"{name} violated at omega = {at:.6g} rad/s", cv.violations)
    return cv


def cole_cole_closed_form(medium: Medium, params, omega, *, rtol=1e-10):
    """Real/imaginary parts ``X, Y`` of ``1 + pK~(p)/bigK`` at ``p = -i omega``
    and the attenuation rebuilt from them in polar form.

    ``A = omega sqrt(R - X) / (sqrt(2) c0 R)`` with ``R = |X + iY|``; ``R - X``
    is formed as ``Y^2/(R + X)`` to stay accurate where ``Y`` is tiny.  The
    result is checked against ``Re kappa(-i omega)``.

    ``params`` is a :class:`ColeColeKernel` or a mapping with keys
    ``M, a, tau, alpha``.
    """
    if isinstance(params, ColeColeKernel):
        kern = params
    else:
        kern = ColeColeKernel(float(params["M"]), float(params["a"]),
                              float(params["tau"]), float(params["alpha"]))
    w = _omega(omega)
    m1 = kern.M * (1.0 - kern.a) / medium.bigK
    rho = (w * kern.tau) ** kern.alpha
    cs = math.cos(math.pi * kern.alpha / 2.0)
    sn = math.sin(math.pi * kern.alpha / 2.0)
    den = 1.0 + rho * rho + 2.0 * rho * cs
    X = 1.0 + m1 * rho * (rho + cs) / den
    Y = -m1 * rho * sn / den
    R = np.hypot(X, Y)
    A = w * np.sqrt(Y * Y / (R + X)) / (math.sqrt(2.0) * medium.c0 * R)
    ref = np.asarray(attenuation(medium, kern, w))
    bad = np.abs(A - ref) > rtol * np.maximum(np.abs(ref), 1e-300)
    bad &= np.abs(A - ref) > 0
    if np.any(bad):
        i = int(np.flatnonzero(bad.ravel())[0])
        raise ArithmeticError(
            f"closed-form attenuation disagrees with Re kappa at omega = {w.ravel()[i]:.6g}")
    return _out(X), _out(Y), _out(A)


# -- boundary values on the cut ------------------------------------------------

NOISE_FLOOR = 1e-8
_EPS_LEVELS = tuple(10.0 ** -(3 + j) for j in range(12))


def _richardson(f):
    r1 = [(10.0 * f[j + 1] - f[j]) / 9.0 for j in range(len(f) - 1)]
    return [(100.0 * r1[j + 1] - r1[j]) / 99.0 for j in range(len(r1) - 1)]


def boundary_density(medium, kernel, r, *, tol=1e-10):
    """``Im beta(-r + i 0) / (pi r)`` and the local density scale.

    The one-sided limit is extrapolated from ``eps = r 10^-3, 10^-4, 10^-5``
    (two Richardson steps).  Near branch points the expansion in ``eps``
    only sets in at smaller ``eps``; the window then slides down the
    ``10^-(3+j)`` ladder until two successive extrapolants agree.
    """
    r = float(r)
    p = -r + 1j * r * np.array(_EPS_LEVELS)
    b = np.asarray(beta(medium, kernel, p), dtype=complex)
    f = b.imag / (math.pi * r)
    scale = float(np.max(np.abs(b))) / (math.pi * r)
    ext = _richardson(list(f))
    best = ext[0]
    for j in range(len(ext) - 1):
        if abs(ext[j + 1] - ext[j]) <= tol * max(scale, 1e-300):
            return ext[j], scale
        best = ext[j + 1]
    # no settled window: take the smallest-eps estimate (rounding-limited)
    return best, scale


def extract_measure(medium: Medium, kernel: RelaxationKernel, r_grid, *, floor=NOISE_FLOOR):
    """Recover the attenuation-spectrum density from boundary values of beta.

    ``r_grid`` (positive, increasing) is where the density is sampled for
    validation, support detection and the end-point power laws; the returned
    density evaluates boundary values on demand.  Beyond ``r_grid[-1]`` (and
    below ``r_grid[0]`` when the support reaches down to 0) a power law fitted
    to the outermost samples is used.  A lower support edge between grid
    nodes is located by bisection.

    Raises :class:`ExtractionError` if a sample is negative beyond
    ``floor`` times the local scale.
    """
    r = np.asarray(r_grid, dtype=float)
    if r.ndim != 1 or r.size < 3 or np.any(r <= 0) or np.any(np.diff(r) <= 0):
        raise ValueError("r_grid must hold at least 3 positive increasing rates")
    if kernel.is_zero:
        return SpectralMeasure()
    vals = np.empty_like(r)
    for i, ri in enumerate(r):
        v, s = boundary_density(medium, kernel, ri)
        if v < -floor * s:
            raise ExtractionError(
                f"negative boundary density {v:.3e} at r = {ri:.6g} (scale {s:.3e}): "
                "kappa is not a complete Bernstein function")
        vals[i] = v if v > floor * s else 0.0
    pos = np.flatnonzero(vals > 0)
    if pos.size == 0:
        return SpectralMeasure()

    def positive(x):
        v, s = boundary_density(medium, kernel, x)
        return v > floor * s

    i0 = pos[0]
    support_min = 0.0
    head = None
    if i0 > 0:
        lo, hi = r[i0 - 1], r[i0]
        for _ in range(200):
            mid = math.sqrt(lo * hi)
            if hi / lo - 1.0 < 1e-13:
                break
            if positive(mid):
                hi = mid
            else:
                lo = mid
        support_min = lo
    elif vals[1] > 0:
        e = math.log(vals[1] / vals[0]) / math.log(r[1] / r[0])
        head = PowerLaw(vals[0] / r[0] ** e, e, 0.0, bound=r[0], exact=True)

    tail = None
    if vals[-1] > 0 and vals[-2] > 0:
        e = math.log(vals[-1] / vals[-2]) / math.log(r[-1] / r[-2])
        tail = PowerLaw(vals[-1] / r[-1] ** e, e, 0.0, bound=r[-1], exact=True)
    r_first, r_last = r[0], r[-1]

    def one(x):
        if x > r_last:
            return tail.prefactor * x ** tail.exponent if tail else 0.0
        if x < r_first:
            if head is None:
                return 0.0
            return head.prefactor * x ** head.exponent
        if x <= support_min:
            return 0.0
        v, s = boundary_density(medium, kernel, x)
        return v if v > floor * s else 0.0

    def h(x):
        arr = np.asarray(x, dtype=float)
        if arr.ndim == 0:
            return one(float(arr))
        return np.array([one(float(v)) for v in arr.ravel()]).reshape(arr.shape)

    dens = Density(h, tail=tail, head=head, support_min=support_min, kind="extracted",
                   params={"r_grid": [float(r_first), float(r_last)], "samples": vals.tolist()})
    return SpectralMeasure((), dens)


def prony_saturation(medium: Medium, kernel: RelaxationKernel):
    """High-frequency limit ``R = -K0' (1 + K0/bigK)^{-3/2} / (2 rho0 c0^3)``."""
    if not (math.isfinite(kernel.K0) and math.isfinite(kernel.K0prime)):
        raise ValueError("saturation needs finite K0 and K0' (bounded attenuation)")
    return (-kernel.K0prime * (1.0 + kernel.K0 / medium.bigK) ** -1.5
            / (2.0 * medium.rho0 * medium.c0 ** 3))
