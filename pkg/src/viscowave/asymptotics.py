"""Power-law fits, Stieltjes asymptotics, the Paley-Wiener test and the
wavefront-regularity classifier.

Conventions
-----------
Asymptotes are written ``A(omega) ~ b omega**s / ln(omega)**gamma``.  A
logarithmic attenuation ``A ~ a ln(omega)**eta`` is the case ``s = 0``,
``gamma = -eta``; the classifier reports ``eta`` directly for it.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from ._quad import log_axis_quad
from .dispersion import attenuation, characteristic_time, wavefront_speed
from .kernels import Medium, RelaxationKernel
from .measures import SpectralMeasure, stieltjes

__all__ = [
    "AsymptoteFit", "AsymptoteDescriptor", "FitError", "fit_powerlaw",
    "ValironReport", "verify_valiron", "PaleyWienerResult", "paley_wiener_test",
    "WavefrontReport", "classify_wavefront", "CLASSES",
]

NO_WAVEFRONT = "NoWavefront"
SMOOTH = "SmoothWavefront"
JUMP = "DiscontinuityAdmitting"
STEPWISE = "StepwiseRegularizing"
INDETERMINATE = "Indeterminate"
CLASSES = (NO_WAVEFRONT, SMOOTH, JUMP, STEPWISE, INDETERMINATE)

# rms of the log residual above which a fit is considered ambiguous
FIT_RESIDUAL_MAX = 0.05
# |eta - 1| below this counts as a pure logarithm
ETA_BAND = 0.1
STEPWISE_ORDERS = 5


class FitError(ValueError):
    pass


@dataclass(frozen=True)
class AsymptoteFit:
    """Least-squares fit ``ln A = s ln w - gamma ln ln w + ln b`` on a window.

    ``eta`` is set only for logarithmic fits (``A ~ b ln(w)**eta``).
    """

    window: tuple
    exponent: float
    log_exponent: float
    prefactor: float
    residual: float
    samples: int = 0
    eta: Optional[float] = None

    def to_dict(self):
        d = asdict(self)
        d["window"] = list(self.window)
        return d


@dataclass(frozen=True)
class AsymptoteDescriptor:
    """Declared asymptote ``A ~ prefactor omega**exponent / ln(omega)**log_exponent``."""

    exponent: float
    log_exponent: float = 0.0
    prefactor: float = 1.0


def fit_powerlaw(omega, values, window=None, *, fit_log=False, min_decades=2.0,
                 min_samples=20) -> AsymptoteFit:
    """Fit a power law (optionally with a log factor) to positive samples.

    Parameters
    ----------
    omega, values : array_like
        Frequencies and attenuation samples.
    window : (float, float), optional
        Frequency range to use; defaults to the full grid.
    fit_log : bool
        Also fit the log-exponent ``gamma`` (needs ``omega > 1``); otherwise
        ``gamma`` is fixed at 0.

    Returns
    -------
    AsymptoteFit
    """
    w = np.asarray(omega, dtype=float)
    a = np.asarray(values, dtype=float)
    if window is None:
        window = (float(w.min()), float(w.max()))
    lo, hi = window
    sel = (w >= lo * (1 - 1e-12)) & (w <= hi * (1 + 1e-12))
    w, a = w[sel], a[sel]
    if w.size < min_samples:
        raise FitError(f"need >= {min_samples} samples in the window, got {w.size}")
    if math.log10(hi / lo) < min_decades - 1e-9:
        raise FitError(f"window must span >= {min_decades:g} decades")
    if np.any(a <= 0) or np.any(w <= 0):
        raise FitError("samples must be positive for a log-log fit")
    lw = np.log(w)
    cols = [lw, np.ones_like(lw)]
    if fit_log:
        if np.any(w <= 1):
            raise FitError("log-exponent fit needs omega > 1")
        cols.insert(1, -np.log(lw))
    X = np.column_stack(cols)
    y = np.log(a)
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    res = y - X @ coef
    rms = float(np.sqrt(np.mean(res ** 2)))
    s = float(coef[0])
    gam = float(coef[1]) if fit_log else 0.0
    return AsymptoteFit((float(lo), float(hi)), s, gam, float(math.exp(coef[-1])), rms,
                        int(w.size))


# -- Valiron -------------------------------------------------------------------

@dataclass(frozen=True)
class ValironReport:
    beta: float
    expected: float
    x: list
    ratios: list
    passed: bool


def verify_valiron(f, beta, slowly_varying=None, xs=None, *, rtol=0.05,
                   breakpoints=()) -> ValironReport:
    """Check ``g(x) x^(1-beta) / l(x) -> pi beta / sin(pi beta)``.

    ``g(x) = \\int df(y) / (x + y)``.  ``f`` is either a
    :class:`SpectralMeasure` (``df`` is the measure) or a nondecreasing
    callable distribution function with ``f(0) = 0``; in the latter case the
    Stieltjes integral is evaluated as ``\\int f(y) / (x + y)^2 dy``.
    The ratio at the largest ``x`` must lie within ``rtol`` of the limit.
    """
    if not 0 <= beta < 1:
        raise ValueError("beta must lie in [0, 1)")
    xs = [10.0 ** k for k in range(2, 7)] if xs is None else list(xs)
    l = slowly_varying or (lambda x: 1.0)
    expected = 1.0 if beta == 0 else math.pi * beta / math.sin(math.pi * beta)
    ratios = []
    for x in xs:
        if isinstance(f, SpectralMeasure):
            g = float(stieltjes(f, x))
        else:
            g, _ = log_axis_quad(lambda y: float(f(y)) / (x + y) / (x + y), 0.0, math.inf,
                                 breakpoints=(x, 1.0, *breakpoints), epsrel=1e-11)
        ratios.append(g * x ** (1.0 - beta) / l(x))
    ok = abs(ratios[-1] / expected - 1.0) <= rtol
    return ValironReport(beta, expected, xs, ratios, ok)


# -- Paley-Wiener --------------------------------------------------------------

@dataclass(frozen=True)
class PaleyWienerResult:
    """``finite`` is True, False, or None (indeterminate)."""

    finite: Optional[bool]
    value: Optional[float]
    certificate: str
    mode: str

    def to_dict(self):
        return asdict(self)


def _pw_descriptor(s, gamma, tol=1e-12):
    if s < 1 - tol:
        return PaleyWienerResult(True, None, f"exponent {s:g} < 1", "analytic")
    if abs(s - 1) <= tol:
        if gamma > 1:
            return PaleyWienerResult(True, None,
                                     f"exponent 1 with log-exponent {gamma:g} > 1", "analytic")
        return PaleyWienerResult(False, None,
                                 f"exponent 1 with log-exponent {gamma:g} <= 1: "
                                 "integral of 1/(w ln(w)^gamma) diverges", "analytic")
    return PaleyWienerResult(False, None, f"exponent {s:g} > 1", "analytic")


def paley_wiener_test(source, *, fit_band=0.05, max_doublings=200) -> PaleyWienerResult:
    """Decide whether ``\\int_0^inf A(w) / (1 + w^2) dw`` is finite.

    ``source`` may be an :class:`AsymptoteDescriptor` (decided exactly; at
    exponent 1 the log-exponent must exceed 1 strictly), a
    :class:`SpectralMeasure` with a tail descriptor (exponent ``1 + lambda``),
    an :class:`AsymptoteFit` (decided when the exponent is clear of 1 by
    ``fit_band``) or a callable ``A(w)`` (numeric, doubling cutoffs).  An
    undecided numeric run gives ``finite=None``.
    """
    if isinstance(source, AsymptoteDescriptor):
        return _pw_descriptor(source.exponent, source.log_exponent)
    if isinstance(source, SpectralMeasure):
        dens = source.density
        if dens is None:
            return PaleyWienerResult(True, None, "bounded attenuation (atoms only)", "analytic")
        if dens.tail is None:
            raise ValueError("measure has no tail descriptor; pass a callable attenuation")
        return _pw_descriptor(1.0 + dens.tail.exponent, dens.tail.log_exponent)
    if isinstance(source, AsymptoteFit):
        if source.eta is not None or source.exponent < 1 - fit_band:
            return PaleyWienerResult(True, None,
                                     f"fitted exponent {source.exponent:.3g} < 1", "fit")
        if source.exponent > 1 + fit_band:
            return PaleyWienerResult(False, None,
                                     f"fitted exponent {source.exponent:.3g} > 1", "fit")
        return PaleyWienerResult(None, None, "fitted exponent too close to 1", "fit")
    if not callable(source):
        raise TypeError("unsupported Paley-Wiener source")

    def f(w):
        return float(source(w)) / (1.0 + w * w)

    total, _ = log_axis_quad(f, 0.0, 1.0, epsrel=1e-12)
    ratios = []
    small = 0
    w = 1.0
    for _ in range(max_doublings):
        inc, _ = log_axis_quad(f, w, 2.0 * w, epsrel=1e-12, panel_width=math.inf)
        ratios.append((total + inc) / total if total > 0 else math.inf)
        total += inc
        if inc <= 1e-12 * total:
            small += 1
            if small >= 3:
                return PaleyWienerResult(True, total, f"converged by w = {2 * w:.3g}",
                                         "numeric")
        else:
            small = 0
        w *= 2.0
    if all(q > 1 + 1e-3 for q in ratios[-3:]):
        return PaleyWienerResult(False, total, f"still growing at w = {w:.3g}", "numeric")
    return PaleyWienerResult(None, total, "not resolved within the cutoff budget", "numeric")


# -- classification ------------------------------------------------------------

@dataclass
class WavefrontReport:
    C0: float
    paley_wiener_finite: Optional[bool]
    wavefront_class: str
    stepwise_schedule: list = field(default_factory=list)
    asymptote: Optional[AsymptoteFit] = None
    reason: str = ""

    @property
    def determinate(self):
        return self.wavefront_class != INDETERMINATE

    def to_dict(self):
        return {
            "schema_version": 1,
            "C0": "inf" if math.isinf(self.C0) else self.C0,
            "paley_wiener_finite": self.paley_wiener_finite,
            "class": self.wavefront_class,
            "stepwise_schedule": [[n, t] for n, t in self.stepwise_schedule],
            "asymptote": self.asymptote.to_dict() if self.asymptote else None,
            "reason": self.reason,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def _high_window(medium, kernel, decades=(4.0, 8.0), n=41):
    tau = characteristic_time(medium, kernel) or 1.0
    w = np.logspace(decades[0], decades[1], n) / tau
    return w, np.asarray(attenuation(medium, kernel, w), dtype=float)


def _log_model(w, A):
    """Fit ``ln(dA/d ln w)`` against ``ln ln w`` (slope ``eta - 1``) and
    ``ln(dA/d ln w)`` against ``ln w`` (slope ``s``); returns both."""
    lw = np.log(w)
    g = np.gradient(A, lw)
    if np.any(g <= 0) or np.any(lw <= 1):
        return None
    y = np.log(g)
    out = {}
    for name, x in (("log", np.log(lw)), ("power", lw)):
        X = np.column_stack([x, np.ones_like(x)])
        coef, *_ = np.linalg.lstsq(X, y, rcond=None)
        res = y - X @ coef
        out[name] = (float(coef[0]), float(np.sqrt(np.mean(res ** 2))), float(math.exp(coef[1])))
    out["g_top"] = float(g[-1])
    return out


def classify_wavefront(medium: Medium, kernel: RelaxationKernel,
                       fit: Optional[AsymptoteFit] = None) -> WavefrontReport:
    """Wavefront regularity class of the Green's function.

    Known families are classified from their analytic structure; custom
    measure kernels from the high-frequency shape of ``A``.  The reported
    asymptote is always a numerical fit on a high-frequency window (or the
    one supplied).  Anything ambiguous is ``Indeterminate``.
    """
    C0 = wavefront_speed(medium, kernel)
    w, A = _high_window(medium, kernel)
    fam = kernel.family

    def power_fit():
        if fit is not None:
            return fit
        if np.all(A > 0):
            return fit_powerlaw(w, A)
        return None

    if kernel.is_zero:
        return WavefrontReport(C0, True, JUMP, [], None, "elastic medium: A = 0")

    if math.isinf(C0):
        af = power_fit()
        pw = paley_wiener_test(af) if af is not None else PaleyWienerResult(None, None, "", "fit")
        return WavefrontReport(C0, pw.finite, NO_WAVEFRONT, [], af,
                               "K0 is infinite, so C0 is infinite")

    if fam == "prony" or math.isfinite(kernel.K0prime):
        af = power_fit()
        return WavefrontReport(C0, True, JUMP, [], af,
                               "finite K0': attenuation is bounded")

    if fam == "cole_cole":
        af = power_fit()
        pw = paley_wiener_test(AsymptoteDescriptor(1.0 - kernel.alpha))
        return WavefrontReport(C0, pw.finite, SMOOTH, [], af,
                               f"power-law attenuation, exponent {1 - kernel.alpha:g}")

    # custom kernel with K0' = -inf: decide from the shape of A
    if fit is not None and fit.eta is None:
        if fit.residual > FIT_RESIDUAL_MAX:
            return WavefrontReport(C0, None, INDETERMINATE, [], fit, "fit residual too large")
        pw = paley_wiener_test(fit)
        if fit.exponent > 0.05 and pw.finite:
            return WavefrontReport(C0, True, SMOOTH, [], fit, "power-law attenuation")
        return WavefrontReport(C0, pw.finite, INDETERMINATE, [], fit,
                               "supplied fit does not settle the class")
    models = _log_model(w, A)
    if models is None:
        return WavefrontReport(C0, None, INDETERMINATE, [], power_fit(),
                               "attenuation not increasing on the high window")
    s, res_p, _ = models["power"]
    slope, res_l, _ = models["log"]
    eta = 1.0 + slope if fit is None else fit.eta
    if res_p <= FIT_RESIDUAL_MAX and res_p < res_l and s > 0.02:
        af = fit_powerlaw(w, A)
        pw = paley_wiener_test(af)
        cls = SMOOTH if pw.finite else INDETERMINATE
        return WavefrontReport(C0, pw.finite, cls, [], af,
                               f"power-law attenuation, exponent {af.exponent:.3g}")
    if res_l > FIT_RESIDUAL_MAX and fit is None:
        return WavefrontReport(C0, None, INDETERMINATE, [], power_fit(),
                               "neither a power law nor a logarithm fits")
    # logarithmic growth: exponent 0, Paley-Wiener integral finite
    amp = models["g_top"] / eta if eta > 0 else models["g_top"]
    af = fit if fit is not None else AsymptoteFit(
        (float(w[0]), float(w[-1])), 0.0, -eta, amp, res_l, int(w.size), eta)
    if abs(eta - 1.0) <= ETA_BAND:
        sched = [(n, (n + 1) / (amp * medium.c0)) for n in range(STEPWISE_ORDERS)]
        return WavefrontReport(C0, True, STEPWISE, sched, af,
                               f"logarithmic attenuation, eta = {eta:.3f}")
    if eta > 1.0 + ETA_BAND:
        return WavefrontReport(C0, True, SMOOTH, [], af,
                               f"log-power attenuation, eta = {eta:.3f} > 1")
    return WavefrontReport(C0, True, JUMP, [], af,
                           f"sub-logarithmic attenuation, eta = {eta:.3f} < 1")
