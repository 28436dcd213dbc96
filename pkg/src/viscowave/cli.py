"""Command-line front end.

    viscowave curves   --config model.json [--omega-min F --omega-max F --points N --log --hz] [--out PATH]
    viscowave classify --config model.json
    viscowave green    --config model.json --dim {1,3} --x F --t-max F --nt N [--sigma-s F --hz] [--out PATH]
    viscowave validate --config model.json
    viscowave ml ALPHA X

A model file looks like::

    {"medium": {"c0": 1500.0, "rho0": 1000.0},
     "kernel": {"type": "cole_cole", "M": 2.25e9, "a": 0.5, "tau": 1e-13, "alpha": 0.5},
     "options": {"tolerance": 1e-10, "points": 121, "sigma_s": 2e7}}

Kernel types and their parameters: ``prony`` (``terms`` = [[lambda, r], ...],
optional ``offset``), ``cole_cole`` (``M, a, tau, alpha``), ``constant_q``
(``A, tau, alpha``), ``newtonian`` (``N``) and ``custom_measure``
(``measure`` in the measure JSON format, optional ``offset``).

``options`` may hold ``tolerance`` (quadrature tolerance, same as
``VISCOWAVE_TOL``) and defaults for the grid and taper flags: ``omega_min``,
``omega_max``, ``points``, ``t_max``, ``nt`` and ``sigma_s``.  Flags given on
the command line win.

Frequencies are angular (rad/s).  ``--hz`` reads the frequency flags
(``--omega-min``, ``--omega-max``, ``--sigma-s``) as Hz and converts them on
the way in; stored outputs are always in rad/s.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import kernels as kn
from .asymptotics import INDETERMINATE, classify_wavefront
from .dispersion import characteristic_time, curve
from .greens import green_1d, green_3d
from .measures import MeasureError, measure_from_json
from .mlf import ml_neg_power
from .validation import validate_model

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INDETERMINATE = 2


class ConfigError(ValueError):
    pass


def _req(d, key, where):
    if key not in d:
        raise ConfigError(f"{where}: missing field {key!r}")
    return d[key]


def build_model(cfg):
    """``(Medium, RelaxationKernel)`` from a parsed model config."""
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    med = _req(cfg, "medium", "config")
    medium = kn.Medium(float(_req(med, "c0", "medium")), float(_req(med, "rho0", "medium")))
    k = _req(cfg, "kernel", "config")
    typ = _req(k, "type", "kernel")
    if typ == "prony":
        kernel = kn.prony_kernel([tuple(t) for t in _req(k, "terms", "kernel")],
                                 k.get("offset", 0.0))
    elif typ == "cole_cole":
        kernel = kn.cole_cole_kernel(*(_req(k, n, "kernel") for n in ("M", "a", "tau", "alpha")))
    elif typ == "constant_q":
        kernel = kn.constant_q_kernel(*(_req(k, n, "kernel") for n in ("A", "tau", "alpha")))
    elif typ == "newtonian":
        kernel = kn.newtonian_kernel(_req(k, "N", "kernel"))
    elif typ == "custom_measure":
        kernel = kn.measure_kernel(measure_from_json(_req(k, "measure", "kernel")),
                                   k.get("offset", 0.0))
    else:
        raise ConfigError(f"kernel: unknown type {typ!r}")
    return medium, kernel


def _load(path):
    with open(path) as fh:
        cfg = json.load(fh)
    tol = (cfg.get("options") or {}).get("tolerance")
    if tol is not None:
        os.environ["VISCOWAVE_TOL"] = repr(float(tol))
    return cfg


def _error(exc, stream=None):
    stream = stream or sys.stderr
    doc = {"schema_version": 1, "error": type(exc).__name__, "message": str(exc)}
    inv = getattr(exc, "invariant", None)
    if inv:
        doc["invariant"] = inv
    stream.write(json.dumps(doc, sort_keys=True) + "\n")
    return EXIT_FAIL


def _hz(args, value):
    return None if value is None else (value * 2.0 * math.pi if args.hz else value)


def _opt(cfg, args, name, default=None, freq=False):
    """Flag value, else the config's ``options`` entry, else ``default``."""
    v = getattr(args, name)
    if v is None:
        v = (cfg.get("options") or {}).get(name)
    if v is None:
        return default
    return _hz(args, float(v)) if freq else v


def cmd_curves(args):
    cfg = _load(args.config)
    medium, kernel = build_model(cfg)
    points = int(_opt(cfg, args, "points", 241))
    if points < 16:
        raise ConfigError("--points must be >= 16")
    tau = characteristic_time(medium, kernel) or 1.0
    lo = _opt(cfg, args, "omega_min", 1e-6 / tau, freq=True)
    hi = _opt(cfg, args, "omega_max", 1e6 / tau, freq=True)
    if not 0 < lo < hi:
        raise ConfigError("need 0 < omega-min < omega-max")
    grid = np.logspace(math.log10(lo), math.log10(hi), points)
    cv = curve(medium, kernel, grid)
    if args.out:
        cv.to_csv(args.out)
    else:
        cv.write_rows(sys.stdout)
    return EXIT_OK


def cmd_classify(args):
    medium, kernel = build_model(_load(args.config))
    rep = classify_wavefront(medium, kernel)
    sys.stdout.write(rep.to_json() + "\n")
    return EXIT_INDETERMINATE if rep.wavefront_class == INDETERMINATE else EXIT_OK


def cmd_green(args):
    cfg = _load(args.config)
    medium, kernel = build_model(cfg)
    t_max = _opt(cfg, args, "t_max")
    if args.x is None or t_max is None:
        raise ConfigError("green needs --x and --t-max")
    nt = int(_opt(cfg, args, "nt", 1001))
    if nt < 2:
        raise ConfigError("--nt must be >= 2")
    t = np.linspace(0.0, float(t_max), nt)
    sig = _opt(cfg, args, "sigma_s", 0.0, freq=True)
    fn = green_1d if args.dim == 1 else green_3d
    field = fn(medium, kernel, args.x, t, sig)
    if args.out:
        field.to_csv(args.out)
    else:
        sys.stdout.write("t_s,value\n")
        for tv, v in zip(field.t, field.values):
            sys.stdout.write(f"{float(tv)!r},{float(v)!r}\n")
    return EXIT_OK


def cmd_validate(args):
    try:
        medium, kernel = build_model(_load(args.config))
    except (MeasureError, kn.KernelError, ConfigError) as exc:
        doc = {"schema_version": 1, "passed": False,
               "error": {"type": type(exc).__name__, "message": str(exc),
                         "invariant": getattr(exc, "invariant", None)}, "checks": []}
        sys.stdout.write(json.dumps(doc, sort_keys=True) + "\n")
        return _error(exc)
    checks = validate_model(medium, kernel)
    ok = all(c.passed for c in checks)
    doc = {"schema_version": 1, "family": kernel.family, "passed": ok,
           "checks": [c.to_dict() for c in checks]}
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_ml(args):
    v = ml_neg_power(args.alpha, args.xval)
    sys.stdout.write(f"{v!r}\n")
    return EXIT_OK


def make_parser():
    ap = argparse.ArgumentParser(prog="viscowave", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, metavar="PATH", help="model JSON file")
        p.add_argument("--hz", action="store_true",
                       help="frequency flags are in Hz (converted to rad/s on input)")
        return p

    p = common(sub.add_parser("curves", help="attenuation/dispersion/phase speed/Q CSV"))
    p.add_argument("--omega-min", type=float)
    p.add_argument("--omega-max", type=float)
    p.add_argument("--points", type=int, help="grid size (default 241)")
    p.add_argument("--log", action="store_true", default=True,
                   help="log-spaced grid (the default and only spacing)")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_curves)

    p = common(sub.add_parser("classify", help="wavefront regularity report (JSON)"))
    p.set_defaults(func=cmd_classify)

    p = common(sub.add_parser("green", help="Green's function CSV"))
    p.add_argument("--dim", type=int, choices=(1, 3), default=1)
    p.add_argument("--x", type=float, help="position (1-D) or radius (3-D) in m")
    p.add_argument("--t-max", type=float)
    p.add_argument("--nt", type=int, help="time samples (default 1001)")
    p.add_argument("--sigma-s", type=float,
                   help="source taper width in rad/s (0: untapered, unbounded attenuation only)")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_green)

    p = common(sub.add_parser("validate", help="run all property suites (JSON report)"))
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("ml", help="Mittag-Leffler E_alpha(-x^alpha)")
    p.add_argument("alpha", type=float)
    p.add_argument("xval", type=float, metavar="x")
    p.set_defaults(func=cmd_ml)
    return ap


def main(argv=None):
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError, OSError, KeyError, TypeError,
            NotImplementedError) as exc:
        return _error(exc)


if __name__ == "__main__":
    sys.exit(main())
