"""Sampled tests for complete monotonicity and the Pick property."""
from __future__ import annotations

import numpy as np


def divided_difference_signs(t, values, max_order, rtol=1e-9):
    """Return ``[(f"order{n}", t_i), ...]`` where ``(-1)^n f[t_i..t_{i+n}] < 0``.

    For a CM function the ``n``-th divided difference equals
    ``f^{(n)}(xi) / n!`` and so carries the sign ``(-1)^n``.  A difference is
    only flagged when it is negative beyond ``rtol`` times the sum of the
    absolute terms entering it (sample noise).
    """
    t = np.asarray(t, dtype=float)
    f = np.asarray(values, dtype=float)
    out = []
    for n in range(max_order + 1):
        for i in range(len(t) - n):
            ts = t[i:i + n + 1]
            terms = []
            for j in range(n + 1):
                den = np.prod([ts[j] - ts[k] for k in range(n + 1) if k != j])
                terms.append(f[i + j] / den)
            dd = sum(terms)
            noise = rtol * sum(abs(x) for x in terms)
            if (-1) ** n * dd < -noise:
                out.append((f"order{n}", float(t[i])))
    return out


def pick_violations(fn, points, rtol=1e-10):
    """Points in the upper half-plane where ``Im fn(p) < 0`` beyond noise."""
    points = np.asarray(points, dtype=complex)
    vals = np.asarray(fn(points), dtype=complex)
    noise = rtol * np.abs(vals)
    bad = vals.imag < -noise
    return [complex(p) for p in points[bad]]


def upper_half_plane_sample(n, scale=1.0, seed=0):
    """``n`` points with log-uniform modulus around ``scale`` and argument in (0, pi)."""
    rng = np.random.default_rng(seed)
    mod = scale * 10.0 ** rng.uniform(-4, 4, n)
    arg = rng.uniform(1e-3, np.pi - 1e-3, n)
    return mod * np.exp(1j * arg)
