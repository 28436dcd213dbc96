import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from viscowave import dispersion as ds
from viscowave import kernels as kn
from viscowave import measures as msr
from viscowave._checks import pick_violations, upper_half_plane_sample

UNIT = kn.Medium(1.0, 1.0)
WATER = kn.Medium(1500.0, 1000.0)
ZERO = kn.prony_kernel([])
PRONY = kn.prony_kernel([(2.0, 1.0), (1.0, 3.0)])
CC = kn.cole_cole_kernel(WATER.bigK, 0.5, 1e-13, 0.5)
KERNELS = [(UNIT, PRONY), (UNIT, kn.cole_cole_kernel(1.0, 0.5, 1.0, 0.3)),
           (UNIT, kn.constant_q_kernel(0.5, 1.0, 0.5)), (UNIT, kn.newtonian_kernel(1.0))]
IDS = [k.family for _, k in KERNELS]


def test_kappa_closed_forms():
    p = np.array([1.0, 2 + 3j, 0.1j])
    assert np.allclose(ds.kappa(UNIT, ZERO, p), p)
    nw = kn.newtonian_kernel(0.7)
    m = kn.Medium(2.0, 3.0)
    assert ds.kappa(m, nw, 1.0) == pytest.approx(0.5 / math.sqrt(1 + 0.7 / 12.0))


def test_kappa_cut_rejected():
    with pytest.raises(ValueError, match="cut"):
        ds.kappa(UNIT, PRONY, -1.0)


def test_cole_cole_real_part_nonnegative():
    w = np.logspace(-6, 6, 1000) / 1e-13
    assert np.all(np.real(ds.kappa(WATER, CC, -1j * w)) >= 0)


def test_speeds():
    assert ds.wavefront_speed(UNIT, ZERO) == 1.0
    assert ds.wavefront_speed(UNIT, PRONY) == 2.0
    assert ds.wavefront_speed(UNIT, KERNELS[2][1]) == math.inf
    assert ds.static_speed(UNIT, kn.prony_kernel([], offset=3.0)) == 2.0
    assert ds.static_speed(WATER, CC) == 1500.0
    # numerical limit kappa(p)/p at large real p
    p = 1e8 / PRONY.tau_char
    assert ds.kappa(UNIT, PRONY, p).real / p == pytest.approx(0.5, rel=1e-7)


def test_zero_curve():
    cv = ds.curve(UNIT, ZERO, np.logspace(-2, 2, 9))
    assert np.all(cv.A == 0) and np.all(cv.D == 0)
    assert np.allclose(cv.c, 1.0) and np.all(cv.q_infinite)


def test_newtonian_quadratic():
    N = 2.0
    w = np.logspace(-6, -3, 10) / N
    A = np.asarray(ds.attenuation(UNIT, kn.newtonian_kernel(N), w))
    assert np.allclose(A, N * w ** 2 / 2.0, rtol=1e-2)


def test_cole_cole_speed_rises():
    cv = ds.curve(WATER, CC, np.logspace(-6, 6, 200) / 1e-13)
    assert cv.c[0] == pytest.approx(1500.0, rel=1e-3)
    assert np.all(np.diff(cv.c) >= 0)
    assert cv.c[-1] <= cv.C0


def test_closed_form():
    X, Y, A = ds.cole_cole_closed_form(WATER, CC, np.logspace(-4, 4, 50) / 1e-13)
    assert np.all(np.asarray(Y) <= 0)
    X0, Y0, A0 = ds.cole_cole_closed_form(WATER, {"M": WATER.bigK, "a": 0.5, "tau": 1e-13,
                                                  "alpha": 0.5}, 1e-3)
    assert X0 == pytest.approx(1.0, abs=1e-3) and abs(Y0) < 1e-3 and A0 < 1e-10
    _, _, a1 = ds.cole_cole_closed_form(WATER, CC, 1e13)
    assert a1 == pytest.approx(ds.attenuation(WATER, CC, 1e13), rel=1e-10)


def test_prony_saturation():
    assert ds.prony_saturation(UNIT, PRONY) == pytest.approx(0.3125)
    assert ds.prony_saturation(UNIT, ZERO) == 0.0
    one = kn.prony_kernel([(1.0, 1.0)])
    R = ds.prony_saturation(UNIT, one)
    assert R == pytest.approx(2 ** -1.5 / 2)
    assert ds.attenuation(UNIT, one, 1e4) == pytest.approx(R, rel=1e-2)
    with pytest.raises(ValueError):
        ds.prony_saturation(UNIT, CC)


def test_extract_zero_and_newtonian():
    assert ds.extract_measure(UNIT, ZERO, np.logspace(-2, 2, 5)).is_zero
    N = 0.5
    nu = ds.extract_measure(UNIT, kn.newtonian_kernel(N), np.logspace(-3, 8, 45))
    assert nu.density.support_min == pytest.approx(1.0 / N, rel=1e-6)
    assert nu.density(1.0) == 0.0 and nu.density(3.0) > 0


def test_extract_round_trip_cole_cole():
    k = kn.cole_cole_kernel(1.0, 0.5, 1.0, 0.5)
    nu = ds.extract_measure(UNIT, k, np.logspace(-8, 30, 153))
    w = np.logspace(-4, 4, 9)
    got = np.asarray(msr.attenuation_from_measure(nu, w))
    assert np.max(np.abs(got / ds.attenuation(UNIT, k, w) - 1)) < 1e-4


def test_curve_rejects_bad_grid():
    with pytest.raises(ValueError):
        ds.curve(UNIT, PRONY, [1.0, 1.0])


def test_curve_invariant_error_names_frequency(monkeypatch):
    # corrupt the attenuation at one node
    real = ds.kappa

    def bent(medium, kernel, p):
        k = np.array(real(medium, kernel, p), dtype=complex)
        k[3] = -abs(k[3].real) + 1j * k[3].imag
        return k

    monkeypatch.setattr(ds, "kappa", bent)
    w = np.logspace(-1, 1, 8)
    with pytest.raises(ds.CurveInvariantError, match=f"{w[3]:.6g}"):
        ds.curve(UNIT, PRONY, w)
    assert ds.curve(UNIT, PRONY, w, strict=False).violations


def test_csv_and_sidecar(tmp_path):
    cv = ds.curve(UNIT, KERNELS[2][1], np.logspace(-2, 2, 16))
    path, side = cv.to_csv(tmp_path / "c.csv")
    head = path.read_text().splitlines()[0].split(",")
    assert tuple(head) == ds.CSV_COLUMNS
    meta = json.loads(side.read_text())
    assert meta["C0"] == "inf" and meta["schema_version"] == 1


@pytest.mark.parametrize("medium, kernel", KERNELS, ids=IDS)
def test_kappa_pick(medium, kernel):
    p = upper_half_plane_sample(500)
    assert pick_violations(lambda z: ds.kappa(medium, kernel, z), p) == []
    assert np.all(np.asarray(ds.kappa(medium, kernel, np.logspace(-3, 3, 20))).real >= 0)


@pytest.mark.parametrize("medium, kernel", KERNELS, ids=IDS)
def test_curve_invariants(medium, kernel):
    cv = ds.curve(medium, kernel, np.logspace(-6, 6, 400))
    assert cv.violations == []
    assert np.all(cv.c >= cv.Cinf * (1 - 1e-12)) and np.all(cv.c <= cv.C0)
    assert np.allclose(1 / cv.c, cv.B + cv.D / cv.omega, rtol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(1e-2, 1e2), st.floats(1.5, 10.0))
def test_constant_q_asymptotic_scaling(al, A1, s):
    k = kn.constant_q_kernel(A1, 1.0, al)
    w = 1e40
    ratio = ds.attenuation(UNIT, k, s * w) / ds.attenuation(UNIT, k, w)
    # the correction decays like (omega tau)^-alpha / A1
    assert ratio == pytest.approx(s ** (1 - al / 2), rel=10 * w ** -al / min(A1, 1.0))
