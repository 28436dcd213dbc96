import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate as sint

from viscowave import measures as msr
from viscowave._checks import divided_difference_signs
from viscowave.measures import MeasureError, SpectralMeasure

ATOM = SpectralMeasure([(1.0, 2.0)])
EMPTY = SpectralMeasure()


def test_single_atom_report():
    rep = msr.integrability_report(ATOM)
    assert rep.finite_over_1plus_r and rep.finite_over_r
    assert rep.total_mass == 2.0


def test_log_density_integrable():
    nu = SpectralMeasure((), msr.power_density(1.0, 0.0, 2.0, math.e))
    rep = msr.integrability_report(nu)
    assert rep.finite_over_1plus_r
    assert rep.total_mass == math.inf


def test_flat_density_not_integrable():
    nu = SpectralMeasure((), msr.power_density(1.0, 0.0, 0.0, 1.0))
    assert not msr.integrability_report(nu).finite_over_1plus_r


def test_callable_density_without_descriptor():
    # no tail law: the doubling cutoffs must notice divergence on their own
    dens = msr.Density(lambda r: np.ones_like(np.asarray(r, dtype=float)), support_min=1.0)
    assert not msr.integrability_report(SpectralMeasure((), dens)).finite_over_1plus_r
    dens = msr.Density(lambda r: np.asarray(r, dtype=float) ** -1.5, support_min=1.0)
    rep = msr.integrability_report(SpectralMeasure((), dens))
    assert rep.finite_over_1plus_r
    assert rep.total_mass == pytest.approx(2.0, rel=1e-8)


@pytest.mark.parametrize("fn", [msr.attenuation_from_measure, msr.dispersion_from_measure])
def test_zero_measure(fn):
    assert fn(EMPTY, 3.0) == 0.0


def test_atom_values():
    assert msr.attenuation_from_measure(ATOM, 1.0) == pytest.approx(1.0)
    assert msr.dispersion_from_measure(ATOM, 1.0) == pytest.approx(1.0)
    assert msr.attenuation_from_measure(ATOM, 1e6) == pytest.approx(2.0, abs=1e-6)
    w = 1e-8
    assert msr.dispersion_from_measure(ATOM, w) / w == pytest.approx(2.0, rel=1e-12)


def test_beta_atom():
    assert msr.beta_eval(ATOM, 1.0) == pytest.approx(1.0)
    assert msr.beta_eval(ATOM, -1j) == pytest.approx(1.0 - 1.0j)


def test_beta_on_cut_rejected():
    with pytest.raises(ValueError, match="cut"):
        msr.beta_eval(ATOM, -2.0)


def test_beta_sublinear():
    nu = SpectralMeasure([(1.0, 2.0), (5.0, 1.0)])
    p = 1e6 * 5.0
    assert abs(msr.beta_eval(nu, p) / p) < 1e-6


def test_bernstein_atom():
    nu = SpectralMeasure([(1.0, 3.0)])
    assert msr.bernstein_eval(nu, 1e-12) == pytest.approx(3.0)
    assert msr.bernstein_eval(nu, 1.0) == pytest.approx(3 * math.exp(-1), rel=1e-12)
    with pytest.raises(ValueError):
        msr.bernstein_eval(nu, 0.0)


def test_bernstein_density_against_scipy():
    # r^-1/2 e^-r has Laplace transform sqrt(pi/(1+t))
    dens = msr.Density(lambda r: r ** -0.5 * np.exp(-r))
    nu = SpectralMeasure((), dens)
    t = np.logspace(-2, 2, 15)
    got = msr.bernstein_eval(nu, t)
    assert np.allclose(got, np.sqrt(math.pi / (1 + t)), rtol=1e-9)
    assert divided_difference_signs(t, got, 3) == []


def test_density_quadrature_against_scipy():
    nu = SpectralMeasure((), msr.power_density(1.0, -0.5, 0.0, 0.0, kind="power"))
    w = 3.0
    ref, _ = sint.quad(lambda r: w * w * r ** -0.5 / (w * w + r * r), 0, np.inf, limit=200)
    assert msr.attenuation_from_measure(nu, w) == pytest.approx(ref, rel=1e-7)
    # closed form of the same integral
    assert msr.attenuation_from_measure(nu, w) == pytest.approx(
        math.pi / (2 * math.cos(math.pi / 4)) * math.sqrt(w), rel=1e-9)


@pytest.mark.parametrize("atoms, inv", [([(0.0, 1.0)], "positive_locations"),
                                        ([(1.0, -1.0)], "positive_weights")])
def test_invalid_atoms(atoms, inv):
    with pytest.raises(MeasureError) as ei:
        SpectralMeasure(atoms)
    assert ei.value.invariant == inv


def test_json_round_trip():
    nu = SpectralMeasure([(1.0, 2.0)], msr.power_density(1.0, 0.0, 2.0, math.e))
    back = msr.measure_from_json(msr.measure_to_json(nu))
    assert back.atoms == nu.atoms
    assert back.density.params == nu.density.params
    w = np.array([0.5, 5.0, 50.0])
    assert np.allclose(msr.attenuation_from_measure(back, w), msr.attenuation_from_measure(nu, w))


def test_json_rejects_divergent_density():
    doc = {"atoms": [], "density": {"kind": "quasilinear", "b": 1, "lambda": 0, "gamma": 0.5,
                                    "support_min": math.e}}
    with pytest.raises(MeasureError, match="condition_star"):
        msr.measure_from_json(doc)


atom_lists = st.lists(st.tuples(st.floats(1e-3, 1e3), st.floats(1e-3, 1e2)), min_size=1, max_size=5)


@settings(max_examples=40, deadline=None)
@given(atom_lists, st.floats(1e-3, 1e3), st.floats(1.01, 100.0))
def test_monotone_transforms(atoms, w1, ratio):
    nu = SpectralMeasure(atoms)
    w2 = w1 * ratio
    a1, a2 = msr.attenuation_from_measure(nu, [w1, w2])
    d1, d2 = msr.dispersion_from_measure(nu, [w1, w2])
    assert a1 <= a2 * (1 + 1e-12)
    assert d1 / w1 >= d2 / w2 * (1 - 1e-12)


@settings(max_examples=30, deadline=None)
@given(atom_lists, st.floats(1e-3, 1e3))
def test_beta_matches_real_integrals(atoms, w):
    nu = SpectralMeasure(atoms, msr.power_density(0.3, -0.4, 0.0, 0.0, kind="power"))
    b = msr.beta_eval(nu, -1j * w)
    assert b.real == pytest.approx(msr.attenuation_from_measure(nu, w), rel=1e-10)
    assert -b.imag == pytest.approx(msr.dispersion_from_measure(nu, w), rel=1e-10)


@settings(max_examples=30, deadline=None)
@given(atom_lists)
def test_bernstein_cm_necessary(atoms):
    t = np.logspace(-2, 1, 20)
    k = msr.bernstein_eval(SpectralMeasure(atoms), t)
    assert np.all(k >= 0)
    assert divided_difference_signs(t, k, 2) == []


def test_sublinear_on_grid():
    nu = SpectralMeasure((), msr.power_density(1.0, -0.5, 0.0, 0.0, kind="power"))
    w = np.logspace(0, 12, 7)
    ratio = np.asarray(msr.attenuation_from_measure(nu, w)) / w
    assert np.all(np.diff(ratio) < 0) and ratio[-1] < 1e-5 * ratio[0]
