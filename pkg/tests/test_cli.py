import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from viscowave.cli import build_model, main

KERNELS = {
    "prony": {"type": "prony", "terms": [[2.0, 1.0], [1.0, 3.0]]},
    "cole_cole": {"type": "cole_cole", "M": 1.0, "a": 0.5, "tau": 1.0, "alpha": 0.5},
    "constant_q": {"type": "constant_q", "A": 0.5, "tau": 1.0, "alpha": 0.5},
    "newtonian": {"type": "newtonian", "N": 1.0},
    "zero": {"type": "prony", "terms": []},
}


@pytest.fixture
def config(tmp_path):
    def make(kernel, medium=None, options=None):
        doc = {"medium": medium or {"c0": 1.0, "rho0": 1.0},
               "kernel": KERNELS[kernel] if isinstance(kernel, str) else kernel}
        if options:
            doc["options"] = options
        path = tmp_path / f"cfg{len(list(tmp_path.iterdir()))}.json"
        path.write_text(json.dumps(doc))
        return str(path)
    return make


def _rows(text):
    return list(csv.reader(io.StringIO(text)))


@pytest.mark.parametrize("al", [0.2, 0.5, 0.8])
def test_curves_cole_cole_files(config, tmp_path, al):
    cfg = config({"type": "cole_cole", "M": 2.25e9, "a": 0.5, "tau": 1e-13, "alpha": al},
                 {"c0": 1500.0, "rho0": 1000.0})
    out = tmp_path / f"cc{al}.csv"
    assert main(["curves", "--config", cfg, "--out", str(out)]) == 0
    rows = _rows(out.read_text())
    assert rows[0] == ["omega_rad_per_s", "attenuation_neper_per_m", "dispersion_rad_per_m",
                       "phase_speed_m_per_s", "q_factor"]
    c = np.array([float(r[3]) for r in rows[1:]])
    assert len(c) == 241 and np.all(np.diff(c) >= 0)
    meta = json.loads(out.with_suffix(".json").read_text())
    assert meta["schema_version"] == 1 and meta["family"] == "cole_cole"


def test_curves_constant_q_unbounded(config, capsys):
    assert main(["curves", "--config", config("constant_q"), "--points", "32"]) == 0
    c = [float(r[3]) for r in _rows(capsys.readouterr().out)[1:]]
    assert c[-1] > c[-2] > c[0]


def test_curves_zero_flat(config, capsys):
    assert main(["curves", "--config", config("zero"), "--points", "16"]) == 0
    rows = _rows(capsys.readouterr().out)[1:]
    assert all(float(r[1]) == 0 and float(r[3]) == 1.0 and r[4] == "inf" for r in rows)


def test_curves_hz_and_options(config, capsys):
    cfg = config("prony", options={"points": 20, "omega_min": 1.0, "omega_max": 100.0})
    assert main(["curves", "--config", cfg]) == 0
    rows = _rows(capsys.readouterr().out)[1:]
    assert len(rows) == 20 and float(rows[0][0]) == 1.0
    assert main(["curves", "--config", cfg, "--hz", "--omega-min", "1", "--omega-max", "10"]) == 0
    rows = _rows(capsys.readouterr().out)[1:]
    assert float(rows[0][0]) == pytest.approx(2 * math.pi)


def test_curves_deterministic(config, tmp_path):
    cfg = config("cole_cole")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["curves", "--config", cfg, "--out", str(a)])
    main(["curves", "--config", cfg, "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("kernel, cls", [("prony", "DiscontinuityAdmitting"),
                                         ("constant_q", "NoWavefront"),
                                         ("cole_cole", "SmoothWavefront")])
def test_classify(config, capsys, kernel, cls):
    assert main(["classify", "--config", config(kernel)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["class"] == cls and doc["schema_version"] == 1


def test_green_elastic(config, capsys):
    assert main(["green", "--config", config("zero"), "--x", "1", "--t-max", "2",
                 "--nt", "401", "--sigma-s", "200"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert rows[0] == ["t_s", "value"]
    t, v = np.array(rows[1:], dtype=float).T
    assert np.all(np.abs(v[t < 0.95]) < 1e-6) and np.allclose(v[t > 1.05], 0.5, atol=1e-6)


def test_green_3d_spike(config, tmp_path):
    out = tmp_path / "g3.csv"
    assert main(["green", "--config", config("zero"), "--dim", "3", "--x", "1.5",
                 "--t-max", "3", "--nt", "601", "--sigma-s", "200", "--out", str(out)]) == 0
    t, v = np.array(_rows(out.read_text())[1:], dtype=float).T
    assert t[np.argmax(v)] == pytest.approx(1.5)
    assert json.loads(out.with_suffix(".json").read_text())["dim"] == 3


def test_green_cole_cole_delayed(config, capsys):
    assert main(["green", "--config", config("cole_cole"), "--x", "4", "--t-max", "10",
                 "--nt", "2001", "--sigma-s", "200"]) == 0
    t, v = np.array(_rows(capsys.readouterr().out)[1:], dtype=float).T
    front = 4.0 / math.sqrt(1.5)
    assert np.max(np.abs(v[t < front - 3 / 200])) < 1e-4 * np.max(np.abs(v))


def test_green_needs_taper(config, capsys):
    assert main(["green", "--config", config("prony"), "--x", "1", "--t-max", "2"]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["schema_version"] == 1 and "taper" in err["message"]


def test_validate_corrupted_measure(config, capsys):
    cfg = config({"type": "custom_measure", "measure": {"atoms": [[1.0, -2.0]]}})
    assert main(["validate", "--config", cfg]) == 1
    cap = capsys.readouterr()
    assert json.loads(cap.out)["error"]["invariant"] == "positive_weights"
    assert json.loads(cap.err)["invariant"] == "positive_weights"


def test_validate_condition_error_verbatim(config, capsys):
    from viscowave.kernels import quasilinear_measure
    from viscowave.measures import MeasureError
    with pytest.raises(MeasureError) as ei:
        quasilinear_measure(1.0, 0.0, 0.5, math.e)
    cfg = config({"type": "custom_measure", "measure": {"atoms": [], "density": {
        "kind": "quasilinear", "b": 1.0, "lambda": 0.0, "gamma": 0.5, "support_min": math.e}}})
    assert main(["validate", "--config", cfg]) == 1
    assert json.loads(capsys.readouterr().err)["message"] == str(ei.value)


def test_validate_custom_measure_passes(config, capsys):
    # atoms only: a density makes the Green's function check quadrature-bound
    cfg = config({"type": "custom_measure", "measure": {"atoms": [[1.0, 0.5], [4.0, 0.25]]}})
    code = main(["validate", "--config", cfg])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0 and doc["passed"]


@pytest.mark.parametrize("args, want", [(["1", "1"], math.exp(-1)),
                                        (["0.5", "1"], 0.42758357615580705),
                                        (["0.5", "0"], 1.0)])
def test_ml(capsys, args, want):
    assert main(["ml", *args]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(want, abs=1e-12)


@pytest.mark.parametrize("cfg, msg", [({"kernel": {"type": "prony", "terms": []}}, "medium"),
                                      ({"medium": {"c0": 1, "rho0": 1},
                                        "kernel": {"type": "maxwell"}}, "unknown type")])
def test_build_model_errors(cfg, msg):
    with pytest.raises(ValueError, match=msg):
        build_model(cfg)


def test_bad_config_exit(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert main(["classify", "--config", str(p)]) == 1
    assert json.loads(capsys.readouterr().err)["error"] == "JSONDecodeError"


def test_tolerance_option(config, monkeypatch, capsys):
    import os
    monkeypatch.delenv("VISCOWAVE_TOL", raising=False)
    cfg = config("prony", options={"tolerance": 1e-9})
    main(["classify", "--config", cfg])
    assert float(os.environ["VISCOWAVE_TOL"]) == 1e-9


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "viscowave", "ml", "0.5", "1"],
                         capture_output=True, text=True, check=True).stdout
    assert float(out) == pytest.approx(0.4275836, abs=1e-7)
