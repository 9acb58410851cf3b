import json
import subprocess
import sys

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qcorr.cli import main
from qcorr.io import read_paired_csv


@pytest.fixture
def sample_csv(tmp_path):
    p = tmp_path / "b.csv"
    assert main(["simulate", "--model", "b", "--n", "300", "--seed", "4", "--out", str(p)]) == 0
    return p


def test_simulate_defaults_and_header(sample_csv):
    assert sample_csv.read_text().splitlines()[0] == "x,y"
    assert read_paired_csv(sample_csv).n == 300


def test_simulate_reproducible(tmp_path, sample_csv):
    again = tmp_path / "again.csv"
    main(["simulate", "--model", "b", "--n", "300", "--seed", "4", "--out", str(again)])
    assert again.read_bytes() == sample_csv.read_bytes()


def test_simulate_m4_and_overrides(tmp_path):
    out = tmp_path / "m4.csv"
    coeffs = "[[0.3, 0.6], [0.7, 0.4]]"
    assert main(["simulate", "--model", "m4", "--coeffs", coeffs, "--n", "500", "--out", str(out)]) == 0
    s = read_paired_csv(out)
    assert np.all(s.xs / s.ys <= 1.75 * (1 + 1e-12))
    out = tmp_path / "f.csv"
    assert main(["simulate", "--model", "f", "--rho", "0.2", "--n", "50", "--out", str(out)]) == 0


def test_simulate_bad_parameter_is_usage_error(tmp_path):
    assert main(["simulate", "--model", "b", "--theta", "3", "--n", "5", "--out", str(tmp_path / "x")]) == 1


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["qtest"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--model", "zz", "--n", "5", "--out", "x"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["tailtest", "--in", "x", "--percentiles", "a,b"])
    assert exc.value.code == 1


def test_data_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("1.0\n")
    assert main(["qtest", "--in", str(bad)]) == 2
    assert "line 1" in capsys.readouterr().err
    assert main(["qtest", "--in", str(tmp_path / "missing.csv")]) == 2


def test_qtest_json(sample_csv, capsys):
    assert main(["qtest", "--in", str(sample_csv), "--seed", "2", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["gamma_test"]["reject"] and doc["seed"] == 2
    assert len(doc["quotient"]["replicate_q"]) == 10
    assert set(doc["fisher_z"]) >= {"r", "w", "z", "p_value"}


def test_qtest_csv_parametric(sample_csv, capsys):
    assert main(["qtest", "--in", str(sample_csv), "--route", "parametric", "--family", "frechet"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "test,route,statistic,p_value,reject"
    assert lines[1].startswith("gamma,parametric")
    assert main(["qtest", "--in", str(sample_csv), "--route", "parametric"]) == 1


def test_tailtest_rows(sample_csv, capsys):
    args = ["tailtest", "--in", str(sample_csv), "--percentiles", "0.8,0.9", "--seed", "1"]
    assert main(args) == 0
    rows = capsys.readouterr().out.splitlines()
    assert len(rows) == 1 + 2 + 2
    assert main(args + ["--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["meta"]["seed_source"] == "argument"
    assert [r["percentile"] for r in doc["rows"][:2]] == [0.8, 0.9]


def test_seed_from_environment(sample_csv, capsys, monkeypatch):
    monkeypatch.setenv("QCORR_SEED", "77")
    assert main(["tailtest", "--in", str(sample_csv), "--percentiles", "0.9", "--json"]) == 0
    meta = json.loads(capsys.readouterr().out)["meta"]
    assert meta["seed"] == 77 and meta["seed_source"] == "env:QCORR_SEED"
    monkeypatch.setenv("QCORR_SEED", "abc")
    assert main(["tailtest", "--in", str(sample_csv), "--percentiles", "0.9"]) == 1


@pytest.mark.parametrize("route", ["empirical", "rank", "parametric"])
def test_transform(sample_csv, tmp_path, route):
    out = tmp_path / "t.csv"
    args = ["transform", "--in", str(sample_csv), "--route", route, "--out", str(out)]
    if route == "parametric":
        args += ["--family", "normal", "--params", "mean=0,sd=1"]
    if route == "rank":
        args += ["--replicates", "3", "--seed", "5"]
    if route == "parametric":
        # Frechet data pushed through a normal CDF saturates in the right tail
        with pytest.warns(RuntimeWarning, match="clamped"):
            assert main(args) == 0
    else:
        assert main(args) == 0
    lines = out.read_text().splitlines()
    if route == "rank":
        assert lines[0] == "replicate,x,y" and len(lines) == 1 + 3 * 300
        assert lines[1].startswith("0,")
    else:
        assert lines[0] == "x,y" and len(lines) == 301
        vals = np.loadtxt(out, delimiter=",", skiprows=1)
        assert np.all(vals > 0)


def test_transform_empirical_example(tmp_path):
    src = tmp_path / "in.csv"
    src.write_text("3.1,1\n1.2,2\n7.7,3\n0.4,4\n")
    out = tmp_path / "out.csv"
    assert main(["transform", "--in", str(src), "--route", "empirical", "--out", str(out)]) == 0
    vals = np.loadtxt(out, delimiter=",", skiprows=1)
    assert_allclose(vals[:, 0], [1.95762, 1.09136, 4.48142, 0.62134], atol=1e-5)


def test_table1_wide(capsys):
    assert main(["table1", "--n", "80", "--reps", "2", "--seed", "1", "--wide", "--models", "a,b"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "percentile,a,b" and len(lines) == 9


def test_power_and_nullcal_json(capsys):
    assert main(["power", "--nmin", "30", "--nmax", "31", "--reps", "5", "--seed", "2", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [r["n"] for r in doc["rows"]] == [30, 31]
    assert main(["nullcal", "--n", "100", "--reps", "10", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["rows"][0]["variant"] == "plain"


def test_out_file(tmp_path):
    out = tmp_path / "p.csv"
    assert main(["power", "--nmin", "30", "--nmax", "30", "--reps", "3", "--out", str(out)]) == 0
    assert out.read_text().startswith("n,gamma_power,fisher_power")


def test_module_entry_point_exit_codes(tmp_path):
    r = subprocess.run([sys.executable, "-m", "qcorr", "power", "--nmin", "x"], capture_output=True)
    assert r.returncode == 1
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n")
    r = subprocess.run([sys.executable, "-m", "qcorr", "qtest", "--in", str(bad)], capture_output=True)
    assert r.returncode == 2
