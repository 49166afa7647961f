import json
import subprocess
import sys

import pytest

from cvnn_approx.cli import RATE_HEADER, fitted_slope, fmt, main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_fmt():
    assert fmt(0.0) == "0"
    assert fmt(None) == "nan"
    assert fmt(float("nan")) == "nan"
    assert fmt(0.25) == "0.25"
    assert fmt(-1.0) == "-1"


def test_synth_zero(tmp_path, capsys):
    out = tmp_path / "net.json"
    code, cap = run(capsys, "synth", "--target", "zero", "--budget", "100", "--out", str(out))
    assert code == 0
    assert cap.out.strip().splitlines()[-1] == "error=0"
    assert json.loads(out.read_text())["version"] == 1
    assert (tmp_path / "net.diagnostics.json").exists()


def test_synth_conj(tmp_path, capsys):
    out = tmp_path / "net.json"
    code, cap = run(capsys, "synth", "--activation", "exp-re", "--target", "conj", "--n", "1", "--k", "1", "--budget", "625", "--out", str(out))
    assert code == 0
    assert float(cap.out.strip().splitlines()[-1].split("=")[1]) <= 0.05


def test_synth_degenerate(tmp_path, capsys):
    out = tmp_path / "net.json"
    code, cap = run(capsys, "synth", "--target", "gauss", "--budget", "10", "--n", "1", "--out", str(out))
    assert code == 0
    assert json.loads(out.read_text())["neurons"] == []
    assert json.loads((tmp_path / "net.diagnostics.json").read_text())["degenerate_budget"] is True


def test_synth_exit_codes(tmp_path, capsys):
    out = str(tmp_path / "net.json")
    assert run(capsys, "synth", "--target", "bogus", "--budget", "81", "--out", out)[0] == 2
    assert run(capsys, "synth", "--target", "zero", "--activation", "bogus", "--budget", "81", "--out", out)[0] == 2
    assert run(capsys, "synth", "--target", "gauss", "--activation", "holomorphic-id", "--budget", "81", "--out", out)[0] == 3
    code, cap = run(capsys, "synth", "--target", "gauss", "--k", "2", "--budget", "1681", "--out", out)
    assert code == 4
    assert cap.out.strip().splitlines()[-1].startswith("error=")
    assert json.loads((tmp_path / "net.diagnostics.json").read_text())["conditioning"] is True


def test_rates_csv(tmp_path, capsys):
    out = tmp_path / "r.csv"
    code, _ = run(capsys, "rates", "--target", "gauss", "--k", "2", "--budgets", "81,625,1681", "--out", str(out), "--no-timing")
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == RATE_HEADER
    assert len(lines) == 5 and lines[-1].startswith("#fitted_slope=")
    assert lines[-1].endswith("#target_slope=-1")


def test_rates_single_budget_has_no_footer(tmp_path, capsys):
    out = tmp_path / "r.csv"
    run(capsys, "rates", "--target", "resq", "--k", "2", "--budgets", "81", "--out", str(out))
    assert not any(l.startswith("#") for l in out.read_text().splitlines())


def test_rates_degenerate(tmp_path, capsys):
    out = tmp_path / "r.csv"
    run(capsys, "rates", "--target", "gauss", "--budgets", "10,30,80", "--out", str(out))
    lines = out.read_text().splitlines()
    assert len(lines) == 4
    assert all(l.split(",")[1] == "0" for l in lines[1:])


def test_fitted_slope_rules():
    rows = [(81, 1, 25, 0.5, 0.1, 0), (625, 2, 169, float("nan"), 0.1, 0), (1681, 3, 441, 0.1, 0.1, 0)]
    assert fitted_slope(rows) is None
    rows[1] = (625, 2, 169, 0.2, 0.1, 0)
    assert fitted_slope(rows) < 0


def test_check_activation(capsys):
    code, cap = run(capsys, "check-activation", "--activation", "modrelu:-1", "--order", "3")
    assert code == 0 and cap.out.strip().endswith("verdict=admissible")
    code, cap = run(capsys, "check-activation", "--activation", "holomorphic-id", "--order", "1")
    assert code == 3 and cap.out.strip().endswith("verdict=rejected")
    assert run(capsys, "check-activation", "--activation", "cardioid", "--order", "2")[0] == 0


def test_kernels(capsys):
    code, cap = run(capsys, "kernels", "--m", "2", "--s", "1")
    assert code == 0
    assert "   3 0.5" in cap.out and "  -3 0.5" in cap.out and "   2 1" in cap.out
    assert run(capsys, "kernels", "--m", "4", "--s", "2")[0] == 0


def test_ridge_rates(capsys):
    code, cap = run(capsys, "ridge-rates", "--counts", "2,8")
    assert code == 0
    rows = cap.out.strip().splitlines()[1:]
    assert float(rows[-1].split(",")[1]) <= 1e-4


def test_bad_thread_cap(monkeypatch, capsys):
    monkeypatch.setenv("CVNN_SYNTH_THREADS", "zero")
    assert run(capsys, "kernels", "--m", "1")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cvnn_approx", "kernels", "--m", "1"], capture_output=True, text=True)
    assert proc.returncode == 0 and "within_bound=true" in proc.stdout
