import json
import subprocess
import sys

import pytest

from rglab import cli


def run(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


def test_verify_delta_json(capsys):
    code, rep = run(["verify-delta", "--kmax", "3"], capsys)
    assert code == 0
    assert rep["schema"] == "rg-taylor-lab/1" and rep["status"] == "pass"
    assert rep["checks"][0]["values"]["forced"] == [1, 2, 3]


def test_zero_lambda_rejected(capsys):
    code, _ = run(["verify-delta", "--lambda", "0"], capsys)
    assert code == 1


def test_bad_k_range_rejected(capsys):
    assert run(["verify-hydrogen", "--k", "1..3"], capsys)[0] == 1
    assert run(["verify-hydrogen", "--k", "a..b"], capsys)[0] == 1


def test_unknown_flag_exits_1():
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify-delta", "--bogus"])
    assert exc.value.code == 1


def test_nonpositive_tolerance_rejected(capsys):
    assert run(["twobody", "--suite", "sphere", "--tol-hessian", "0"], capsys)[0] == 1


def test_hydrogen_fractions_exact(capsys):
    code, rep = run(["verify-hydrogen", "--k", "2..3"], capsys)
    assert code == 0
    k2 = rep["checks"][1]["values"]
    assert (k2["det_num"], k2["det_den"]) == (64, 3)


def test_simulate_writes_csv_and_manifest(tmp_path, capsys):
    code, rep = run(["simulate", "--scenario", "stationary", "--out", str(tmp_path)], capsys)
    assert code == 0
    csv = (tmp_path / "stationary_density.csv").read_bytes()
    assert csv.startswith(b"t,x,rho\n") and b"\r\n" not in csv
    manifest = json.loads((tmp_path / "stationary_manifest.json").read_text())
    assert {"grid", "potential_hash", "dt", "t_end", "norm_drift", "observables"} <= set(manifest)
    assert json.loads((tmp_path / "report.json").read_text()) == rep


def test_thread_count_does_not_change_report(monkeypatch, capsys):
    monkeypatch.setenv("RGLAB_THREADS", "1")
    a = run(["twobody", "--suite", "all"], capsys)[1]
    monkeypatch.setenv("RGLAB_THREADS", "4")
    b = run(["twobody", "--suite", "all"], capsys)[1]
    a.pop("wall_time"), b.pop("wall_time")
    assert a == b


def test_single_k_report(capsys):
    code, rep = run(["verify-hydrogen", "--k", "2"], capsys)
    assert code == 0
    assert rep["checks"][1]["values"]["det"] == {"value": "64/3", "num": 64, "den": 3}


def test_kmax_one_is_vacuous_pass(capsys):
    code, rep = run(["verify-delta", "--kmax", "1"], capsys)
    assert code == 0
    assert all(c["values"]["vacuous"] for c in rep["checks"][:4])


def test_inconclusive_exit_code():
    from rglab.report import Check, Report
    rep = Report("x", {})
    rep.add(Check("a", "pass", {}))
    rep.add(Check("b", "inconclusive", {}))
    assert rep.exit_code == 2
    rep.add(Check("c", "fail", {}))
    assert rep.exit_code == 1


def test_console_script_entry():
    res = subprocess.run([sys.executable, "-m", "rglab.cli", "rg-check", "--scenario", "gauge"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["checks"][0]["values"]["verdict"] == "equal"
