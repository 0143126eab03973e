import json

import pytest
from click.testing import CliRunner

from torellicore import acceptance as ac
from torellicore.cli import cli

STD = "[[1,0,0,0,0,0],[0,1,0,0,0,0],[0,0,1,0,0,0]]"


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(cli, list(args), catch_exceptions=False)

    return invoke


def test_version(run):
    r = run("--version")
    assert r.exit_code == 0 and "0.1.0" in r.output


def test_enumerate_supersets(run):
    r = run("--format", "json", "enumerate", "supersets", "--A", STD)
    assert r.exit_code == 0
    out = json.loads(r.output)
    assert out["count"] == len(out["items"]) == 102


def test_enumerate_h2prime_text(run):
    r = run("enumerate", "h2prime", "--A", STD)
    assert r.exit_code == 0 and r.output.strip()


def test_classify(run):
    r = run("--format", "json", "eval", "classify", "--C", "[[1,0,0,0,0,0],[0,1,0,0,0,0],[0,0,1,0,0,0],[1,1,0,0,0,0]]")
    assert r.exit_code == 0
    out = json.loads(r.output)
    assert out["tag"] == "H1_type2" and out["special"] == [0, 0, 1, 0, 0, 0]


def test_psi_values(run):
    r = run("--format", "json", "eval", "psi", "--iota-z3")
    assert r.exit_code == 0 and json.loads(r.output)["psi"] == 1
    r = run("--format", "json", "eval", "psi", "--word", "[[0, 2]]")
    out = json.loads(r.output)
    assert r.exit_code == 0 and out["nu"] == 2 and out["psi_nu"] == out["psi_rho"] == 1


def test_bad_json_is_usage_error(run):
    r = run("eval", "classify", "--C", "[[1,0")
    assert r.exit_code == 2


def test_invalid_vertex_set_is_usage_error(run):
    r = run("descent", "sigma", "--A0", "[[1,0,0,0,0,0],[1,0,0,0,0,0],[0,0,1,0,0,0]]")
    assert r.exit_code == 2


def test_unknown_suite_is_usage_error(run):
    r = run("verify", "no-such-suite")
    assert r.exit_code == 2


def test_failing_suite_exits_one(run):
    @ac.suite("always-fails", "a suite with one false check")
    def failing(res, rng):
        res.check("false", False)

    try:
        r = run("verify", "always-fails")
        assert r.exit_code == 1 and "FAIL" in r.output
    finally:
        ac.SUITES.pop("always-fails", None)


def test_verify_json_is_byte_identical(run):
    a = run("--format", "json", "--seed", "5", "verify", "boolalg-dims", "psi-tables")
    b = run("--format", "json", "--seed", "5", "verify", "boolalg-dims", "psi-tables")
    assert a.exit_code == b.exit_code == 0
    assert a.output == b.output
    assert json.loads(a.output)["ok"] is True


def test_timings_flag_adds_wall_time(run):
    r = run("--format", "json", "verify", "--timings", "boolalg-dims")
    assert "seconds" in json.loads(r.output)["suites"][0]


def test_descent_commands(run, tmp_path):
    r = run("--format", "json", "descent", "sigma", "--A0", STD)
    assert r.exit_code == 0 and json.loads(r.output)["ok"]
    r = run("--format", "json", "descent", "lambda", "--A0", STD)
    assert r.exit_code == 0 and json.loads(r.output)["ok"]
    f = tmp_path / "f.json"
    f.write_text(json.dumps(json.loads(r.output)["data"]["f"]))
    r = run("descent", "lambda", "--A0", STD, "--f", str(f))
    assert r.exit_code == 0, r.output
    r = run("descent", "kernel", "--system", "lambda", "--bound", "4")
    assert r.exit_code == 0 and "PASS" in r.output


def test_report_writes_file(run, tmp_path, monkeypatch):
    monkeypatch.setattr(ac, "ORDER", ("boolalg-dims", "sigma-hat-iota"))
    out = tmp_path / "report.json"
    r = run("report", "-o", str(out))
    assert r.exit_code == 0
    data = json.loads(out.read_text())
    assert data["ok"] and len(data["suites"]) == 2 and "gf2_backend" in data
