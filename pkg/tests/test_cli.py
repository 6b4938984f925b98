import io
import json
import subprocess
import sys
import time

import pytest

from modvertex.cli import SCHEMA, main, run
from modvertex.suites import SuiteConfig, parse_kappa


def _run(tmp_path, *args, name="out.json"):
    out = tmp_path / name
    status = main(list(args) + ["--output", str(out)])
    return status, (json.loads(out.read_text()) if out.exists() else None), out


def test_lucas_suite(tmp_path):
    t0 = time.perf_counter()
    status, report, _ = _run(tmp_path, "--suite", "lucas", "--p", "2,3,5,7")
    assert time.perf_counter() - t0 < 1.0
    assert status == 0 and report["passed"] and report["schema"] == SCHEMA
    jobs = report["suites"][0]["jobs"]
    assert [j["job"] for j in jobs] == ["p=2", "p=3", "p=5", "p=7"]
    assert all(j["checks"][0]["checked"] == 101 * 51 for j in jobs)


def test_extra_random_pairs_are_seeded(tmp_path):
    _, a, _ = _run(tmp_path, "--suite", "lucas", "--p", "3", "--extra-random", "200", "--seed", "7")
    assert a["suites"][0]["jobs"][0]["checks"][0]["checked"] == 101 * 51 + 200


def test_character_suite_reports_coefficients(tmp_path):
    status, report, _ = _run(tmp_path, "--suite", "character", "--p", "2", "--depth", "8")
    assert status == 0
    checks = report["suites"][0]["jobs"][0]["checks"]
    mathieu = checks[0]
    assert mathieu["details"]["depth0"] == {"(0,)": 1, "(-1,)": 1}
    coeffs = mathieu["details"]["coefficients"]
    assert {"alpha_coeffs": [-1], "delta_deg": 0, "coeff": 1} in coeffs
    assert max(c["delta_deg"] for c in coeffs) == 8


def test_all_suites_smoke(tmp_path):
    status, report, _ = _run(tmp_path, "--suite", "all", "--p", "2", "--depth", "3")
    assert status == 0
    assert len(report["suites"]) == 11


def test_reports_are_byte_identical(tmp_path):
    args = ["--suite", "wff-relations", "--p", "2", "--depth", "1", "--mode-bound", "1"]
    _, _, a = _run(tmp_path, *args, name="a.json")
    _, _, b = _run(tmp_path, *args, name="b.json")
    assert a.read_bytes() == b.read_bytes()


def test_text_lines(capsys):
    status = main(["--suite", "phi-pformula", "--p", "3"])
    out = capsys.readouterr().out.splitlines()
    assert status == 0
    assert out[-1].startswith("PASS  overall (1 jobs, backend=")
    assert out[0].startswith("PASS  phi-pformula")


@pytest.mark.parametrize("args", [
    ["--suite", "pcenter-images", "--p", "5"],
    ["--suite", "character", "--depth", "9"],
    ["--suite", "lucas", "--p", "4"],
    ["--suite", "state-field", "--depth", "-1"],
])
def test_invalid_configurations_exit_2(args, capsys):
    assert main(args) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_depth_cap_can_be_raised():
    cfg = SuiteConfig(suite="character", p=(2,), depth=9, depth_cap=9)
    cfg.validate()


def test_force_unlocks_slow_primes():
    SuiteConfig(suite="pcenter-images", p=(5,), force=True).validate()


def test_failing_suite_exits_1(monkeypatch):
    from modvertex import suites
    from modvertex.report import CheckReport

    def broken(p, seed=0, extra_random=0):
        rep = CheckReport("broken")
        rep.fail("forced")
        return [rep]

    monkeypatch.setattr(suites, "job_lucas", broken)
    buf = io.StringIO()
    status, report = run(SuiteConfig(suite="lucas", p=(2,)), stream=buf)
    assert status == 1 and not report["passed"]
    assert buf.getvalue().startswith("FAIL")


def test_parse_kappa():
    assert parse_kappa("kc", 5) == 3
    assert parse_kappa("7", 5) == 2
    assert repr(parse_kappa("formal", 3)) == "k"


def test_console_script_entry_point():
    out = subprocess.run([sys.executable, "-m", "modvertex.cli", "--suite", "restricted",
                          "--p", "2", "--mode-bound", "1"], capture_output=True, text=True)
    assert out.returncode == 0
    assert "overall" in out.stdout
