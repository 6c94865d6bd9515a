import json
import subprocess
import sys

import pytest

from tdoquant import cli, suites


def run_json(*argv):
    code, report = cli.run([*argv, "--format", "json"])
    return code, report


def checks_by_id(report):
    return {c["id"]: c for c in report["checks"]}


def test_hochschild_example_passes(capsys):
    code, report = run_json("verify", "hochschild", "--vars", "1", "--order", "2", "--arity", "3", "--seed", "42")
    assert code == 0
    assert report["summary"]["fail"] == 0
    d2 = [c for c in report["checks"] if c["id"].startswith("d-squared-zero")]
    assert len(d2) == 4 and all(c["status"] == "pass" and c["data"]["samples"] >= 200 for c in d2)


def test_twisted_derham_example_reports_stable_top_dimension(capsys):
    code, report = run_json("cohomology", "twisted-derham", "--f", "x^3+y^3", "--degree-cap", "12")
    assert code == 0
    top = checks_by_id(report)["twisted-derham[top-vs-milnor]"]
    assert top["data"]["dims"][-1] == 4
    assert top["data"]["stable"][-1] is True


def test_main_theorem_example_has_two_dimensional_h0(capsys):
    code, report = run_json("verify", "main-theorem", "--vars", "1", "--order", "1", "--arity", "2",
                            "--bar-length", "2", "--weight", "0")
    assert code == 0
    dims = checks_by_id(report)["window-dimensions"]["data"]
    assert dims["h0"] == 2 and dims["weyl_window"] == 2


def test_report_schema_and_canonical_rationals(capsys):
    _, report = run_json("oracle", "weyl-window", "--vars", "1", "--order", "1", "--weight", "0")
    assert report["schema"] == 1
    assert report["tool"]["name"] == "tdoquant"
    assert set(report["summary"]) == {"pass", "fail", "provisional"}
    assert cli.canonical({"a": cli.Fraction(3, 6), 1: (cli.Fraction(4, 2),)}) == {"a": "1/2", "1": ["2"]}


@pytest.mark.parametrize("argv", [
    ["cohomology", "twisted-derham", "--f", "x^3+*y"],
    ["verify", "cup", "--vars", "2", "--twist", "x^2*dq"],
    ["cohomology", "koszul"],
    ["verify", "hochschild", "--seed", "-1"],
])
def test_malformed_input_exits_2(argv, capsys):
    code, report = cli.run(argv)
    assert code == 2 and report is None
    assert "input error" in capsys.readouterr().err


def test_parse_error_names_the_column(capsys):
    cli.run(["cohomology", "twisted-derham", "--f", "x^3+*y"])
    assert "column 5" in capsys.readouterr().err


def test_failed_check_exits_1(monkeypatch, capsys):
    bad = suites.CheckRecord("forced", "fail", {"witness": "x*dx"})
    monkeypatch.setattr(cli, "dispatch", lambda cfg: [bad])
    code, report = cli.run(["oracle", "jacobian", "--f", "x^2"])
    assert code == 1
    assert report["checks"][0]["data"]["witness"] == "x*dx"
    assert "FAIL" in capsys.readouterr().out


def test_provisional_only_exits_0_with_warning(monkeypatch, capsys):
    monkeypatch.setattr(cli, "dispatch", lambda cfg: [suites.CheckRecord("maybe", "provisional", {})])
    code, _ = cli.run(["oracle", "jacobian", "--f", "x^2"])
    assert code == 0
    assert "provisional" in capsys.readouterr().err


def test_out_writes_file_instead_of_stdout(tmp_path, capsys):
    target = tmp_path / "r.json"
    code, _ = cli.run(["oracle", "jacobian", "--f", "x^3+y^3", "--format", "json", "--out", str(target)])
    assert code == 0
    assert capsys.readouterr().out == ""
    data = json.loads(target.read_text())
    assert checks_by_id(data)["jacobian-ring-dim"]["data"]["dim"] == 4


def test_vars_inferred_from_potential(capsys):
    _, report = run_json("oracle", "jacobian", "--f", "x^2+y^2+z^2")
    assert report["config"]["vars"] == 3


@pytest.mark.parametrize("argv", [
    ["verify", "braces", "--vars", "1", "--seed", "7"],
    ["verify", "cup", "--vars", "1", "--twist", "x^2*dx", "--seed", "3"],
])
def test_rerun_is_byte_identical(argv, tmp_path):
    outs = []
    for k in range(2):
        target = tmp_path / f"{k}.json"
        assert cli.main([*argv, "--format", "json", "--out", str(target)]) == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]


def test_module_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "tdoquant", "oracle", "jacobian", "--f", "x^3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-1].startswith("summary: ")
