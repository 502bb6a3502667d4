"""Batch front-end: commands, exit codes, determinism."""

import json

import pytest

from qgroupoid.algebra_core import FiniteAlgebra, algebra_to_json
from qgroupoid.cli import main
from qgroupoid.examples import groupoid_to_json, pair_groupoid
from qgroupoid.exact_linear import LinearMap


@pytest.fixture(scope="module")
def p2_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "p2.json"
    path.write_text(json.dumps(groupoid_to_json(pair_groupoid([1, 2]))))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_verify_function_algebroid(p2_file, capsys):
    code, out = run(capsys, "verify", "--example", "function-algebroid",
                    "--groupoid", p2_file)
    assert code == 0
    lines = [json.loads(l) for l in out.strip().splitlines()]
    summary = lines[-1]["summary"]
    assert summary["status"] == "pass"
    axiom_lines = [l for l in lines if "axiom" in l]
    assert len(axiom_lines) >= 60
    assert all(l["status"] == "pass" for l in axiom_lines)
    assert all("eq" in l for l in axiom_lines)


def test_measure_noninvariant_weight_fails_with_hint(p2_file, capsys):
    code, out = run(capsys, "measure", "--example", "convolution",
                    "--groupoid", p2_file, "--mu", "1,4")
    assert code == 1
    lines = [json.loads(l) for l in out.strip().splitlines()]
    assert lines[0]["eq"] == "base-weight-counital"
    assert lines[-1]["summary"]["hint"] == "apply groupoid_rn modifier"


def test_modify_then_measure_pipeline(p2_file, capsys, tmp_path):
    code, out = run(capsys, "modify", "--example", "convolution",
                    "--groupoid", p2_file, "--mu", "1,4",
                    "--recipe", "groupoid_rn")
    assert code == 0
    lines = [json.loads(l) for l in out.strip().splitlines()]
    artifact = lines[-1]["summary"]["artifact"]
    artifact_path = tmp_path / "artifact.json"
    artifact_path.write_text(json.dumps(artifact))
    code, out = run(capsys, "measure", "--artifact", str(artifact_path))
    assert code == 0
    summary = json.loads(out.strip().splitlines()[-1])["summary"]
    assert summary["status"] == "pass"
    assert summary["delta_trivial"] is True
    assert summary["sigma_is_derivative_multiplier"] is True


def test_determinism(p2_file, capsys):
    _, out1 = run(capsys, "verify", "--example", "convolution",
                  "--groupoid", p2_file)
    _, out2 = run(capsys, "verify", "--example", "convolution",
                  "--groupoid", p2_file)
    assert out1 == out2


def test_build_algebra_json(tmp_path, capsys):
    a = FiniteAlgebra.pointwise(["u", "v"], involution=LinearMap.identity(2))
    path = tmp_path / "algebra.json"
    path.write_text(json.dumps(algebra_to_json(a)))
    code, out = run(capsys, "build", "--algebra", str(path))
    assert code == 0
    assert json.loads(out.strip().splitlines()[-1])["summary"]["dim"] == 2


def test_schema_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{")
    code = main(["build", "--algebra", str(path)])
    capsys.readouterr()
    assert code == 2
    assert main(["build", "--algebra", str(tmp_path / "missing.json")]) == 2
    capsys.readouterr()


def test_integrals_command(p2_file, capsys):
    code, out = run(capsys, "integrals", "--example", "function-algebroid",
                    "--groupoid", p2_file)
    assert code == 0
    summary = json.loads(out.strip().splitlines()[-1])["summary"]
    assert summary["left_space_dim"] == 2
    assert summary["right_space_dim"] == 2


def test_dual_command(p2_file, capsys):
    code, out = run(capsys, "dual", "--example", "function-algebroid",
                    "--groupoid", p2_file, "--mu", "1,4")
    assert code == 0
    summary = json.loads(out.strip().splitlines()[-1])["summary"]
    assert summary["dual_algebra"]["dim"] == 4


def test_report_command(p2_file, capsys, tmp_path):
    code, out = run(capsys, "verify", "--example", "convolution",
                    "--groupoid", p2_file)
    path = tmp_path / "report.jsonl"
    path.write_text(out)
    code, out = run(capsys, "report", str(path))
    assert code == 0
    assert "0 failures" in out


def test_pair_groupoid_flag(capsys):
    code, out = run(capsys, "verify", "--example", "function-algebroid",
                    "--pair-groupoid", "1,2")
    assert code == 0


def test_missing_sqrt_hint(p2_file, capsys):
    code, out = run(capsys, "measure", "--example", "convolution",
                    "--groupoid", p2_file, "--mu", "1,2",
                    "--recipe", "groupoid_rn")
    assert code == 1
    summary = json.loads(out.strip().splitlines()[-1])["summary"]
    assert "--sqrt 2" in summary["hint"]
    code, out = run(capsys, "measure", "--example", "convolution",
                    "--groupoid", p2_file, "--mu", "1,2",
                    "--recipe", "groupoid_rn", "--sqrt", "2")
    assert code == 0


def test_reports_with_scalar_witnesses_serialize():
    import json as _json

    from qgroupoid.exact_linear import sc
    from qgroupoid.report import Report

    rep = Report()
    rep.check(False, "demo", "demo-eq", {"lhs": [(0, sc("3/4"))], "rhs": []})
    lines = rep.to_json_lines()
    assert _json.loads(lines[0])["status"] == "fail"


def test_artifact_out_pipe_form(p2_file, capsys, tmp_path, monkeypatch):
    # modify emits the artifact alone; measure reads it from stdin
    import io

    code, out = run(capsys, "modify", "--example", "convolution",
                    "--groupoid", p2_file, "--mu", "1,4",
                    "--recipe", "groupoid_rn", "--artifact-out", "-")
    assert code == 0
    artifact = json.loads(out)
    assert artifact["kind"] == "measured-pipeline"
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(artifact)))
    code, out = run(capsys, "measure", "--artifact", "-")
    assert code == 0
    assert json.loads(out.strip().splitlines()[-1])["summary"]["delta_trivial"] is True
