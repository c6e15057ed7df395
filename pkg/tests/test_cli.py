import json

import pytest

from linadd.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_inhabitants_bool(capsys):
    code, rep = run_json(capsys, "inhabitants", "bool")
    assert code == 0
    assert rep["verdict"] == "pass"
    assert rep["measurements"]["count"] == 2
    assert len(rep["details"]) == 2


def test_inhabitants_type_literal(capsys):
    code, rep = run_json(capsys, "inhabitants", "forall a. a -o a")
    assert code == 0 and rep["measurements"]["count"] == 1


def test_report_schema(capsys):
    _, rep = run_json(capsys, "inhabitants", "unit")
    assert set(rep) == {"command", "inputs", "measurements", "verdict", "details"}


def test_gen_and_check_round_trip(tmp_path, capsys):
    out = tmp_path / "ladd.lamd"
    code, _ = run(capsys, "gen", "ladd", "-n", "2", "--apply",
                  "--derivation", "-o", str(out))
    assert code == 0
    code, rep = run_json(capsys, "check", str(out))
    assert code == 0 and rep["measurements"]["violations"] == 0


def test_check_reports_failures(tmp_path, capsys):
    bad = tmp_path / "bad.lamd"
    bad.write_text('(rule ax (seq () "x" "1"))\n')
    code, rep = run_json(capsys, "check", str(bad))
    assert code == 1
    assert rep["verdict"] == "fail" and rep["details"]


def test_normalize_term_file(tmp_path, capsys):
    f = tmp_path / "t.lam"
    f.write_text("(\\x. x) (\\y. y)\n")
    code, rep = run_json(capsys, "normalize", str(f), "--trace")
    assert code == 0
    assert rep["measurements"]["steps"] == 1
    assert rep["measurements"]["trace"][0]["kind"] == "beta"


def test_cutelim_pipeline(tmp_path, capsys):
    src = tmp_path / "in.lamd"
    run(capsys, "gen", "ladd", "-n", "1", "--apply", "--derivation",
        "-o", str(src))
    capsys.readouterr()
    code, rep = run_json(capsys, "cutelim", str(src))
    assert code == 0
    assert rep["measurements"]["steps"] > 0
    assert rep["measurements"]["output_size"] < rep["measurements"]["input_size"]


def test_translate_reports_compression(tmp_path, capsys):
    src = tmp_path / "in.lamd"
    run(capsys, "gen", "ladd", "-n", "1", "--base", "bool", "--apply",
        "--derivation", "-o", str(src))
    capsys.readouterr()
    code, rep = run_json(capsys, "translate", str(src))
    assert code == 0
    m = rep["measurements"]
    assert m["translated_derivation_size"] > m["derivation_size"]


def test_suite_blowup(capsys):
    code, rep = run_json(capsys, "suite", "blowup")
    assert code == 0 and rep["verdict"] == "pass"
    assert len(rep["measurements"]["table"]) == 8


def test_suite_cubic(capsys):
    code, rep = run_json(capsys, "suite", "cutelim-cubic")
    assert code == 0 and rep["verdict"] == "pass"


def test_parse_error_exit_code(tmp_path, capsys):
    f = tmp_path / "broken.lam"
    f.write_text("\\x.")
    assert main(["normalize", str(f)]) == 2


def test_missing_file_exit_code():
    assert main(["check", "/nonexistent/q.lamd"]) == 2
