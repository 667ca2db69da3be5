import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from ctsat.cli import main

DATA = Path(__file__).parent.parent / "data"

SOLVE_SCHEMA = {
    "type": "object",
    "required": ["verdict", "witness", "n", "m", "k", "backtracks", "implications"],
    "properties": {
        "verdict": {"enum": ["SAT", "UNSAT"]},
        "witness": {"type": ["string", "null"], "pattern": "^[01*]*$"},
        "n": {"type": "integer", "minimum": 0},
        "m": {"type": "integer", "minimum": 0},
        "k": {"type": "integer", "minimum": 0},
        "backtracks": {"type": "integer", "minimum": 0, "maximum": 1},
        "implications": {"type": "array",
                         "items": {"type": "array", "minItems": 2, "maxItems": 2}},
    },
}

FUZZ_SCHEMA = {
    "type": "object",
    "required": ["total", "agree", "sound", "disagreements"],
    "properties": {
        "total": {"type": "integer"},
        "agree": {"type": "integer"},
        "sound": {"type": "integer"},
        "agreement_rate": {"type": "number", "minimum": 0, "maximum": 1},
        "disagreements": {"type": "array", "items": {
            "type": "object", "required": ["seed", "n", "m", "verdict", "oracle", "counterexample"]}},
        "unsound": {"type": "array"},
    },
}

TRACE_EVENT_SCHEMA = {
    "type": "object",
    "required": ["event"],
    "properties": {"event": {"enum": ["constant", "invert", "imply", "residue", "backtrack",
                                      "contradiction", "star", "verdict"]}},
}

VERIFY_SCHEMA = {
    "type": "array",
    "items": {"type": "object", "required": ["name", "status", "details"],
              "properties": {"status": {"enum": ["PASS", "FAIL", "DEVIATION"]}}},
}


def run(capsys, *args):
    code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_solve_table1_with_perms(capsys):
    code, out, _ = run(capsys, "solve", str(DATA / "table1.cnf"), "--perms", str(DATA / "table2.perms"))
    assert code == 10
    verdict, witness = out.split()
    assert verdict == "SAT" and witness in {"00111011", "10111100"}


def test_solve_json_schema(capsys):
    code, out, _ = run(capsys, "solve", str(DATA / "table1.cnf"), "--json", "--letters")
    assert code == 10
    jsonschema.validate(json.loads(out), SOLVE_SCHEMA)


def test_solve_unsat(capsys):
    code, out, _ = run(capsys, "solve", str(DATA / "unsat3.cnf"), "--json")
    assert code == 20
    data = json.loads(out)
    jsonschema.validate(data, SOLVE_SCHEMA)
    assert data["witness"] is None


def test_solve_trace_lines(capsys):
    code, out, _ = run(capsys, "solve", str(DATA / "table1.cnf"), "--trace", "--letters",
                       "--perms", str(DATA / "table2.perms"))
    assert code == 10
    lines = out.strip().splitlines()
    for line in lines[:-1]:
        jsonschema.validate(json.loads(line), TRACE_EVENT_SCHEMA)
    assert lines[-1].startswith("SAT ")


def test_start_order_flag(capsys, tmp_path):
    code, out, _ = run(capsys, "solve", str(DATA / "intro.cnf"), "--letters", "--start-order", "a=1")
    assert code == 10 and out.split()[1][0] == "1"


def test_missing_file(capsys):
    code, _, err = run(capsys, "solve", "does-not-exist.cnf")
    assert code == 1 and "no such file" in err


def test_bad_dimacs(capsys, tmp_path):
    bad = tmp_path / "bad.cnf"
    bad.write_text("p cnf 3 1\n1 2 0\n")
    code, _, err = run(capsys, "solve", str(bad))
    assert code == 1 and "exactly 3" in err


def test_coverage_error(capsys, tmp_path):
    perms = tmp_path / "p.perms"
    perms.write_text("a,b,c,d,e,f,g,h\n")
    code, _, err = run(capsys, "solve", str(DATA / "table1.cnf"), "--perms", str(perms))
    assert code == 1 and "not compact" in err


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["fuzz", "--count", "many"])
    assert info.value.code == 1


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "--json")
    assert code == 0
    data = json.loads(out)
    jsonschema.validate(data, VERIFY_SCHEMA)
    assert {r["name"] for r in data if r["status"] == "DEVIATION"} == {"table2", "preprocess-example2"}


def test_fuzz_summary(capsys, tmp_path):
    code, out, _ = run(capsys, "fuzz", "--n", "8", "--m", "30", "42", "--count", "30",
                       "--seed", "11", "--out", str(tmp_path))
    assert code == 0
    summary = json.loads(out)
    jsonschema.validate(summary, FUZZ_SCHEMA)
    assert summary["total"] == 30 and summary["unsound"] == []
    for d in summary["disagreements"]:
        assert (tmp_path / f"{d['counterexample']}.cnf").exists()


def test_fuzz_replay_through_oracle_diff(capsys, tmp_path):
    run(capsys, "fuzz", "--n", "8", "--m", "42", "--count", "40", "--seed", "3", "--out", str(tmp_path))
    files = sorted(tmp_path.glob("*.cnf"))
    assert files, "seed chosen so that the batch contains a disagreement"
    for cnf in files:
        stored = json.loads(cnf.with_suffix(".json").read_text())["report"]
        code, out, _ = run(capsys, "oracle", "diff", str(cnf), "--seed", str(stored["seed"]))
        assert code == 0
        replayed = json.loads(out)
        replayed["counterexample"] = stored["counterexample"]
        assert replayed == stored


def test_fuzz_over_limit(capsys):
    code, _, err = run(capsys, "fuzz", "--n", "30", "--count", "1")
    assert code == 1 and "exceeds" in err


def test_oracle_cic(capsys):
    code, out, _ = run(capsys, "oracle", "cic", str(DATA / "table1.cnf"),
                       "--perms", str(DATA / "table2.perms"))
    assert code == 10
    assert json.loads(out)["jss"] == ["00111011", "10111100"]


def test_oracle_cic_limit(capsys):
    code, _, err = run(capsys, "oracle", "cic", str(DATA / "table1.cnf"), "--n-limit", "6")
    assert code == 1 and "exceeds" in err


def test_oracle_brute(capsys):
    code, out, _ = run(capsys, "oracle", "brute", str(DATA / "intro.cnf"))
    assert code == 10 and json.loads(out)["count"] == 22


def test_internal_defect_exit_code(capsys, monkeypatch):
    from ctsat import oracle
    from ctsat.zero_distribution import SolverDefect

    def broken(*args, **kwargs):
        raise SolverDefect("witness 0000 is not a nil-set")
    monkeypatch.setattr(oracle, "pipeline", broken)
    code, _, err = run(capsys, "solve", str(DATA / "intro.cnf"))
    assert code == 2 and "internal defect" in err


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ctsat.cli", "solve", str(DATA / "unsat3.cnf")],
                          capture_output=True, text=True)
    assert proc.returncode == 20 and proc.stdout.strip() == "UNSAT"
