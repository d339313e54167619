"""Command-line interface: outputs, files, exit codes."""

import json

import pytest

from densica.cli import main

from conftest import read_golden


def test_run_prints_outcome(capsys):
    assert main(["run", "0001010"]) == 0
    out = capsys.readouterr().out
    assert out == "CLASSIFIED 0, sweeps=5, phases=3\n"


def test_run_trace_prints_the_spacetime_table(capsys):
    assert main(["run", "0001010", "--trace"]) == 0
    out = capsys.readouterr().out
    assert out == read_golden("worked_ring7.txt") + "CLASSIFIED 0, sweeps=5, phases=3\n"


def test_run_tie(capsys):
    assert main(["run", "01"]) == 0
    assert capsys.readouterr().out == "TIE, sweeps=3, phases=2\n"


def test_run_budget_exit_code(capsys):
    assert main(["run", "0001010", "--max-sweeps", "2"]) == 1
    assert "BUDGET_EXCEEDED" in capsys.readouterr().out


def test_run_records(tmp_path, capsys):
    path = tmp_path / "records.jsonl"
    assert main(["run", "0001010", "--records", str(path)]) == 0
    capsys.readouterr()
    lines = path.read_text().splitlines()
    assert len(lines) == 35
    assert json.loads(lines[0])["case"] == "fixed-point"


def test_run_events_stream(capsys):
    assert main(["run", "01", "--events", "-"]) == 0
    lines = capsys.readouterr().out.splitlines()
    records = [json.loads(line) for line in lines[:-1]]
    assert [r["kind"] for r in records] == ["KICKSTART", "SWAP_RESET", "TIE", "TIE"]
    assert records[-1]["type"] == "outcome"
    assert lines[-1] == "TIE, sweeps=3, phases=2"


def test_run_rejects_bad_input(capsys):
    assert main(["run", "01020"]) == 2
    assert "error:" in capsys.readouterr().err


def test_run_d_from_file(tmp_path, capsys):
    grid = tmp_path / "worked.grid"
    grid.write_text(read_golden("worked_grid3x3.grid"))
    assert main(["run-d", "--file", str(grid)]) == 0
    assert capsys.readouterr().out == "CLASSIFIED 2, sweeps=6, phases=4\n"


def test_run_d_trace_matches_golden(tmp_path, capsys):
    grid = tmp_path / "worked.grid"
    grid.write_text(read_golden("worked_grid3x3.grid"))
    assert main(["run-d", "--file", str(grid), "--trace"]) == 0
    out = capsys.readouterr().out
    assert out == read_golden("worked_grid3x3.txt") + "CLASSIFIED 2, sweeps=6, phases=4\n"


def test_run_d_inline_rows(capsys):
    assert main(["run-d", "--rows", "010/122/220", "--alphabet-size", "3"]) == 0
    assert capsys.readouterr().out == "CLASSIFIED 2, sweeps=6, phases=4\n"


def test_run_d_missing_file(capsys):
    assert main(["run-d", "--file", "/nonexistent.grid"]) == 2
    assert "error:" in capsys.readouterr().err


def test_verify_single_length(capsys):
    assert main(["verify", "--n", "2"]) == 0
    out = capsys.readouterr().out
    assert "checked             4" in out
    assert "ties seen           2" in out


def test_verify_range_with_report(tmp_path, capsys):
    path = tmp_path / "report.json"
    assert main(["verify", "--n", "1..6", "--report", str(path)]) == 0
    capsys.readouterr()
    payload = json.loads(path.read_text())
    assert payload["total"]["checked"] == sum(2**n for n in range(1, 7))
    assert payload["total"]["classified_wrong"] == 0


def test_verify_sampled(capsys):
    assert main(["verify", "--n", "40", "--sample", "200", "--seed", "5"]) == 0
    out = capsys.readouterr().out
    assert "sampled count=200 seed=5" in out


def test_verify_d_with_report(tmp_path, capsys):
    path = tmp_path / "report.json"
    assert main(["verify-d", "--dims", "2x2", "--report", str(path)]) == 0
    capsys.readouterr()
    payload = json.loads(path.read_text())
    assert payload["checked"] == 16
    assert payload["ties_seen"] == 6


def test_verify_d_compare_mode(tmp_path, capsys):
    path = tmp_path / "cmp.json"
    assert main(["verify-d", "--dims", "2x2", "--mode", "compare", "--report", str(path)]) == 0
    out = capsys.readouterr().out
    assert "outcome discrepancies" in out
    payload = json.loads(path.read_text())
    assert payload["checked"] == 16


def test_props_command(capsys):
    assert main(["props", "--n", "6", "--samples", "20:50", "--seed", "3"]) == 0
    out = capsys.readouterr().out
    assert "property suites (seed=3)" in out
    assert "violations=0" in out


def test_alphabet_command(capsys):
    assert main(["alphabet", "--k", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 19
    assert lines[-1] == "total 18 symbols (16 intermediate)"
    assert lines[2].endswith("(o|0|0)")


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["verify"])  # missing --n
    assert exc.value.code == 2


def test_unknown_command_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
