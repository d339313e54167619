"""Trace capture, record streams, and rendering stability."""

import json

import pytest

from densica.alphabet import base
from densica.engine1d import run_string
from densica.multidim import CuboidConfiguration, run_d
from densica.trace import (
    emit_events,
    emit_records,
    render_panels,
    render_spacetime,
    replay_records,
)

from conftest import read_golden


def worked_run():
    return run_string("0001010", capture_trace=True)


def test_record_count_is_one_per_update():
    result = worked_run()
    n = 7
    assert len(result.trace.records) == result.outcome.sweeps_used * n


def test_records_have_stable_fields():
    result = worked_run()
    lines = emit_records(result.trace).splitlines()
    first = json.loads(lines[0])
    assert list(first) == ["sweep", "cell", "case", "before", "after"]
    assert first == {
        "sweep": 1,
        "cell": 0,
        "case": "fixed-point",
        "before": "0",
        "after": "0",
    }
    kick = json.loads(lines[3])
    assert kick["case"] == "kickstart"
    assert kick["after"] == "(o|X|1)"


def test_event_records_of_the_worked_run():
    result = worked_run()
    cases = [r.case.value for r in result.trace.records]
    assert cases.count("kickstart") == 1
    assert cases.count("swap-reset") == 2
    assert cases.count("swap-converge") == 1


def test_replay_reaches_the_final_row():
    result = worked_run()
    replayed = replay_records(
        result.trace.initial, emit_records(result.trace), (7,), 2
    )
    assert tuple(replayed) == result.trace.rows[-1]


def test_replay_reaches_the_final_grid():
    config = CuboidConfiguration.from_rows(["010", "122", "220"], 3)
    result = run_d(config, capture_trace=True)
    replayed = replay_records(
        result.trace.initial, emit_records(result.trace), (3, 3), 3
    )
    assert tuple(replayed) == result.trace.rows[-1]
    assert tuple(replayed) == tuple([base(2)] * 9)


def test_renders_are_deterministic():
    a = render_spacetime(worked_run().trace)
    b = render_spacetime(worked_run().trace)
    assert a == b == read_golden("worked_ring7.txt")


def test_spacetime_rejects_grids():
    config = CuboidConfiguration.from_rows(["01", "10"], 2)
    result = run_d(config, capture_trace=True)
    with pytest.raises(ValueError):
        render_spacetime(result.trace)


def test_tie_panel_is_marked():
    config = CuboidConfiguration.from_rows(["01", "10"], 2)
    result = run_d(config, capture_trace=True)
    text = render_panels(result.trace)
    assert text.rstrip().splitlines()[-3].endswith("TIE")


def test_event_stream_ends_with_the_outcome():
    result = worked_run()
    lines = emit_events(result).splitlines()
    records = [json.loads(line) for line in lines]
    assert [r["kind"] for r in records] == [
        "KICKSTART",
        "SWAP_RESET",
        "SWAP_RESET",
        "SWAP_CONVERGE",
        "CLASSIFIED",
    ]
    assert records[3]["detail"] == "0"
    assert records[-1] == {
        "type": "outcome",
        "kind": "CLASSIFIED",
        "value": 0,
        "sweeps": 5,
        "phases": 3,
    }


def test_event_stream_without_trace_capture():
    result = run_string("0001010")
    assert result.trace is None
    assert emit_events(result).splitlines()[-1].startswith('{"type": "outcome"')


def test_three_dimensional_panels_fall_back_to_records():
    config = CuboidConfiguration.from_values((2, 2, 2), [0, 1, 1, 0, 1, 1, 0, 0], 2)
    result = run_d(config, capture_trace=True)
    text = render_panels(result.trace)
    assert text == emit_records(result.trace)
    assert json.loads(text.splitlines()[0])["cell"] == [0, 0, 0]
