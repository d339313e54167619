"""Ring engine: worked traces, partial updates, outcomes, invariants."""

import pytest
from hypothesis import given, settings, strategies as st

from densica.alphabet import Counter, base, memory_from_values, triplet
from densica.engine1d import (
    Cursor,
    EventKind,
    OutcomeKind,
    RingConfiguration,
    advance,
    partial,
    run,
    run_string,
    step_cell,
    sweep,
)
from densica.oracle import majority
from densica.rule1d import RuleCase
from densica.trace import render_spacetime
from densica.verifier import config_string

from conftest import read_golden

O, E = Counter.ODD, Counter.EVEN


def t(counter, tape, *mem):
    return triplet(counter, tape, memory_from_values(mem))


def test_worked_ring7_trace_and_outcome():
    result = run_string("0001010", capture_trace=True)
    assert render_spacetime(result.trace) == read_golden("worked_ring7.txt")
    assert result.outcome.kind is OutcomeKind.CLASSIFIED
    assert result.outcome.value == 0
    assert result.outcome.sweeps_used == 5
    assert result.outcome.propagation_phases == 3
    kinds = [(e.kind, e.sweep, e.cell) for e in result.events]
    assert kinds == [
        (EventKind.KICKSTART, 1, 3),
        (EventKind.SWAP_RESET, 2, 3),
        (EventKind.SWAP_RESET, 3, 3),
        (EventKind.SWAP_CONVERGE, 4, 3),
    ]
    converge = result.events[-1]
    assert converge.detail == base(0)


def test_worked_ring13_trace_and_outcome():
    result = run_string("0001011011010", capture_trace=True)
    assert render_spacetime(result.trace) == read_golden("worked_ring13.txt")
    assert result.outcome.kind is OutcomeKind.CLASSIFIED
    assert result.outcome.value == 0
    assert result.outcome.propagation_phases == 7
    assert result.trace.rows[-1] == tuple([base(0)] * 13)
    assert len(result.trace.rows) == 9  # ten rendered rows with the initial one


def test_step_cell_kickstart():
    config = RingConfiguration.from_string("0001010")
    _, case, event = step_cell(config, 3, sweep=1)
    assert case is RuleCase.KICKSTART
    assert config.cells[3] == t(O, None, 1)
    assert event.kind is EventKind.KICKSTART


def test_step_cell_on_uniform_ring_is_identity():
    config = RingConfiguration.from_string("0000000")
    for i in range(7):
        _, case, event = step_cell(config, i)
        assert case is RuleCase.FIXED_POINT
        assert event is None
    assert config.to_text() == "0 0 0 0 0 0 0"


def test_step_cell_swap_after_second_sweep():
    config = partial(RingConfiguration.from_string("0001010"), 2, 3)
    assert config.cells[3] == t(E, None)


def test_sweep_matches_worked_row():
    config = RingConfiguration.from_string("0001010")
    sweep(config, sweep_index=1)
    assert config.to_text() == "0 0 0 (o|X|1) (o|X|01) (o|1|01) (o|0|01)"


def test_sweep_on_uniform_ring_quiet():
    config = RingConfiguration.from_string("1111")
    _, events = sweep(config)
    assert config.to_text() == "1 1 1 1"
    assert events == []


def test_balanced_pair_swaps_then_ties():
    config = partial(RingConfiguration.from_string("01"), 2, 0)
    assert config.to_text() == "(*|X|-) (*|X|-)"
    result = run_string("01", capture_trace=True)
    assert result.outcome.kind is OutcomeKind.TIE
    assert result.outcome.sweeps_used == 3
    assert [e.kind for e in result.events] == [
        EventKind.KICKSTART,
        EventKind.SWAP_RESET,
        EventKind.TIE,
    ]
    assert result.events[1].sweep == 2
    assert result.trace.tie


def test_cursor_advance_walks_a_sweep():
    stepped = RingConfiguration.from_string("0001010")
    cursor = Cursor()
    events = []
    for _ in range(len(stepped)):
        cursor, _, event = advance(stepped, cursor)
        if event is not None:
            events.append(event)
    assert cursor == Cursor(sweeps_done=1, next_cell=0)
    swept = RingConfiguration.from_string("0001010")
    _, sweep_events = sweep(swept, sweep_index=1)
    assert stepped.cells == swept.cells
    assert events == sweep_events


def test_partial_identity_and_sweep_equivalence():
    config = RingConfiguration.from_string("0001010")
    assert partial(config, 0, 0).cells == config.cells
    row2 = partial(config, 1, 0)
    assert row2.to_text() == "0 0 0 (o|X|1) (o|X|01) (o|1|01) (o|0|01)"


@given(st.integers(0, 127), st.integers(0, 3))
@settings(max_examples=60, deadline=None)
def test_partial_full_sweep_equals_next_sweep_start(idx, k):
    config = RingConfiguration.from_string(config_string(idx, 7))
    n = len(config)
    assert partial(config, k, n).cells == partial(config, k + 1, 0).cells


def test_single_cell_ring():
    result = run_string("1")
    assert result.outcome.kind is OutcomeKind.CLASSIFIED
    assert result.outcome.value == 1
    assert result.outcome.sweeps_used == 1
    assert result.outcome.propagation_phases == 0


def test_uniform_trace_has_confirmation_row():
    result = run_string("000", capture_trace=True)
    assert render_spacetime(result.trace) == "0 0 0\n0 0 0\n"


def test_run_rejects_intermediate_input():
    config = RingConfiguration([base(0), t(O, None)], 2)
    with pytest.raises(ValueError):
        run(config)


def test_run_rejects_bad_budget():
    with pytest.raises(ValueError):
        run(RingConfiguration.from_string("0101"), max_sweeps=0)


def test_from_string_rejects_bad_digits():
    with pytest.raises(ValueError):
        RingConfiguration.from_string("01a")
    with pytest.raises(ValueError):
        RingConfiguration.from_string("012")
    with pytest.raises(ValueError):
        RingConfiguration.from_string("")
    RingConfiguration.from_string("012", alphabet_size=3)


def test_debug_validation_passes_on_real_runs():
    config = RingConfiguration.from_string("0001011011010")
    result = run(config, debug_validate=True)
    assert result.outcome.kind is OutcomeKind.CLASSIFIED


def test_budget_exceeded_surfaces():
    result = run_string("0001010", max_sweeps=2)
    assert result.outcome.kind is OutcomeKind.BUDGET_EXCEEDED
    assert result.outcome.sweeps_used == 2


@pytest.mark.parametrize("n", range(1, 11))
def test_exhaustive_outcomes_match_oracle(n):
    """Every defined-density ring classifies to its majority value."""
    kick_ok = True
    for idx in range(1 << n):
        text = config_string(idx, n)
        values = [int(c) for c in text]
        verdict = majority(values, 2)
        result = run_string(text, capture_trace=True)
        kicks = sum(1 for e in result.events if e.kind is EventKind.KICKSTART)
        if len(set(values)) == 1:
            kick_ok &= kicks == 0
        else:
            kick_ok &= kicks == 1
        if verdict.is_tie:
            continue
        assert result.outcome.kind is OutcomeKind.CLASSIFIED, text
        assert result.outcome.value == verdict.majority, text
        assert result.trace.rows[-1] == tuple([base(verdict.majority)] * n)
        expected_phases = min(verdict.counts) + 1 if kicks else 0
        assert result.outcome.propagation_phases == expected_phases, text
    assert kick_ok


@given(st.lists(st.integers(0, 2), min_size=1, max_size=9))
@settings(max_examples=120, deadline=None)
def test_ternary_rings_classify_to_majority(values):
    verdict = majority(values, 3)
    result = run(RingConfiguration.from_values(values, 3), capture_trace=True)
    if verdict.is_tie:
        return
    assert result.outcome.kind is OutcomeKind.CLASSIFIED
    assert result.outcome.value == verdict.majority
    assert result.trace.rows[-1] == tuple([base(verdict.majority)] * len(values))
