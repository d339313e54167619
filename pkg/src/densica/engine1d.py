"""Sequential in-place updates of a cyclic configuration.

Cells are updated left to right; each rewrite is immediately visible to
the next cell in the same sweep, so one sweep equals one application of
the global map.  ``partial`` exposes prefixes of a sweep (k full sweeps
followed by i single-cell updates) for instrumentation and tests.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .alphabet import (
    BaseSymbol,
    ExtendedSymbol,
    base,
    format_row,
    is_valid,
    parse_row,
)
from .rule1d import TIE, RuleCase, classify_and_apply
from .trace import Trace, TraceRecord

# Phase count never exceeds half the ring plus one, and each phase costs
# about one sweep; the slack covers kickstart, wrap-around and convergence.
SWEEP_BUDGET_SLACK = 4


def default_max_sweeps(n_cells: int) -> int:
    return n_cells + SWEEP_BUDGET_SLACK


@dataclass
class RingConfiguration:
    """Cyclic array of symbols; the left neighbour of cell 0 is cell n-1."""

    cells: list[ExtendedSymbol]
    alphabet_size: int = 2

    @classmethod
    def from_string(cls, text: str, alphabet_size: int = 2) -> "RingConfiguration":
        """Build from a digit string, e.g. ``"0001010"``."""
        cells: list[ExtendedSymbol] = []
        for i, ch in enumerate(text.strip()):
            if not ch.isdigit() or int(ch) >= alphabet_size:
                raise ValueError(
                    f"bad cell {ch!r} at position {i}: expected a digit below {alphabet_size}"
                )
            cells.append(base(int(ch)))
        if not cells:
            raise ValueError("configuration must have at least one cell")
        return cls(cells, alphabet_size)

    @classmethod
    def from_values(cls, values, alphabet_size: int = 2) -> "RingConfiguration":
        return cls([base(v) for v in values], alphabet_size)

    @classmethod
    def from_row(cls, text: str, alphabet_size: int = 2) -> "RingConfiguration":
        """Build from the compact space-separated notation (any symbols)."""
        return cls(list(parse_row(text, alphabet_size)), alphabet_size)

    def __len__(self) -> int:
        return len(self.cells)

    def __getitem__(self, i: int) -> ExtendedSymbol:
        return self.cells[i]

    def copy(self) -> "RingConfiguration":
        return RingConfiguration(list(self.cells), self.alphabet_size)

    def to_text(self) -> str:
        return format_row(self.cells)

    def is_uniform_base(self) -> bool:
        first = self.cells[0]
        if type(first) is not BaseSymbol:
            return False
        return all(c is first or c == first for c in self.cells)

    def all_base(self) -> bool:
        return all(type(c) is BaseSymbol for c in self.cells)

    def validate(self) -> None:
        for i, sym in enumerate(self.cells):
            if not is_valid(sym, self.alphabet_size):
                raise ValueError(f"cell {i} holds invalid symbol {sym!r}")


@dataclass(frozen=True, slots=True)
class Cursor:
    """Position in the update sequence: sweeps done, next cell to update."""

    sweeps_done: int = 0
    next_cell: int = 0

    def advanced(self, n_cells: int) -> "Cursor":
        if self.next_cell + 1 == n_cells:
            return Cursor(self.sweeps_done + 1, 0)
        return Cursor(self.sweeps_done, self.next_cell + 1)


class EventKind(enum.Enum):
    KICKSTART = "KICKSTART"
    SWAP_RESET = "SWAP_RESET"
    SWAP_CONVERGE = "SWAP_CONVERGE"
    TIE = "TIE"


_EVENT_FOR_CASE = {
    RuleCase.KICKSTART: EventKind.KICKSTART,
    RuleCase.SWAP_RESET: EventKind.SWAP_RESET,
    RuleCase.SWAP_CONVERGE: EventKind.SWAP_CONVERGE,
    RuleCase.SWAP_TIE: EventKind.TIE,
}


@dataclass(frozen=True, slots=True)
class PhaseEvent:
    """A phase boundary: kickstart, swap, or the balanced-input tie."""

    kind: EventKind
    sweep: int
    cell: int | tuple[int, ...]
    detail: ExtendedSymbol | None = None


class OutcomeKind(enum.Enum):
    CLASSIFIED = "CLASSIFIED"
    TIE = "TIE"
    BUDGET_EXCEEDED = "BUDGET_EXCEEDED"


@dataclass(frozen=True, slots=True)
class RunOutcome:
    kind: OutcomeKind
    value: int | None
    sweeps_used: int
    propagation_phases: int

    def describe(self) -> str:
        head = self.kind.value if self.value is None else f"{self.kind.value} {self.value}"
        return f"{head}, sweeps={self.sweeps_used}, phases={self.propagation_phases}"


@dataclass
class RunResult:
    outcome: RunOutcome
    events: list[PhaseEvent] = field(default_factory=list)
    trace: Trace | None = None


def step_cell(
    config: RingConfiguration, i: int, *, sweep: int = 0
) -> tuple[RingConfiguration, RuleCase, PhaseEvent | None]:
    """Update cell ``i`` in place from its left neighbour.

    A tie leaves the cell untouched and surfaces as a TIE event; callers
    running to an outcome stop there.
    """
    cells = config.cells
    n = len(cells)
    if not 0 <= i < n:
        raise ValueError(f"cell index {i} out of range for n={n}")
    left = cells[i - 1] if i else cells[n - 1]
    case, result = classify_and_apply(left, cells[i], config.alphabet_size)
    event = None
    if result is TIE:
        event = PhaseEvent(EventKind.TIE, sweep, i)
    else:
        kind = _EVENT_FOR_CASE.get(case)
        if kind is not None:
            detail = result if kind is EventKind.SWAP_CONVERGE else None
            event = PhaseEvent(kind, sweep, i, detail)
        cells[i] = result
    return config, case, event


def advance(
    config: RingConfiguration, cursor: Cursor
) -> tuple[Cursor, RuleCase, PhaseEvent | None]:
    """Apply one update at the cursor and move it forward.

    Stepping a fresh cursor n times equals one sweep; sweeps_done counts
    completed passes.
    """
    _, case, event = step_cell(config, cursor.next_cell, sweep=cursor.sweeps_done + 1)
    return cursor.advanced(len(config.cells)), case, event


def sweep(
    config: RingConfiguration, *, sweep_index: int = 0
) -> tuple[RingConfiguration, list[PhaseEvent]]:
    """One full left-to-right pass; equals one application of the map.

    Ties do not stop a bare sweep: the affected cell keeps its value and
    the pass continues deterministically.
    """
    events = []
    for i in range(len(config.cells)):
        _, _, event = step_cell(config, i, sweep=sweep_index)
        if event is not None:
            events.append(event)
    return config, events


def partial(config: RingConfiguration, sweeps: int, cells: int) -> RingConfiguration:
    """State after ``sweeps`` full passes plus ``cells`` single updates."""
    if sweeps < 0:
        raise ValueError("sweep count must be non-negative")
    if not 0 <= cells <= len(config.cells):
        raise ValueError(f"cell count {cells} out of range for n={len(config.cells)}")
    work = config.copy()
    for k in range(sweeps):
        sweep(work, sweep_index=k + 1)
    for i in range(cells):
        step_cell(work, i, sweep=sweeps + 1)
    return work


def run(
    config: RingConfiguration,
    max_sweeps: int | None = None,
    *,
    capture_trace: bool = False,
    debug_validate: bool = False,
) -> RunResult:
    """Sweep until the ring is uniform over a base value, a tie fires, or
    the sweep budget runs out.

    The input must contain base symbols only.  Phases count the kickstart
    plus every memory-resetting swap.  ``debug_validate`` re-checks every
    written symbol against the alphabet (slow; for verification runs).
    """
    if not config.all_base():
        raise ValueError("initial configuration must contain base symbols only")
    config.validate()
    n = len(config.cells)
    if max_sweeps is None:
        max_sweeps = default_max_sweeps(n)
    if max_sweeps < 1:
        raise ValueError("max_sweeps must be at least 1")

    work = config.copy()
    trace = (
        Trace((n,), config.alphabet_size, tuple(work.cells)) if capture_trace else None
    )
    events: list[PhaseEvent] = []
    phases = 0
    cells = work.cells
    k = config.alphabet_size

    for sweep_no in range(1, max_sweeps + 1):
        for i in range(n):
            before = cells[i]
            _, case, event = step_cell(work, i, sweep=sweep_no)
            if debug_validate and not is_valid(cells[i], k):
                raise AssertionError(
                    f"rule produced invalid symbol {cells[i]!r} at sweep {sweep_no}, cell {i}"
                )
            if trace is not None:
                trace.records.append(
                    TraceRecord(sweep_no, i, case, before, cells[i])
                )
            if event is not None:
                events.append(event)
                if event.kind is EventKind.TIE:
                    if trace is not None:
                        trace.rows.append(tuple(cells))
                        trace.tie = True
                    outcome = RunOutcome(OutcomeKind.TIE, None, sweep_no, phases)
                    return RunResult(outcome, events, trace)
                if event.kind in (EventKind.KICKSTART, EventKind.SWAP_RESET):
                    phases += 1
        if trace is not None:
            trace.rows.append(tuple(cells))
        first = cells[0]
        if type(first) is BaseSymbol and work.is_uniform_base():
            outcome = RunOutcome(
                OutcomeKind.CLASSIFIED, first.value, sweep_no, phases
            )
            return RunResult(outcome, events, trace)

    outcome = RunOutcome(OutcomeKind.BUDGET_EXCEEDED, None, max_sweeps, phases)
    return RunResult(outcome, events, trace)


def run_string(
    text: str,
    alphabet_size: int = 2,
    max_sweeps: int | None = None,
    *,
    capture_trace: bool = False,
) -> RunResult:
    """Convenience wrapper: run a digit-string configuration."""
    config = RingConfiguration.from_string(text, alphabet_size)
    return run(config, max_sweeps, capture_trace=capture_trace)
