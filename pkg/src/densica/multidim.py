"""Density classification on d-dimensional toroidal grids.

The scan visits coordinates with the first axis varying fastest.  Each
cell reads d neighbours plus itself: the j-th neighbour decrements the
first j coordinates by one (with wraparound), a corner chain that
guarantees the previously updated cell is always in view.  The update
reconstructs the head's memory from the intermediate neighbours and then
applies the one-dimensional rewrite as if that reconstruction were the
left-hand cell.

Two reconstruction policies are implemented.  ``COUNTER_FILTERED``
(default) only considers neighbours whose counter differs from the
current cell's, which mirrors the one-dimensional "most recently
written" semantics.  ``PAPER_LITERAL`` takes the inclusion-largest
memory over all intermediate neighbours; it can pick up a stale
previous-pass memory right after a swap, so it is kept for side-by-side
measurement rather than production use.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

from .alphabet import (
    BaseSymbol,
    Counter,
    ExtendedSymbol,
    Triplet,
    base,
    format_symbol,
    is_valid,
    triplet,
)
from .engine1d import (
    EventKind,
    OutcomeKind,
    PhaseEvent,
    RunOutcome,
    RunResult,
    default_max_sweeps,
)
from .rule1d import TIE, LocalResult, RuleCase
from .trace import Trace, TraceRecord


class MemoryMode(enum.Enum):
    COUNTER_FILTERED = "counter-filtered"
    PAPER_LITERAL = "literal"


class RuleFlawError(RuntimeError):
    """The update hit a state the rule is not defined on.

    These states are believed unreachable from base-only inputs; raising
    instead of guessing makes the verifier a bug detector.
    """


class IncomparableMemoriesError(RuleFlawError):
    """No inclusion-largest memory exists among the candidates."""


class InconsistentConvergenceError(RuleFlawError):
    """Base neighbours disagree while flooding the surviving value."""


class MixedCountersError(RuleFlawError):
    """Candidates for a base cell carry more than one counter."""


def scan_order(dims: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Update sequence: all coordinates, first axis fastest."""
    _check_dims(dims)
    order = []
    total = 1
    for d in dims:
        total *= d
    for flat in range(total):
        order.append(_coords_of(flat, dims))
    return order


def neighbors(coord: tuple[int, ...], dims: tuple[int, ...]) -> list[tuple[int, ...]]:
    """The d corner-chain neighbours of ``coord`` followed by itself."""
    _check_dims(dims)
    d = len(dims)
    if len(coord) != d or any(not 0 <= c < n for c, n in zip(coord, dims)):
        raise ValueError(f"coordinate {coord} out of range for dims {dims}")
    out = []
    for j in range(1, d + 1):
        out.append(
            tuple(
                (c - 1) % n if axis < j else c
                for axis, (c, n) in enumerate(zip(coord, dims))
            )
        )
    out.append(tuple(coord))
    return out


def _check_dims(dims) -> None:
    if not dims or any(n < 1 for n in dims):
        raise ValueError(f"dims must be positive, got {dims}")


def _coords_of(flat: int, dims: tuple[int, ...]) -> tuple[int, ...]:
    coords = []
    for n in dims:
        flat, c = divmod(flat, n)
        coords.append(c)
    return tuple(coords)


def _flat_of(coord: tuple[int, ...], dims: tuple[int, ...]) -> int:
    flat = 0
    for c, n in zip(reversed(coord), reversed(dims)):
        flat = flat * n + c
    return flat


@lru_cache(maxsize=64)
def _neighbor_table(dims: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """Per flat index: flat indices of the d neighbours (self excluded)."""
    table = []
    total = 1
    for d in dims:
        total *= d
    for flat in range(total):
        coord = _coords_of(flat, dims)
        nbrs = neighbors(coord, dims)[:-1]
        table.append(tuple(_flat_of(c, dims) for c in nbrs))
    return tuple(table)


@dataclass
class CuboidConfiguration:
    """Toroidal grid of symbols, stored flat in scan order."""

    dims: tuple[int, ...]
    cells: list[ExtendedSymbol]
    alphabet_size: int = 2

    def __post_init__(self):
        _check_dims(self.dims)
        total = 1
        for d in self.dims:
            total *= d
        if len(self.cells) != total:
            raise ValueError(
                f"expected {total} cells for dims {self.dims}, got {len(self.cells)}"
            )

    @classmethod
    def from_values(cls, dims, values, alphabet_size: int = 2) -> "CuboidConfiguration":
        return cls(tuple(dims), [base(v) for v in values], alphabet_size)

    @classmethod
    def from_rows(cls, rows, alphabet_size: int = 2) -> "CuboidConfiguration":
        """2-D helper: rows of digit strings, top row first."""
        cells = []
        width = len(rows[0])
        for row in rows:
            if len(row) != width:
                raise ValueError("rows must have equal length")
            cells.extend(int(ch) for ch in row)
        return cls.from_values((width, len(rows)), cells, alphabet_size)

    def __len__(self) -> int:
        return len(self.cells)

    def at(self, coord: tuple[int, ...]) -> ExtendedSymbol:
        return self.cells[_flat_of(coord, self.dims)]

    def copy(self) -> "CuboidConfiguration":
        return CuboidConfiguration(self.dims, list(self.cells), self.alphabet_size)

    def all_base(self) -> bool:
        return all(type(c) is BaseSymbol for c in self.cells)

    def base_values(self) -> list[int]:
        return [c.value for c in self.cells]

    def is_uniform_base(self) -> bool:
        first = self.cells[0]
        if type(first) is not BaseSymbol:
            return False
        return all(c == first for c in self.cells)

    def validate(self) -> None:
        for i, sym in enumerate(self.cells):
            if not is_valid(sym, self.alphabet_size):
                raise ValueError(
                    f"cell {_coords_of(i, self.dims)} holds invalid symbol {sym!r}"
                )


@dataclass(frozen=True, slots=True)
class ActiveMemorySelection:
    """Reconstructed head state: the counter and memory to act as 'left'."""

    counter: Counter
    memory: int
    mode: MemoryMode


def _max_memory(candidates: list[Triplet]) -> Triplet:
    """Candidate whose memory contains every other; first such wins."""
    combined = 0
    for c in candidates:
        combined |= c.memory
    for c in candidates:
        if c.memory == combined:
            return c
    mems = [format_symbol(c) for c in candidates]
    raise IncomparableMemoriesError(
        f"no inclusion-largest memory among {mems}"
    )


def select_active_memory(
    self_sym: ExtendedSymbol,
    neighbor_syms,
    mode: MemoryMode = MemoryMode.COUNTER_FILTERED,
) -> ActiveMemorySelection | None:
    """Reconstruct the head state from intermediate neighbours.

    Returns None when no candidate neighbour exists.  Raises
    :class:`IncomparableMemoriesError` when the candidates admit no
    inclusion-largest memory, and (in filtered mode, for a base cell)
    :class:`MixedCountersError` when candidates disagree on the counter.
    """
    inter = [s for s in neighbor_syms if type(s) is Triplet]
    if mode is MemoryMode.PAPER_LITERAL:
        candidates = inter
    elif type(self_sym) is Triplet:
        candidates = [s for s in inter if s.counter is not self_sym.counter]
    else:
        candidates = inter
        counters = {s.counter for s in candidates}
        if len(counters) > 1:
            raise MixedCountersError(
                f"base cell sees candidates with counters {sorted(c.value for c in counters)}"
            )
    if not candidates:
        return None
    best = _max_memory(candidates)
    return ActiveMemorySelection(best.counter, best.memory, mode)


def _step_d(
    self_sym: ExtendedSymbol,
    neighbor_syms: list[ExtendedSymbol],
    alphabet_size: int,
    mode: MemoryMode,
) -> tuple[RuleCase, LocalResult]:
    """Dispatch one grid update; see the module docstring for the cases."""
    self_base = type(self_sym) is BaseSymbol
    if self_base:
        uniform = True
        any_inter = False
        for s in neighbor_syms:
            if type(s) is Triplet:
                any_inter = True
                break
            if s.value != self_sym.value:
                uniform = False
        if not any_inter:
            if uniform:
                return RuleCase.FIXED_POINT, self_sym
            return RuleCase.KICKSTART, triplet(Counter.ODD, None, 1 << self_sym.value)
        sel = select_active_memory(self_sym, neighbor_syms, mode)
        b = self_sym.value
        if sel.memory >> b & 1:
            return RuleCase.PROP_FIRST_KEEP, triplet(sel.counter, b, sel.memory)
        return RuleCase.PROP_FIRST_TAKE, triplet(sel.counter, None, sel.memory | 1 << b)

    # Intermediate cell: converge on any base neighbour.
    base_value = -1
    all_inter = True
    for s in neighbor_syms:
        if type(s) is BaseSymbol:
            all_inter = False
            if base_value < 0:
                base_value = s.value
            elif s.value != base_value:
                raise InconsistentConvergenceError(
                    f"base neighbours disagree: {base_value} vs {s.value}"
                )
    if not all_inter:
        return RuleCase.CONVERGENCE, base(base_value)

    if all(s.counter is self_sym.counter for s in neighbor_syms):
        # One full loop completed: swap on the largest neighbour memory.
        best = _max_memory(neighbor_syms)
        size = best.memory.bit_count()
        if size >= 2:
            return RuleCase.SWAP_RESET, triplet(self_sym.counter.flipped, None, 0)
        if size == 1:
            return RuleCase.SWAP_CONVERGE, base(best.memory.bit_length() - 1)
        return RuleCase.SWAP_TIE, TIE

    sel = select_active_memory(self_sym, neighbor_syms, mode)
    tape = self_sym.tape
    if tape is not None and not sel.memory >> tape & 1:
        return RuleCase.PROP_TAKE, triplet(sel.counter, None, sel.memory | 1 << tape)
    return RuleCase.PROP_KEEP, triplet(sel.counter, tape, sel.memory)


def apply_local_d(
    self_sym: ExtendedSymbol,
    neighbor_syms,
    alphabet_size: int,
    mode: MemoryMode = MemoryMode.COUNTER_FILTERED,
) -> LocalResult:
    """Grid-rule rewrite of a cell given its neighbours (self excluded)."""
    if not is_valid(self_sym, alphabet_size):
        raise ValueError(f"invalid symbol {self_sym!r}")
    syms = list(neighbor_syms)
    for s in syms:
        if not is_valid(s, alphabet_size):
            raise ValueError(f"invalid neighbour symbol {s!r}")
    return _step_d(self_sym, syms, alphabet_size, mode)[1]


_EVENT_FOR_CASE = {
    RuleCase.KICKSTART: EventKind.KICKSTART,
    RuleCase.SWAP_RESET: EventKind.SWAP_RESET,
    RuleCase.SWAP_CONVERGE: EventKind.SWAP_CONVERGE,
    RuleCase.SWAP_TIE: EventKind.TIE,
}


def run_d(
    config: CuboidConfiguration,
    max_sweeps: int | None = None,
    mode: MemoryMode = MemoryMode.COUNTER_FILTERED,
    *,
    capture_trace: bool = False,
    debug_validate: bool = False,
) -> RunResult:
    """Sweep the scan order until uniform, tied, or out of budget.

    Semantics mirror the one-dimensional run; for ``dims == (n,)`` the
    two produce identical sweep-by-sweep states.  ``debug_validate``
    re-checks every written symbol against the alphabet.
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
    cells = work.cells
    nbr_table = _neighbor_table(config.dims)
    k = config.alphabet_size
    trace = (
        Trace(config.dims, k, tuple(cells)) if capture_trace else None
    )
    events: list[PhaseEvent] = []
    phases = 0
    dims = config.dims

    for sweep_no in range(1, max_sweeps + 1):
        for q in range(n):
            before = cells[q]
            nsyms = [cells[j] for j in nbr_table[q]]
            case, result = _step_d(before, nsyms, k, mode)
            kind = _EVENT_FOR_CASE.get(case)
            if result is TIE:
                coord = _coords_of(q, dims)
                events.append(PhaseEvent(EventKind.TIE, sweep_no, coord))
                if trace is not None:
                    trace.records.append(TraceRecord(sweep_no, coord, case, before, before))
                    trace.rows.append(tuple(cells))
                    trace.tie = True
                outcome = RunOutcome(OutcomeKind.TIE, None, sweep_no, phases)
                return RunResult(outcome, events, trace)
            if debug_validate and not is_valid(result, k):
                raise AssertionError(
                    f"rule produced invalid symbol {result!r} at sweep {sweep_no}, "
                    f"cell {_coords_of(q, dims)}"
                )
            cells[q] = result
            if trace is not None:
                trace.records.append(
                    TraceRecord(sweep_no, _coords_of(q, dims), case, before, result)
                )
            if kind is not None:
                coord = _coords_of(q, dims)
                detail = result if kind is EventKind.SWAP_CONVERGE else None
                events.append(PhaseEvent(kind, sweep_no, coord, detail))
                if kind is not EventKind.SWAP_CONVERGE:
                    phases += 1
        if trace is not None:
            trace.rows.append(tuple(cells))
        first = cells[0]
        if type(first) is BaseSymbol and work.is_uniform_base():
            outcome = RunOutcome(OutcomeKind.CLASSIFIED, first.value, sweep_no, phases)
            return RunResult(outcome, events, trace)

    outcome = RunOutcome(OutcomeKind.BUDGET_EXCEEDED, None, max_sweeps, phases)
    return RunResult(outcome, events, trace)


# --- grid files --------------------------------------------------------
#
#   dims: 3 x 3
#   alphabet: 3
#   010
#   122
#   220
#
# Rows appear in scan order (top row of each slice first); blank lines
# may separate slices of three and more dimensions.

class GridParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def parse_grid(text: str) -> CuboidConfiguration:
    """Read a grid file; errors name the offending line and column."""
    lines = text.splitlines()
    header: list[tuple[int, str]] = []
    rows: list[tuple[int, str]] = []
    for no, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        if len(header) < 2:
            header.append((no, stripped))
        else:
            rows.append((no, raw))
    if len(header) < 2:
        raise GridParseError("expected 'dims:' and 'alphabet:' header lines", len(lines) + 1)

    no, dims_line = header[0]
    if not dims_line.startswith("dims:"):
        raise GridParseError("expected 'dims: n1 x n2 [x n3 ...]'", no)
    try:
        dims = tuple(int(part.strip()) for part in dims_line[5:].split("x"))
    except ValueError:
        raise GridParseError(f"bad dims {dims_line[5:].strip()!r}", no) from None
    if not dims or any(d < 1 for d in dims):
        raise GridParseError(f"dims must be positive, got {dims}", no)

    no, alpha_line = header[1]
    if not alpha_line.startswith("alphabet:"):
        raise GridParseError("expected 'alphabet: k'", no)
    try:
        alphabet_size = int(alpha_line[9:].strip())
    except ValueError:
        raise GridParseError(f"bad alphabet size {alpha_line[9:].strip()!r}", no) from None

    n1 = dims[0]
    expect_rows = 1
    for d in dims[1:]:
        expect_rows *= d
    if len(dims) == 1:
        expect_rows = 1

    values: list[int] = []
    for no, raw in rows:
        row_vals = []
        for col, ch in enumerate(raw, start=1):
            if ch.isspace():
                continue
            if not ch.isdigit():
                raise GridParseError(f"expected a digit, got {ch!r}", no, col)
            v = int(ch)
            if v >= alphabet_size:
                raise GridParseError(
                    f"digit {v} out of range for alphabet of size {alphabet_size}", no, col
                )
            row_vals.append(v)
        if len(row_vals) != n1:
            raise GridParseError(
                f"expected {n1} cells in row, got {len(row_vals)}", no
            )
        values.extend(row_vals)

    if len(rows) != expect_rows:
        raise GridParseError(
            f"expected {expect_rows} rows for dims {dims}, got {len(rows)}",
            rows[-1][0] if rows else len(lines) + 1,
        )
    return CuboidConfiguration.from_values(dims, values, alphabet_size)


def format_grid(config: CuboidConfiguration) -> str:
    """Write a base-only configuration in the grid file format."""
    if not config.all_base():
        raise ValueError("grid files hold initial configurations (base values only)")
    dims = config.dims
    n1 = dims[0]
    slice_rows = dims[1] if len(dims) > 1 else 1
    lines = [
        "dims: " + " x ".join(str(d) for d in dims),
        f"alphabet: {config.alphabet_size}",
    ]
    values = config.base_values()
    total_rows = len(values) // n1
    for r in range(total_rows):
        if r and len(dims) > 2 and r % slice_rows == 0:
            lines.append("")
        lines.append("".join(str(v) for v in values[r * n1 : (r + 1) * n1]))
    return "\n".join(lines) + "\n"
