"""Execution traces and their renderings.

A trace captures a run move by move: one record per cell update plus a
snapshot of the configuration after every sweep.  Renderings are plain
text and byte-stable across runs so they can be pinned as golden files:

* space-time table for rings (one row per sweep, initial row first);
* panel sequence for two-dimensional grids (one panel per sweep);
* a line-delimited record stream for everything else and for replay.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .alphabet import ExtendedSymbol, format_row, format_symbol, parse_symbol
from .rule1d import RuleCase


@dataclass(frozen=True, slots=True)
class TraceRecord:
    """One cell update: where, which rule case, and the rewrite."""

    sweep: int
    cell: int | tuple[int, ...]
    case: RuleCase
    before: ExtendedSymbol
    after: ExtendedSymbol


@dataclass
class Trace:
    """Full record of a run; opt-in because snapshots are memory-heavy."""

    dims: tuple[int, ...]
    alphabet_size: int
    initial: tuple[ExtendedSymbol, ...]
    rows: list[tuple[ExtendedSymbol, ...]] = field(default_factory=list)
    records: list[TraceRecord] = field(default_factory=list)
    tie: bool = False

    @property
    def n_cells(self) -> int:
        total = 1
        for d in self.dims:
            total *= d
        return total


def render_spacetime(trace: Trace) -> str:
    """Space-time table for a ring: initial row, then one row per sweep."""
    if len(trace.dims) != 1:
        raise ValueError("space-time rendering requires a one-dimensional trace")
    lines = [format_row(trace.initial)]
    lines.extend(format_row(row) for row in trace.rows)
    if trace.tie:
        lines.append("TIE")
    return "\n".join(lines) + "\n"


def _panel_lines(cells, dims) -> list[str]:
    n1, n2 = dims
    return [
        format_row(cells[r * n1 : (r + 1) * n1])
        for r in range(n2)
    ]


def render_panels(trace: Trace) -> str:
    """Panel sequence for a 2-D grid; other dimensions fall back to records.

    Panels are numbered from 1 (the initial configuration); a run that
    halts on a balanced input marks its final panel with ``TIE``.
    """
    if len(trace.dims) != 2:
        return emit_records(trace)
    parts = []
    snapshots = [trace.initial, *trace.rows]
    last = len(snapshots) - 1
    for i, snap in enumerate(snapshots):
        header = f"panel {i + 1}"
        if trace.tie and i == last:
            header += " TIE"
        parts.append("\n".join([header, *_panel_lines(snap, trace.dims)]))
    return "\n\n".join(parts) + "\n"


def emit_records(trace: Trace) -> str:
    """Line-delimited update records with stable field order."""
    lines = []
    for rec in trace.records:
        cell = list(rec.cell) if isinstance(rec.cell, tuple) else rec.cell
        lines.append(
            json.dumps(
                {
                    "sweep": rec.sweep,
                    "cell": cell,
                    "case": rec.case.value,
                    "before": format_symbol(rec.before),
                    "after": format_symbol(rec.after),
                },
                separators=(", ", ": "),
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")


def emit_events(result) -> str:
    """Line-delimited stream of a run's phase events plus its outcome."""
    lines = []
    for event in result.events:
        record = {
            "type": "event",
            "kind": event.kind.value,
            "sweep": event.sweep,
            "cell": list(event.cell) if isinstance(event.cell, tuple) else event.cell,
        }
        if event.detail is not None:
            record["detail"] = format_symbol(event.detail)
        lines.append(json.dumps(record, separators=(", ", ": ")))
    outcome = result.outcome
    lines.append(
        json.dumps(
            {
                "type": "outcome",
                "kind": outcome.kind.value,
                "value": outcome.value,
                "sweeps": outcome.sweeps_used,
                "phases": outcome.propagation_phases,
            },
            separators=(", ", ": "),
        )
    )
    return "\n".join(lines) + "\n"


def replay_records(
    initial: tuple[ExtendedSymbol, ...],
    records_text: str,
    dims: tuple[int, ...],
    alphabet_size: int,
) -> list[ExtendedSymbol]:
    """Apply a record stream's after-symbols on top of an initial state."""
    cells = list(initial)
    strides = [1]
    for d in dims[:-1]:
        strides.append(strides[-1] * d)
    for line in records_text.splitlines():
        if not line.strip():
            continue
        rec = json.loads(line)
        cell = rec["cell"]
        flat = (
            cell
            if isinstance(cell, int)
            else sum(c * s for c, s in zip(cell, strides))
        )
        cells[flat] = parse_symbol(rec["after"], alphabet_size)
    return cells
