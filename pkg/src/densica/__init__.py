"""Sequential density classification over an intermediate alphabet.

A single left-to-right head, encoded entirely in cell states, removes
one of each base value per trip around the configuration until only the
majority value remains, then floods it.  The package bundles the ring
and grid engines, a brute-force counting oracle, an exhaustive
verification harness, and byte-stable trace renderers.
"""

from .alphabet import (
    BaseSymbol,
    Counter,
    ExtendedSymbol,
    Triplet,
    enumerate_alphabet,
    flip_counter,
    format_symbol,
    is_valid,
    parse_symbol,
)
from .engine1d import (
    Cursor,
    EventKind,
    OutcomeKind,
    PhaseEvent,
    RingConfiguration,
    RunOutcome,
    RunResult,
    advance,
    partial,
    run,
    run_string,
    step_cell,
    sweep,
)
from .multidim import (
    CuboidConfiguration,
    MemoryMode,
    apply_local_d,
    neighbors,
    parse_grid,
    run_d,
    scan_order,
    select_active_memory,
)
from .oracle import DensityVerdict, majority
from .rule1d import TIE, RuleCase, apply_local, classify_case
from .trace import Trace, emit_events, emit_records, render_panels, render_spacetime
from .verifier import (
    RangeReport,
    Shard,
    VerificationReport,
    VerifyOptions,
    check_properties,
    compare_modes_d,
    verify_exhaustive,
    verify_exhaustive_d,
    verify_shard,
)

__version__ = "0.1.0"
