"""Local rule for the one-dimensional sequential density classifier.

The rule reads the current cell and its left neighbour and rewrites the
current cell.  Dispatch is total over ordered pairs of valid symbols and
splits into the case families below:

* ``FIXED_POINT``      two equal base values; nothing happens.
* ``KICKSTART``        two differing base values; the head materialises,
                       removing the current value into a fresh memory.
* ``PROP_FIRST_*``     head meets a cell still holding a base value:
                       harvest it (``TAKE``) or copy it along (``KEEP``).
* ``PROP_*``           head meets a cell from the previous pass (opposite
                       counter): harvest its tape value or copy it.
* ``SWAP_*``           head meets a cell from its own pass: one full loop
                       is complete.  Memory with two or more values is
                       discarded and the counter flips (``RESET``); a
                       singleton memory starts convergence on that value
                       (``CONVERGE``); an empty memory means the input was
                       perfectly balanced (``TIE``).
* ``CONVERGENCE``      base value left of an intermediate cell: the value
                       floods rightwards until the ring is uniform.
"""

from __future__ import annotations

import enum
from functools import lru_cache

from .alphabet import (
    BaseSymbol,
    Counter,
    ExtendedSymbol,
    alphabet_len,
    base,
    enumerate_alphabet,
    is_valid,
    symbol_index,
    triplet,
)


class RuleCase(enum.Enum):
    FIXED_POINT = "fixed-point"
    KICKSTART = "kickstart"
    PROP_FIRST_TAKE = "prop-first-take"
    PROP_FIRST_KEEP = "prop-first-keep"
    PROP_TAKE = "prop-take"
    PROP_KEEP = "prop-keep"
    SWAP_RESET = "swap-reset"
    SWAP_CONVERGE = "swap-converge"
    SWAP_TIE = "swap-tie"
    CONVERGENCE = "convergence"
    # Reserved so tests can assert the dispatch above is exhaustive.
    UNREACHABLE = "unreachable"


class TieResult:
    """Marker for the undefined balanced-input swap; not a symbol."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "TIE"


TIE = TieResult()

LocalResult = ExtendedSymbol | TieResult


def _require_valid(left: ExtendedSymbol, current: ExtendedSymbol, alphabet_size: int) -> None:
    if not is_valid(left, alphabet_size):
        raise ValueError(f"invalid left symbol {left!r} for alphabet size {alphabet_size}")
    if not is_valid(current, alphabet_size):
        raise ValueError(f"invalid current symbol {current!r} for alphabet size {alphabet_size}")


def classify_case(left: ExtendedSymbol, current: ExtendedSymbol, alphabet_size: int) -> RuleCase:
    """Name the unique rule case matching an ordered symbol pair."""
    _require_valid(left, current, alphabet_size)
    left_base = type(left) is BaseSymbol
    cur_base = type(current) is BaseSymbol
    if left_base and cur_base:
        return RuleCase.FIXED_POINT if left.value == current.value else RuleCase.KICKSTART
    if not left_base and cur_base:
        if left.memory >> current.value & 1:
            return RuleCase.PROP_FIRST_KEEP
        return RuleCase.PROP_FIRST_TAKE
    if not left_base and not cur_base:
        if left.counter is not current.counter:
            tape = current.tape
            if tape is not None and not left.memory >> tape & 1:
                return RuleCase.PROP_TAKE
            return RuleCase.PROP_KEEP
        size = left.memory.bit_count()
        if size >= 2:
            return RuleCase.SWAP_RESET
        if size == 1:
            return RuleCase.SWAP_CONVERGE
        return RuleCase.SWAP_TIE
    return RuleCase.CONVERGENCE


def classify_and_apply(
    left: ExtendedSymbol, current: ExtendedSymbol, alphabet_size: int
) -> tuple[RuleCase, LocalResult]:
    """Dispatch once, returning both the case name and the rewrite."""
    case = classify_case(left, current, alphabet_size)
    if case is RuleCase.FIXED_POINT:
        return case, current
    if case is RuleCase.KICKSTART:
        return case, triplet(Counter.ODD, None, 1 << current.value)
    if case is RuleCase.PROP_FIRST_TAKE:
        return case, triplet(left.counter, None, left.memory | 1 << current.value)
    if case is RuleCase.PROP_FIRST_KEEP:
        return case, triplet(left.counter, current.value, left.memory)
    if case is RuleCase.PROP_TAKE:
        return case, triplet(left.counter, None, left.memory | 1 << current.tape)
    if case is RuleCase.PROP_KEEP:
        return case, triplet(left.counter, current.tape, left.memory)
    if case is RuleCase.SWAP_RESET:
        return case, triplet(left.counter.flipped, None, 0)
    if case is RuleCase.SWAP_CONVERGE:
        return case, base(left.memory.bit_length() - 1)
    if case is RuleCase.SWAP_TIE:
        return case, TIE
    # CONVERGENCE
    return case, base(left.value)


def apply_local(left: ExtendedSymbol, current: ExtendedSymbol, alphabet_size: int) -> LocalResult:
    """Rewrite the current cell given its left neighbour.

    Returns the new symbol, or the TIE marker for the balanced-input swap.
    """
    return classify_and_apply(left, current, alphabet_size)[1]


# --- dense rule table --------------------------------------------------
#
# The engine and the exhaustive verifier drive the rule through a flat
# lookup table over symbol indices; the table is built once per alphabet
# size from apply_local, so both routes share one definition of the rule.

EVT_NONE = 0
EVT_KICKSTART = 1
EVT_SWAP_RESET = 2
EVT_SWAP_CONVERGE = 3
EVT_TIE = 4

_CASE_EVENTS = {
    RuleCase.KICKSTART: EVT_KICKSTART,
    RuleCase.SWAP_RESET: EVT_SWAP_RESET,
    RuleCase.SWAP_CONVERGE: EVT_SWAP_CONVERGE,
    RuleCase.SWAP_TIE: EVT_TIE,
}

CASE_LIST = list(RuleCase)
CASE_TO_CODE = {case: i for i, case in enumerate(CASE_LIST)}

# Largest alphabet for which the quadratic table is built eagerly; the
# object-level rule stays available beyond it.
TABLE_SIZE_CAP = 600


class RuleTable:
    """Flat (left, current) -> (result, case, event) lookup.

    ``result[p]`` holds the symbol index of the rewrite, or -1 for the tie
    marker; ``p = left_index * size + current_index``.
    """

    def __init__(self, alphabet_size: int):
        self.alphabet_size = alphabet_size
        symbols = enumerate_alphabet(alphabet_size)
        size = len(symbols)
        self.size = size
        result = [0] * (size * size)
        case = [0] * (size * size)
        event = [0] * (size * size)
        for li, left in enumerate(symbols):
            row = li * size
            for ci, current in enumerate(symbols):
                rc = classify_case(left, current, alphabet_size)
                out = apply_local(left, current, alphabet_size)
                p = row + ci
                result[p] = -1 if out is TIE else symbol_index(out, alphabet_size)
                case[p] = CASE_TO_CODE[rc]
                event[p] = _CASE_EVENTS.get(rc, EVT_NONE)
        self.result = result
        self.case = case
        self.event = event

    def as_arrays(self):
        """(result, event) as int64 numpy arrays for the jit kernels."""
        import numpy as np

        return (
            np.asarray(self.result, dtype=np.int64),
            np.asarray(self.event, dtype=np.int64),
        )


@lru_cache(maxsize=8)
def rule_table(alphabet_size: int) -> RuleTable:
    if alphabet_len(alphabet_size) > TABLE_SIZE_CAP:
        raise ValueError(
            f"rule table too large for alphabet size {alphabet_size}; "
            "use apply_local directly"
        )
    return RuleTable(alphabet_size)
