"""Symbol model for density classification over an intermediate alphabet.

Inputs and final fixed points use a base alphabet of ``alphabet_size``
integer values.  While the classifier is working, cells additionally hold
head-state triplets with three layers:

* a two-valued cycle counter (rendered ``o`` / ``*``) that alternates once
  per pass of the implicit head, so a cell can tell whether its neighbour
  belongs to the current pass or the previous one;
* a tape layer holding either a base value or the removed-marker ``X``
  for positions whose original value has been harvested into memory;
* a memory layer: the subset of base values harvested so far in the
  current pass, stored as a bit-mask (hence the cap of 32 base values).

A triplet whose tape holds a base value must have that value in its
memory; triplets violating this never occur and are excluded from the
alphabet.  For the binary alphabet this leaves 16 triplets out of the 24
raw combinations.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

MIN_ALPHABET_SIZE = 2
MAX_ALPHABET_SIZE = 32  # memory bit-masks must fit one machine word

# Largest alphabet the textual notation can express with single digits.
MAX_NOTATION_SIZE = 10


class Counter(enum.Enum):
    """Two-valued cycle counter layer; ODD renders ``o``, EVEN ``*``."""

    ODD = "o"
    EVEN = "*"

    @property
    def flipped(self) -> "Counter":
        return Counter.EVEN if self is Counter.ODD else Counter.ODD


def flip_counter(counter: Counter) -> Counter:
    """Swap ODD and EVEN (an involution)."""
    return counter.flipped


@dataclass(frozen=True, slots=True)
class BaseSymbol:
    """A plain input-alphabet value in ``0 .. alphabet_size - 1``."""

    value: int


@dataclass(frozen=True, slots=True)
class Triplet:
    """Intermediate head-state symbol (counter, tape, memory).

    ``tape`` is a base value, or ``None`` for the removed-marker X.
    ``memory`` is a bit-mask over base values.
    """

    counter: Counter
    tape: int | None
    memory: int


# Cells hold one or the other; the union is the working alphabet.
ExtendedSymbol = BaseSymbol | Triplet


@lru_cache(maxsize=None)
def base(value: int) -> BaseSymbol:
    """Interned BaseSymbol constructor."""
    return BaseSymbol(value)


@lru_cache(maxsize=None)
def triplet(counter: Counter, tape: int | None, memory: int) -> Triplet:
    """Interned Triplet constructor."""
    return Triplet(counter, tape, memory)


def memory_from_values(values) -> int:
    """Bit-mask for an iterable of base values."""
    mask = 0
    for v in values:
        mask |= 1 << v
    return mask


def memory_values(mask: int) -> tuple[int, ...]:
    """Ascending base values present in a memory bit-mask."""
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def check_alphabet_size(alphabet_size: int) -> None:
    if not MIN_ALPHABET_SIZE <= alphabet_size <= MAX_ALPHABET_SIZE:
        raise ValueError(
            f"alphabet_size must be in "
            f"[{MIN_ALPHABET_SIZE}, {MAX_ALPHABET_SIZE}], got {alphabet_size}"
        )


def is_valid(sym: ExtendedSymbol, alphabet_size: int) -> bool:
    """Total membership predicate for the working alphabet.

    True iff ``sym`` is a base value below ``alphabet_size``, or a triplet
    whose components are in range and whose tape value (if any) is present
    in its memory.
    """
    check_alphabet_size(alphabet_size)
    if type(sym) is BaseSymbol:
        return 0 <= sym.value < alphabet_size
    if type(sym) is Triplet:
        if not isinstance(sym.counter, Counter):
            return False
        if not 0 <= sym.memory < (1 << alphabet_size):
            return False
        if sym.tape is None:
            return True
        if not 0 <= sym.tape < alphabet_size:
            return False
        return bool(sym.memory >> sym.tape & 1)
    return False


def alphabet_len(alphabet_size: int) -> int:
    """Number of symbols: k base values plus the valid triplets."""
    k = alphabet_size
    return k + 2 * (k * (1 << (k - 1)) + (1 << k))


def enumerate_alphabet(alphabet_size: int) -> list[ExtendedSymbol]:
    """All valid symbols in canonical order.

    Base values first, then triplets ordered by counter (ODD before EVEN),
    tape (base values ascending, then X), memory mask ascending.  The order
    is stable and matches :func:`symbol_index`.
    """
    check_alphabet_size(alphabet_size)
    k = alphabet_size
    symbols: list[ExtendedSymbol] = [base(v) for v in range(k)]
    for counter in (Counter.ODD, Counter.EVEN):
        for tape in range(k):
            for mask in range(1 << k):
                if mask >> tape & 1:
                    symbols.append(triplet(counter, tape, mask))
        for mask in range(1 << k):
            symbols.append(triplet(counter, None, mask))
    return symbols


def symbol_index(sym: ExtendedSymbol, alphabet_size: int) -> int:
    """Dense index of ``sym`` in the canonical enumeration order."""
    k = alphabet_size
    if type(sym) is BaseSymbol:
        return sym.value
    half = 1 << (k - 1)
    per_counter = k * half + (1 << k)
    block = 0 if sym.counter is Counter.ODD else per_counter
    if sym.tape is None:
        within = k * half + sym.memory
    else:
        t = sym.tape
        # Rank of the mask among masks containing bit t: drop bit t and
        # close the gap.  Monotone in the mask, so ranks stay ascending.
        low = sym.memory & ((1 << t) - 1)
        high = sym.memory >> (t + 1)
        within = t * half + (low | high << t)
    return k + block + within


def symbol_from_index(index: int, alphabet_size: int) -> ExtendedSymbol:
    """Inverse of :func:`symbol_index`."""
    k = alphabet_size
    if index < 0 or index >= alphabet_len(k):
        raise ValueError(f"symbol index {index} out of range for k={k}")
    if index < k:
        return base(index)
    index -= k
    half = 1 << (k - 1)
    per_counter = k * half + (1 << k)
    counter = Counter.ODD if index < per_counter else Counter.EVEN
    index %= per_counter
    if index >= k * half:
        return triplet(counter, None, index - k * half)
    t, w = divmod(index, half)
    low = w & ((1 << t) - 1)
    high = w >> t
    return triplet(counter, t, low | 1 << t | high << (t + 1))


# --- textual notation -------------------------------------------------
#
# Base symbol: its digit.  Triplet: (c|t|M) with c in {o, *}, t a digit
# or X, M the ascending digits of the memory or `-` when empty.
# Example: (o|X|01).  Invalid triplets are never emitted.

def format_symbol(sym: ExtendedSymbol) -> str:
    if type(sym) is BaseSymbol:
        _check_notation_value(sym.value)
        return str(sym.value)
    if sym.tape is None:
        tape = "X"
    else:
        _check_notation_value(sym.tape)
        tape = str(sym.tape)
    digits = "".join(str(v) for v in memory_values(sym.memory))
    _check_notation_value(sym.memory.bit_length() - 1)
    return f"({sym.counter.value}|{tape}|{digits or '-'})"


def parse_symbol(text: str, alphabet_size: int) -> ExtendedSymbol:
    """Parse the compact notation back into a symbol; strict."""
    check_alphabet_size(alphabet_size)
    text = text.strip()
    if not text.startswith("("):
        sym = base(_parse_digit(text, alphabet_size))
        return sym
    if not text.endswith(")"):
        raise ValueError(f"unterminated symbol {text!r}")
    parts = text[1:-1].split("|")
    if len(parts) != 3:
        raise ValueError(f"expected (c|t|M), got {text!r}")
    c_txt, t_txt, m_txt = parts
    try:
        counter = Counter(c_txt)
    except ValueError:
        raise ValueError(f"bad counter {c_txt!r} in {text!r}") from None
    tape = None if t_txt == "X" else _parse_digit(t_txt, alphabet_size)
    if m_txt == "-":
        memory = 0
    else:
        memory = 0
        for ch in m_txt:
            memory |= 1 << _parse_digit(ch, alphabet_size)
        if m_txt != "".join(str(v) for v in memory_values(memory)):
            raise ValueError(f"memory digits must be ascending and unique in {text!r}")
    sym = triplet(counter, tape, memory)
    if not is_valid(sym, alphabet_size):
        raise ValueError(f"{text!r} is not a valid symbol")
    return sym


def format_row(symbols) -> str:
    """One configuration row: symbols joined by single spaces."""
    return " ".join(format_symbol(s) for s in symbols)


def parse_row(text: str, alphabet_size: int) -> tuple[ExtendedSymbol, ...]:
    return tuple(parse_symbol(tok, alphabet_size) for tok in text.split())


def _parse_digit(text: str, alphabet_size: int) -> int:
    if len(text) != 1 or not text.isdigit():
        raise ValueError(f"expected a digit, got {text!r}")
    value = int(text)
    if value >= alphabet_size:
        raise ValueError(f"digit {value} out of range for alphabet of size {alphabet_size}")
    return value


def _check_notation_value(value: int) -> None:
    if value >= MAX_NOTATION_SIZE:
        raise ValueError(
            f"textual notation supports base values below {MAX_NOTATION_SIZE}"
        )
