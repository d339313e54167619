"""Symbol model: validity, enumeration, encoding, notation."""

import pytest
from hypothesis import given, strategies as st

from densica.alphabet import (
    Counter,
    alphabet_len,
    base,
    enumerate_alphabet,
    flip_counter,
    format_row,
    format_symbol,
    is_valid,
    memory_from_values,
    memory_values,
    parse_row,
    parse_symbol,
    symbol_from_index,
    symbol_index,
    triplet,
)

O, E = Counter.ODD, Counter.EVEN
B = 0b11  # both binary values


def t(counter, tape, *mem):
    return triplet(counter, tape, memory_from_values(mem))


# The sixteen binary triplets, in canonical order (counter, tape, mask).
BINARY_TRIPLETS = [
    t(O, 0, 0), t(O, 0, 0, 1), t(O, 1, 1), t(O, 1, 0, 1),
    t(O, None), t(O, None, 0), t(O, None, 1), t(O, None, 0, 1),
    t(E, 0, 0), t(E, 0, 0, 1), t(E, 1, 1), t(E, 1, 0, 1),
    t(E, None), t(E, None, 0), t(E, None, 1), t(E, None, 0, 1),
]

# The eight raw combinations whose tape value is missing from memory.
FORBIDDEN_TRIPLETS = [
    t(O, 0), t(O, 0, 1), t(O, 1), t(O, 1, 0),
    t(E, 0), t(E, 0, 1), t(E, 1), t(E, 1, 0),
]


def test_flip_counter_involution():
    assert flip_counter(O) is E
    assert flip_counter(E) is O
    assert flip_counter(flip_counter(O)) is O


def test_validity_examples():
    assert is_valid(t(O, 0, 0), 2)          # tape 0 with 0 in memory
    assert not is_valid(t(O, 0), 2)         # tape 0 with empty memory
    assert is_valid(t(E, None), 2)          # removed marker, empty memory
    assert is_valid(base(1), 2)
    assert not is_valid(base(2), 2)
    assert not is_valid(base(-1), 2)


def test_validity_rejects_out_of_range_components():
    assert not is_valid(triplet(O, 3, 0b1000), 2)   # tape beyond alphabet
    assert not is_valid(triplet(O, None, 0b100), 2)  # memory beyond alphabet
    assert is_valid(triplet(O, 2, 0b100), 3)


def test_binary_alphabet_is_exactly_the_sixteen_triplets():
    symbols = enumerate_alphabet(2)
    assert symbols[:2] == [base(0), base(1)]
    assert symbols[2:] == BINARY_TRIPLETS
    assert len(symbols) == 18


def test_forbidden_triplets_rejected():
    for sym in FORBIDDEN_TRIPLETS:
        assert not is_valid(sym, 2), sym


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_enumeration_matches_cardinality_formula(k):
    symbols = enumerate_alphabet(k)
    assert len(symbols) == alphabet_len(k) == k + 2 * (k * 2 ** (k - 1) + 2**k)
    assert len(set(symbols)) == len(symbols)
    assert all(is_valid(s, k) for s in symbols)


def test_ternary_alphabet_has_43_symbols():
    assert len(enumerate_alphabet(3)) == 43


def test_enumeration_is_stable():
    first = [format_symbol(s) for s in enumerate_alphabet(3)]
    second = [format_symbol(s) for s in enumerate_alphabet(3)]
    assert first == second


def test_size_out_of_range():
    with pytest.raises(ValueError):
        enumerate_alphabet(1)
    with pytest.raises(ValueError):
        enumerate_alphabet(33)


@pytest.mark.parametrize("k", [2, 3, 5])
def test_symbol_index_roundtrip(k):
    for i, sym in enumerate(enumerate_alphabet(k)):
        assert symbol_index(sym, k) == i
        assert symbol_from_index(i, k) == sym
    with pytest.raises(ValueError):
        symbol_from_index(alphabet_len(k), k)


def test_memory_helpers():
    assert memory_from_values([2, 0]) == 0b101
    assert memory_values(0b101) == (0, 2)
    assert memory_values(0) == ()


def test_format_examples():
    assert format_symbol(base(0)) == "0"
    assert format_symbol(t(O, None, 0, 1)) == "(o|X|01)"
    assert format_symbol(t(E, None)) == "(*|X|-)"
    assert format_symbol(t(E, 1, 1)) == "(*|1|1)"


@pytest.mark.parametrize("k", [2, 3])
def test_notation_roundtrip_over_whole_alphabet(k):
    for sym in enumerate_alphabet(k):
        assert parse_symbol(format_symbol(sym), k) == sym


def test_parse_rejects_invalid_triplet():
    with pytest.raises(ValueError):
        parse_symbol("(*|0|-)", 2)
    with pytest.raises(ValueError):
        parse_symbol("(o|0|1)", 2)


def test_parse_rejects_garbage():
    for bad in ["", "(o|X|01", "(o|X)", "(q|X|-)", "(o|9|9)", "2", "(o|X|10)"]:
        with pytest.raises(ValueError):
            parse_symbol(bad, 2)


def test_row_roundtrip():
    row = "0 (o|X|1) (o|X|01) 1"
    assert format_row(parse_row(row, 2)) == row


@given(st.integers(0, 31), st.integers(2, 8))
def test_base_symbols_valid_iff_in_range(value, k):
    assert is_valid(base(value), k) == (value < k)


@given(st.integers(2, 6), st.data())
def test_random_triplet_validity_matches_definition(k, data):
    counter = data.draw(st.sampled_from([O, E]))
    tape = data.draw(st.one_of(st.none(), st.integers(0, k - 1)))
    mask = data.draw(st.integers(0, 2**k - 1))
    sym = triplet(counter, tape, mask)
    expected = tape is None or bool(mask >> tape & 1)
    assert is_valid(sym, k) == expected
