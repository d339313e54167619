"""Local rule: dispatch totality, rewrites, preservation properties."""

import itertools

import pytest

from densica.alphabet import (
    BaseSymbol,
    Counter,
    Triplet,
    base,
    enumerate_alphabet,
    is_valid,
    memory_from_values,
    symbol_index,
    triplet,
)
from densica.rule1d import (
    TIE,
    RuleCase,
    apply_local,
    classify_case,
    rule_table,
)

O, E = Counter.ODD, Counter.EVEN


def t(counter, tape, *mem):
    return triplet(counter, tape, memory_from_values(mem))


def test_classify_examples():
    assert classify_case(base(0), base(1), 2) is RuleCase.KICKSTART
    assert classify_case(base(0), base(0), 2) is RuleCase.FIXED_POINT
    assert classify_case(t(O, 0, 0), base(1), 2) is RuleCase.PROP_FIRST_TAKE
    assert classify_case(t(O, None, 0, 1), t(E, None, 0), 2) is RuleCase.PROP_KEEP
    assert classify_case(t(O, None), t(O, None, 1), 2) is RuleCase.SWAP_TIE
    assert classify_case(t(E, None, 0, 1), t(E, None, 0), 2) is RuleCase.SWAP_RESET
    assert classify_case(t(O, 0, 0), t(O, None), 2) is RuleCase.SWAP_CONVERGE
    assert classify_case(base(1), t(O, 1, 0, 1), 2) is RuleCase.CONVERGENCE


def test_apply_worked_rows():
    # One example per rewrite family of the binary rule table.
    assert apply_local(base(0), base(0), 2) == base(0)
    assert apply_local(base(0), base(1), 2) == t(O, None, 1)
    assert apply_local(t(O, 0, 0), base(1), 2) == t(O, None, 0, 1)
    assert apply_local(t(E, 1, 1), base(1), 2) == t(E, 1, 1)
    assert apply_local(t(E, None, 0, 1), t(E, None, 0), 2) == t(O, None)
    assert apply_local(t(E, None), t(O, 1, 0, 1), 2) == t(E, None, 1)
    assert apply_local(t(O, None, 0, 1), t(E, None, 0), 2) == t(O, None, 0, 1)
    assert apply_local(t(O, 0, 0), t(O, None), 2) == base(0)
    assert apply_local(base(1), t(O, 1, 0, 1), 2) == base(1)
    assert apply_local(t(O, None), t(O, None, 1), 2) is TIE


def test_kickstart_stores_current_cell():
    assert apply_local(base(1), base(0), 2) == t(O, None, 0)
    assert apply_local(base(0), base(2), 3) == t(O, None, 2)


def test_invalid_inputs_raise():
    with pytest.raises(ValueError):
        classify_case(base(2), base(0), 2)
    with pytest.raises(ValueError):
        apply_local(base(0), t(O, 0), 2)


@pytest.mark.parametrize("k", [2, 3])
def test_dispatch_total_and_validity_preserving(k):
    symbols = enumerate_alphabet(k)
    for left, current in itertools.product(symbols, symbols):
        case = classify_case(left, current, k)
        assert case is not RuleCase.UNREACHABLE
        out = apply_local(left, current, k)
        if out is not TIE:
            assert is_valid(out, k), (left, current, out)


@pytest.mark.parametrize("k", [2, 3])
def test_propagation_preserves_counter_and_grows_memory(k):
    symbols = enumerate_alphabet(k)
    prop_cases = {
        RuleCase.PROP_FIRST_TAKE,
        RuleCase.PROP_FIRST_KEEP,
        RuleCase.PROP_TAKE,
        RuleCase.PROP_KEEP,
    }
    for left, current in itertools.product(symbols, symbols):
        case = classify_case(left, current, k)
        if case not in prop_cases:
            continue
        out = apply_local(left, current, k)
        assert out.counter is left.counter
        assert out.memory & left.memory == left.memory
        if case in (RuleCase.PROP_FIRST_TAKE, RuleCase.PROP_TAKE):
            grabbed = (
                current.value if type(current) is BaseSymbol else current.tape
            )
            assert out.memory == left.memory | 1 << grabbed
            assert out.tape is None
        else:
            assert out.memory == left.memory


@pytest.mark.parametrize("k", [2, 3])
def test_swap_dispatch_by_memory_size(k):
    symbols = enumerate_alphabet(k)
    for left, current in itertools.product(symbols, symbols):
        if type(left) is not Triplet or type(current) is not Triplet:
            continue
        if left.counter is not current.counter:
            continue
        case = classify_case(left, current, k)
        size = left.memory.bit_count()
        if size >= 2:
            assert case is RuleCase.SWAP_RESET
            out = apply_local(left, current, k)
            assert out == triplet(left.counter.flipped, None, 0)
        elif size == 1:
            assert case is RuleCase.SWAP_CONVERGE
            assert apply_local(left, current, k) == base(left.memory.bit_length() - 1)
        else:
            assert case is RuleCase.SWAP_TIE
            assert apply_local(left, current, k) is TIE


def test_full_ternary_memory_still_resets():
    left = t(O, None, 0, 1, 2)
    assert classify_case(left, t(O, None), 3) is RuleCase.SWAP_RESET
    assert apply_local(left, t(O, None), 3) == t(E, None)


@pytest.mark.parametrize("k", [2, 3])
def test_rule_table_agrees_with_apply_local(k):
    table = rule_table(k)
    symbols = enumerate_alphabet(k)
    for li, left in enumerate(symbols):
        for ci, current in enumerate(symbols):
            out = apply_local(left, current, k)
            got = table.result[li * table.size + ci]
            if out is TIE:
                assert got == -1
            else:
                assert got == symbol_index(out, k)


def test_rule_table_size_cap():
    with pytest.raises(ValueError):
        rule_table(12)
