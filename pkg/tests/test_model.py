import io
import random

import pytest
from hypothesis import given, settings

from pkp.model import (CapacityExceeded, InstanceFormatError, InvalidItem, Item, OverflowRisk, canonicalize,
                       evaluate, format_instance, parse_instance, read_instance, write_instance)

from conftest import instances, pkp_value, subsets


def triples(inst):
    return [(it.profit, it.weight, it.penalty) for it in inst.items]


def test_canonical_order_of_worked_instance(worked_inst):
    assert triples(worked_inst) == [(6, 4, 2), (10, 5, 1)]
    assert [it.original_index for it in worked_inst.items] == [1, 0]


def test_empty_instance():
    inst = canonicalize([], 5)
    assert inst.n == 0
    sol = evaluate(inst, [])
    assert sol.value == 0 and sol.leading_index is None


def test_equal_penalties_break_ties_by_weight():
    inst = canonicalize([(1, 2, 5), (1, 3, 5)], 10)
    assert triples(inst) == [(1, 3, 5), (1, 2, 5)]


def test_equal_penalty_and_weight_keep_input_order():
    inst = canonicalize([(4, 3, 5), (9, 3, 5)], 10)
    assert [it.original_index for it in inst.items] == [0, 1]


def test_evaluate_worked_instance(worked_inst):
    sol = evaluate(worked_inst, {1})
    assert sol.value == 9 and sol.leading_index == 1


def test_evaluate_three_items(three_inst):
    # canonical order: (5,4,5), (6,4,3), (7,6,2)
    sol = evaluate(three_inst, {1, 2})
    assert sol.value == 10 and sol.leading_index == 1


def test_evaluate_rejects_overweight(worked_inst):
    with pytest.raises(CapacityExceeded) as err:
        evaluate(worked_inst, {0, 1})
    assert err.value.weight == 9


def test_evaluate_rejects_bad_index(worked_inst):
    with pytest.raises(IndexError):
        evaluate(worked_inst, {2})


@pytest.mark.parametrize("raw", [[(1, 0, 1)], [(-1, 2, 1)], [(1, 2, -3)]])
def test_invalid_items(raw):
    with pytest.raises(InvalidItem):
        canonicalize(raw, 5)


def test_negative_capacity():
    with pytest.raises(InvalidItem):
        canonicalize([(1, 1, 1)], -1)


def test_overflow_guard():
    with pytest.raises(OverflowRisk):
        canonicalize([(2**61, 1, 0), (1, 1, 0)], 5)


def test_text_round_trip(tmp_path, three_inst):
    path = tmp_path / "three.txt"
    write_instance(three_inst, path)
    assert path.read_text() == "3 10\n6 4 3\n5 4 5\n7 6 2\n"
    back = read_instance(path)
    assert back.items == three_inst.items and back.capacity == 10
    assert back.label == "three"
    buf = io.StringIO()
    write_instance(back, buf)
    assert buf.getvalue() == format_instance(three_inst)


@pytest.mark.parametrize("text", ["", "2 5\n1 2 3\n", "1 5\n1 x 3\n", "1 5\n1 2 3 4\n"])
def test_parse_errors(text):
    with pytest.raises(InstanceFormatError):
        parse_instance(text)


@given(instances())
def test_canonicalize_is_idempotent_permutation(inst):
    again = canonicalize(list(inst.items), inst.capacity)
    assert again.items == inst.items
    pens = [it.penalty for it in inst.items]
    assert pens == sorted(pens, reverse=True)
    assert sorted(it.original_index for it in inst.items) == list(range(inst.n))


@given(instances())
def test_shuffled_input_gives_same_multiset(inst):
    raw = [(it.profit, it.weight, it.penalty) for it in inst.items]
    random.Random(inst.n).shuffle(raw)
    other = canonicalize(raw, inst.capacity)
    assert sorted(triples(other)) == sorted(triples(inst))
    assert [it.penalty for it in other.items] == [it.penalty for it in inst.items]


@settings(max_examples=25, deadline=None)
@given(instances(n_max=12))
def test_evaluate_matches_recomputation(inst):
    for s in subsets(inst.n):
        expected = pkp_value(inst, s)
        if expected is None:
            with pytest.raises(CapacityExceeded):
                evaluate(inst, s)
        else:
            sol = evaluate(inst, s)
            assert sol.value == expected
            assert sol.leading_index == (min(s) if s else None)


def test_item_defaults():
    assert Item(1, 1, 0).original_index == 0
