from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from srtkit.domain import (
    EQ,
    GT,
    INTEGERS,
    LT,
    RATIONALS,
    GroupDescriptor,
    IncompatibleGroups,
    add,
    compare,
    data_word,
    instance_from_json,
    instance_to_json,
    lex,
    negate,
    project_positions,
    strictly_between,
    unzip,
    word_from_json,
    word_to_json,
    zero,
    zip_words,
)

ZQ = lex(INTEGERS, RATIONALS)
QZ = lex(RATIONALS, INTEGERS)

rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=50)
integers = st.integers(-1000, 1000)
pairs_zq = st.tuples(integers, rationals)


def test_compare_examples():
    assert compare(3, 3) == EQ
    assert compare((1, 5), (2, 0)) == LT
    assert compare(Fraction(-1, 2), Fraction(1, 3)) == LT
    assert compare(Fraction(1, 2), Fraction(0)) == GT
    with pytest.raises(IncompatibleGroups):
        compare(Fraction(1, 2), 0)


def test_compare_rejects_mixed_shapes():
    with pytest.raises(IncompatibleGroups, match="incompatible group descriptors"):
        compare((1, 2), 3)


def test_add_negate_zero():
    assert add((1, 2), (3, 4)) == (4, 6)
    assert add(Fraction(1, 3), zero(RATIONALS)) == Fraction(1, 3)
    assert add((1, Fraction(1, 2)), negate((1, Fraction(1, 2)))) == (0, 0)


@given(rationals, rationals, rationals)
def test_rational_group_axioms(a, b, c):
    g = RATIONALS
    assert g.add(g.add(a, b), c) == g.add(a, g.add(b, c))
    assert g.add(a, g.zero) == a
    assert g.add(a, g.negate(a)) == g.zero
    assert compare(g.add(a, c), g.add(b, c)) == compare(a, b)


@given(pairs_zq, pairs_zq, pairs_zq)
def test_lex_group_axioms(a, b, c):
    g = ZQ
    assert g.add(g.add(a, b), c) == g.add(a, g.add(b, c))
    assert g.add(a, g.zero) == a
    assert g.add(a, g.negate(a)) == g.zero
    assert compare(g.add(a, c), g.add(b, c)) == compare(a, b)
    # exactly one relation, and it is antisymmetric
    assert {compare(a, b), compare(b, a)} in ({EQ}, {LT, GT})


@given(pairs_zq, pairs_zq, pairs_zq)
def test_lex_compare_transitive(a, b, c):
    if compare(a, b) == LT and compare(b, c) == LT:
        assert compare(a, c) == LT


def test_density_and_least_positive():
    assert RATIONALS.dense and not INTEGERS.dense
    assert ZQ.dense and not QZ.dense
    assert INTEGERS.least_positive == 1
    assert QZ.least_positive == (Fraction(0), 1)
    assert RATIONALS.least_positive is None and ZQ.least_positive is None


def test_no_integer_between_zero_and_least_positive():
    samples = range(-50, 51)
    assert not [v for v in samples if 0 < v < INTEGERS.least_positive]


@given(rationals, rationals)
def test_strictly_between_rationals(a, b):
    if a == b:
        return
    lo, hi = min(a, b), max(a, b)
    c = strictly_between(RATIONALS, lo, hi)
    assert lo < c < hi


@given(pairs_zq, pairs_zq)
def test_strictly_between_dense_lex(a, b):
    if a == b:
        return
    lo, hi = min(a, b), max(a, b)
    assert lo < ZQ.strictly_between(lo, hi) < hi


def test_strictly_between_integers():
    assert INTEGERS.strictly_between(1, 5) in (2, 3, 4)
    with pytest.raises(ValueError):
        INTEGERS.strictly_between(1, 2)


def test_coerce():
    assert RATIONALS.coerce("3/4") == Fraction(3, 4)
    assert RATIONALS.coerce(2) == Fraction(2)
    assert INTEGERS.coerce("7") == 7
    for bad in (True, 0.5):
        with pytest.raises(IncompatibleGroups):
            RATIONALS.coerce(bad)
    with pytest.raises(IncompatibleGroups):
        INTEGERS.coerce(Fraction(1, 2))
    with pytest.raises(IncompatibleGroups):
        ZQ.coerce(3)


def test_descriptor_json_round_trip():
    for g in (INTEGERS, RATIONALS, ZQ, lex(ZQ, INTEGERS)):
        assert GroupDescriptor.from_json(g.to_json()) == g
    assert ZQ.to_json() == ["lex", "Z", "Q"]
    with pytest.raises(ValueError):
        GroupDescriptor.from_json("R")


def test_project_positions():
    s = [("a", 1), ("b", 2), ("a", 3)]
    assert project_positions(s, "a") == {0, 2}
    assert project_positions([], "a") == set()
    assert project_positions([("b", 0)], "a") == set()


def test_zip_unzip():
    v = zip_words([("a", 1)], [("γ", 1)])
    assert v == ((("a", 1), ("γ", 1)),)
    assert unzip(v) == ((("a", 1),), (("γ", 1),))
    with pytest.raises(ValueError, match="length mismatch"):
        zip_words([("a", 1), ("a", 2)], [("γ", 0)])


@given(st.lists(st.tuples(st.sampled_from("ab"), rationals), max_size=6))
def test_word_json_round_trip_rationals(letters):
    w = data_word(letters, RATIONALS)
    obj = word_to_json(w, RATIONALS)
    assert all(isinstance(v, str) and "/" in v for _, v in obj)
    assert word_from_json(obj, RATIONALS) == w


@given(st.lists(st.tuples(st.sampled_from("ab"), pairs_zq), max_size=5))
def test_word_json_round_trip_pairs(letters):
    w = data_word(letters, ZQ)
    assert word_from_json(word_to_json(w, ZQ), ZQ) == w


def test_instance_json_round_trip():
    inst = zip_words(data_word([("a", 1), ("a", 2)], INTEGERS), data_word([("g", 1), ("g", 3)], INTEGERS))
    assert instance_to_json(inst, INTEGERS) == [[["a", 1], ["g", 1]], [["a", 2], ["g", 3]]]
    assert instance_from_json(instance_to_json(inst, INTEGERS), INTEGERS) == inst


def test_word_from_json_errors():
    with pytest.raises(ValueError):
        word_from_json({"a": 1}, INTEGERS)
    with pytest.raises(ValueError):
        word_from_json([["a"]], INTEGERS)
