import json
import random
from fractions import Fraction

import pytest

from machines import random_machine
from srtkit.domain import INTEGERS, RATIONALS, lex
from srtkit.execution import enabled, guard_of, initial_configuration
from srtkit.fixtures import (
    fixture_counter_machine,
    fixture_filtering,
    fixture_sampling,
    fixture_sum,
)
from srtkit.machine import (
    InvalidMachine,
    Srt,
    Transition,
    all_guards,
    classify,
    ensure_valid,
    expand_guard,
    make_srt,
    validate,
)


def test_all_guards_counts():
    assert [len(all_guards(k)) for k in range(4)] == [1, 3, 9, 27]
    assert all_guards(0) == [""]


def test_expand_guard():
    assert sorted(expand_guard(">*")) == sorted([">>", ">=", "><"])
    assert expand_guard("=<") == ["=<"]
    assert len(expand_guard("**")) == 9


def test_sum_is_valid():
    assert validate(fixture_sum()) == []


def test_output_register_out_of_range():
    m = fixture_sum().replace(transitions=[Transition("q0", "a", ">", "a", 2, "gamma", "q0")])
    errors = validate(m)
    assert any("output register out of range" in e for e in errors)
    with pytest.raises(InvalidMachine):
        ensure_valid(m)


def test_initial_vector_too_short():
    m = fixture_filtering(0).replace(initial_values=(Fraction(0),))
    assert any("initial register vector length" in e for e in validate(m))


def test_unknown_states_and_labels_reported():
    m = make_srt([("q0", "a", "=", "n", 1, "g", "q1")], group=RATIONALS, initial_values=(0,))
    m = m.replace(states={"q0"}, in_labels={"b"}, out_labels={"h"})
    text = " | ".join(validate(m))
    for fragment in ("unknown target state", "input label 'a' not declared", "output label 'g' not declared"):
        assert fragment in text


def test_bad_guard_and_update_strings():
    m = make_srt([("q0", "a", "=x", "nq", 1, "g", "q0")], group=RATIONALS, initial_values=(0, 0))
    text = " | ".join(validate(m))
    assert "guard must be" in text and "update must be" in text


def test_initial_state_must_be_declared():
    m = fixture_sum().replace(initial_state="nowhere")
    assert any("initial state" in e for e in validate(m))


def test_classify_fixtures():
    assert classify(fixture_sum()).to_json() == {
        "deterministic": True, "add_free": False, "uninitialized": True, "dense": True,
    }
    samp = classify(fixture_sampling(2))
    assert not samp.deterministic and samp.add_free and samp.uninitialized
    filt = classify(fixture_filtering(3))
    assert filt.deterministic and filt.add_free and not filt.uninitialized
    assert not classify(fixture_sum(INTEGERS)).dense


def test_fixture_shapes():
    s = fixture_sum()
    assert len(s.states) == 1 and s.registers == 1 and len(s.transitions) == 3
    for n in (1, 2, 3, 4):
        m = fixture_sampling(n)
        assert len(m.states) == 2 * n - 1
        assert validate(m) == []
    f = fixture_filtering(5)
    assert f.initial_values == (Fraction(5), Fraction(0)) and len(f.states) == 1
    with pytest.raises(ValueError):
        fixture_sampling(0)


def test_counter_machine_fixture_is_valid():
    prog = {"L0": ("inc", 1, "L1"), "L1": ("jzdec", 1, "HALT", "L1")}
    m = fixture_counter_machine(prog)
    assert validate(m) == []
    c = classify(m)
    assert not c.add_free and not c.deterministic


def test_json_round_trip_is_bit_exact():
    for m in (fixture_sum(), fixture_sampling(3), fixture_filtering(Fraction(-7, 3)),
              fixture_sum(lex(INTEGERS, RATIONALS))):
        text = m.dumps()
        again = Srt.loads(text)
        assert again == m
        assert again.dumps() == text


def test_json_schema_fields():
    obj = fixture_filtering(Fraction(1, 2)).to_json()
    assert obj["group"] == "Q"
    assert obj["initial_values"] == ["1/2", "0/1"]
    t = obj["transitions"][0]
    assert set(t) == {"from", "label", "guard", "update", "out_reg", "out_label", "to"}


def test_from_json_reports_missing_keys():
    obj = fixture_sum().to_json()
    del obj["transitions"]
    with pytest.raises(ValueError, match="missing transitions"):
        Srt.from_json(obj)


def test_composite_states_survive_json():
    m = make_srt([(("q", 1), "a", "=", "o", 1, "g", ("q", 1))], group=INTEGERS,
                 initial_values=(0,), initial_state=("q", 1))
    assert Srt.loads(json.dumps(m.to_json())) == m


def test_duplicate_transitions_collapse():
    t = Transition("q0", "a", ">", "a", 1, "gamma", "q0")
    m = fixture_sum().replace(transitions=list(fixture_sum().transitions) + [t])
    assert len(m.transitions) == 3


@pytest.mark.parametrize("seed", range(20))
def test_deterministic_machines_enable_at_most_one_move(seed):
    rng = random.Random(seed)
    m = random_machine(rng, deterministic=True, density=0.8)
    assert classify(m).deterministic
    values = [Fraction(v, 2) for v in range(-4, 5)]
    configs = {initial_configuration(m)}
    for _ in range(3):
        nxt = set()
        for c in configs:
            for a in m.in_labels:
                for d in values:
                    moves = enabled(m, c, (a, d))
                    assert len(moves) <= 1
                    nxt.update(mv.config for mv in moves)
        configs = nxt


def test_guard_of():
    assert guard_of(3, (1, 3, 5)) == ">=<"
