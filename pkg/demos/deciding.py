"""Decide functionality, inclusion and reactivity and print the witnesses.

    python3 demos/deciding.py
"""
from srtkit import RATIONALS
from srtkit.decide import check_functionality, check_inclusion, check_reactivity
from srtkit.fixtures import fixture_filtering, fixture_relabeler, fixture_sampling, fixture_sum
from srtkit.machine import make_srt


def fmt(word):
    return "[" + ", ".join(f"({a}, {d})" for a, d in word) + "]"


def report(title, r):
    print(f"{title}: {r.verdict} (bound {r.bound_used}, {r.states_visited} search nodes)")
    if r.witness is not None:
        w = r.witness
        print(f"  input    {fmt(w.input)}")
        print(f"  output a {fmt(w.output_a)}")
        print(f"  output b {fmt(w.output_b)}  [{w.divergence}]")


def main():
    report("sampling(2) functional", check_functionality(fixture_sampling(2)))
    report("sum functional", check_functionality(fixture_sum()))

    full = fixture_relabeler({"a": "g"})
    no_positive = full.replace(transitions=[t for t in full.transitions if t.guard != ">"])
    report("echo included in echo-without-positives", check_inclusion(full, no_positive))
    report("echo-without-positives included in echo", check_inclusion(no_positive, full))

    report("filtering(0) reactive", check_reactivity(fixture_filtering(0)))
    gt_only = make_srt([("q0", "a", ">", "o", 1, "x", "q0")], group=RATIONALS, initial_values=(0,))
    report("machine reading only values above 0 reactive", check_reactivity(gt_only))


if __name__ == "__main__":
    main()
