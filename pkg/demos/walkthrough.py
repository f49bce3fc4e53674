"""Run the three basic machines on small inputs and show what they emit.

    python3 demos/walkthrough.py
"""
from fractions import Fraction

from srtkit import INTEGERS
from srtkit.execution import Stream, complete_runs
from srtkit.fixtures import fixture_filtering, fixture_sampling, fixture_sum
from srtkit.trails import corresponding_trail, p_set, reconstruct_register


def show(title, pairs):
    print(title)
    for (a, d), (b, e) in pairs:
        print(f"  ({a}, {d}) -> ({b}, {e})")


def main():
    word = [("a", 1)] * 5
    show("running sum over five ones:", zip(word, Stream(fixture_sum(INTEGERS), word)))

    word = [("a", Fraction(v)) for v in ("3", "-1/2", "0", "7/2")]
    show("high-pass filter at 0 (# marks a dropped value):", zip(word, Stream(fixture_filtering(0), word)))

    word = [("a", Fraction(i)) for i in range(4)]
    runs = complete_runs(fixture_sampling(2), word)
    print(f"sampling one value per block of two: {len(runs)} runs over {len(word)} letters")
    for r in runs:
        print("  " + " ".join(f"{b}{'' if b == '#' else '=' + str(e)}" for b, e in r.output_word))

    # registers can be recomputed from the trail alone: which inputs went into each sum
    (run,) = complete_runs(fixture_sum(INTEGERS), [("a", 1), ("a", 2), ("a", 3)])
    trail = corresponding_trail(run)
    print("sum after [1, 2, 3]:")
    print(f"  positions feeding register 1: {sorted(p_set(trail, 3, 1))} (-1 is the initial value)")
    print(f"  recomputed value: {reconstruct_register(trail, run.input_word, (0,), 3, 1, INTEGERS)}")


if __name__ == "__main__":
    main()
