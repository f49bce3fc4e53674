"""Why functionality needs add-free machines.

A machine with add updates can simulate a two-counter program: register
arithmetic checks that each input is the honest one for the next
instruction. Reaching HALT opens two ways to emit, so the machine is
functional exactly when the program never halts. The decision procedure
therefore refuses machines with add.

    python3 demos/counter_gadget.py
"""
from srtkit.decide import UnsupportedMachine, check_functionality
from srtkit.execution import complete_runs
from srtkit.fixtures import fixture_counter_machine

# L0: c1 += 1; L1: if c1 == 0 halt else c1 -= 1 and loop
PROGRAM = {"L0": ("inc", 1, "L1"), "L1": ("jzdec", 1, "HALT", "L1")}


def main():
    m = fixture_counter_machine(PROGRAM)
    honest = [("step", v) for v in (1, 0, -1, 0, 0)]
    outputs = {r.output_word for r in complete_runs(m, honest)}
    print(f"honest input {[v for _, v in honest]} has {len(outputs)} outputs:")
    for out in sorted(outputs):
        print("  " + " ".join(label for label, _ in out))
    cheat = [("step", v) for v in (1, 0, 0)]
    print(f"cheating input {[v for _, v in cheat]} has {len(complete_runs(m, cheat))} complete runs")
    try:
        check_functionality(m)
    except UnsupportedMachine as exc:
        print(f"check_functionality: {exc}")


if __name__ == "__main__":
    main()
