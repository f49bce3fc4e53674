"""Ready-made machines: sum, sampling, high-pass filtering and a few gadgets."""
from __future__ import annotations

from .domain import EQ, GT, LT, RATIONALS, GroupDescriptor
from .machine import ADD, NEW, OLD, SILENT, Srt, Transition, all_guards, expand_guard

EMIT = "gamma"


def fixture_sum(group: GroupDescriptor = RATIONALS, in_labels=("a",), out_label=EMIT) -> Srt:
    """One state, one register; every letter is added in and the running sum is emitted."""
    transitions = [
        Transition("q0", a, g, ADD, 1, out_label, "q0")
        for a in in_labels
        for g in all_guards(1)
    ]
    return Srt(
        in_labels=in_labels,
        out_labels={out_label},
        group=group,
        states={"q0"},
        initial_state="q0",
        registers=1,
        initial_values=(group.zero,),
        transitions=transitions,
    )


def fixture_sampling(n: int, group: GroupDescriptor = RATIONALS, in_labels=("a",)) -> Srt:
    """Nondeterministically emit exactly one value out of every block of ``n`` inputs.

    States ``q0 .. q{2n-2}``: ``q0 .. q{n-1}`` have not sampled yet in the current
    block, ``q{n} .. q{2n-2}`` already have.
    """
    if n < 1:
        raise ValueError("sampling period must be at least 1")
    states = [f"q{i}" for i in range(2 * n - 1)]
    edges = []
    for i in list(range(0, n - 1)) + list(range(n, 2 * n - 2)):
        edges.append((i, OLD, SILENT, i + 1))
    for i in range(0, n - 1):
        # sampled at block offset i: n - 1 - i silent steps remain
        edges.append((i, NEW, EMIT, i + n))
    edges.append((n - 1, NEW, EMIT, 0))
    edges.append((2 * n - 2, OLD, SILENT, 0))
    transitions = [
        Transition(f"q{i}", a, g, upd, 1, out, f"q{j}")
        for i, upd, out, j in edges
        for a in in_labels
        for g in all_guards(1)
    ]
    return Srt(
        in_labels=in_labels,
        out_labels={EMIT, SILENT},
        group=group,
        states=states,
        initial_state="q0",
        registers=1,
        initial_values=(group.zero,),
        transitions=transitions,
    )


def fixture_filtering(c, group: GroupDescriptor = RATIONALS, in_labels=("a",)) -> Srt:
    """High-pass filter: emit ``(gamma, d)`` when ``d > c``, otherwise ``(#, d)``.

    Register 1 holds ``c``; register 2 receives the current input so that both
    branches can echo ``d``.
    """
    c = group.coerce(c)
    transitions = []
    for a in in_labels:
        for g in expand_guard(GT + "*"):
            transitions.append(Transition("q0", a, g, OLD + NEW, 2, EMIT, "q0"))
        for g in expand_guard(EQ + "*") + expand_guard(LT + "*"):
            transitions.append(Transition("q0", a, g, OLD + NEW, 2, SILENT, "q0"))
    return Srt(
        in_labels=in_labels,
        out_labels={EMIT, SILENT},
        group=group,
        states={"q0"},
        initial_state="q0",
        registers=2,
        initial_values=(c, group.zero),
        transitions=transitions,
    )


def fixture_relabeler(mapping: dict, group: GroupDescriptor = RATIONALS) -> Srt:
    """Echo every input value, renaming its label through ``mapping``."""
    transitions = [
        Transition("q0", a, g, NEW, 1, b, "q0") for a, b in mapping.items() for g in all_guards(1)
    ]
    return Srt(
        in_labels=set(mapping),
        out_labels=set(mapping.values()),
        group=group,
        states={"q0"},
        initial_state="q0",
        registers=1,
        initial_values=(group.zero,),
        transitions=transitions,
    )


def fixture_dfa_complement(
    delta: dict, initial, accepting, group: GroupDescriptor = RATIONALS, out_label="T"
) -> Srt:
    """Follow a DFA over the input labels, emitting ``out_label`` while outside ``accepting``.

    ``delta`` maps ``(state, label)`` to a state. No transition leaves an
    accepting state, so the machine gets stuck exactly when the DFA accepts.
    A single register stays at 0 and supplies the output value.
    """
    accepting = set(accepting)
    states = {initial} | {q for q, _ in delta} | set(delta.values())
    transitions = [
        Transition(q, a, g, OLD, 1, out_label, r)
        for (q, a), r in delta.items()
        if q not in accepting
        for g in all_guards(1)
    ]
    return Srt(
        in_labels={a for _, a in delta},
        out_labels={out_label},
        group=group,
        states=states,
        initial_state=initial,
        registers=1,
        initial_values=(group.zero,),
        transitions=transitions,
    )


def fixture_counter_machine(program: dict, initial="L0", halt="HALT", group=None) -> Srt:
    """Simulate a two-counter machine over the integers.

    ``program`` maps a location to ``("inc", counter, next)`` or
    ``("jzdec", counter, if_zero, otherwise)`` with counters numbered 1 and 2.
    Registers are ``(c1, c2, 0, 1, -1)``. The honest input for an increment
    carries value 1, for a decrement -1, and for a test 0. Reaching ``halt``
    enters a state that may emit either ``"x"`` or ``"y"``, so the machine is
    functional iff the simulated program never halts.
    """
    from .domain import INTEGERS

    group = group or INTEGERS
    zero_reg, one_reg, minus_reg = 3, 4, 5

    def guard(**fixed):
        pattern = ["*"] * 5
        for reg, rel in fixed.items():
            pattern[int(reg[1:]) - 1] = rel
        return expand_guard("".join(pattern))

    def upd(add_to=None):
        u = [OLD] * 5
        if add_to is not None:
            u[add_to - 1] = ADD
        return "".join(u)

    transitions = []
    states = {halt}
    for loc, instr in program.items():
        states.add(loc)
        if instr[0] == "inc":
            _, c, nxt = instr
            states.add(nxt)
            for g in guard(**{f"r{one_reg}": EQ}):
                transitions.append(Transition(loc, "step", g, upd(c), zero_reg, "tick", nxt))
        elif instr[0] == "jzdec":
            _, c, if_zero, otherwise = instr
            states.update({if_zero, otherwise})
            mid = ("dec", loc)
            states.add(mid)
            for g in guard(**{f"r{zero_reg}": EQ, f"r{c}": EQ}):
                transitions.append(Transition(loc, "step", g, upd(), zero_reg, "tick", if_zero))
            for g in guard(**{f"r{zero_reg}": EQ, f"r{c}": LT}):
                transitions.append(Transition(loc, "step", g, upd(), zero_reg, "tick", mid))
            for g in guard(**{f"r{minus_reg}": EQ}):
                transitions.append(Transition(mid, "step", g, upd(c), zero_reg, "tick", otherwise))
        else:
            raise ValueError(f"unknown instruction {instr!r} at {loc!r}")
    for g in all_guards(5):
        for out in ("x", "y"):
            transitions.append(Transition(halt, "step", g, upd(), zero_reg, out, halt))
    return Srt(
        in_labels={"step"},
        out_labels={"tick", "x", "y"},
        group=group,
        states=states,
        initial_state=initial,
        registers=5,
        initial_values=(0, 0, 0, 1, -1),
        transitions=transitions,
    )
