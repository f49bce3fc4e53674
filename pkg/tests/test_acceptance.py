"""The acceptance gate: eight end-to-end criteria, each with its own time limit.

Each test records a PASS or FAIL line that is printed in the terminal summary.
"""
import itertools
import random
import time
from contextlib import contextmanager
from fractions import Fraction

from conftest import CRITERIA
from machines import DENSE_GRID, random_machine
from srtkit.closure import compose_add_free, intersection, union
from srtkit.constraints import (
    CgWeight,
    ConstraintGraph,
    Term,
    atom_holds,
    find_negative_cycle,
    has_negative_cycle,
    solve_assignment,
)
from srtkit.decide import (
    NO,
    YES,
    check_functionality,
    check_inclusion,
    check_reactivity,
    extension_machine,
    witness_bound,
)
from srtkit.domain import EQ, GT, INTEGERS, LT, RATIONALS
from srtkit.execution import Stream, complete_runs, enabled, initial_configuration
from srtkit.fixtures import EMIT, fixture_filtering, fixture_sampling, fixture_sum
from srtkit.machine import all_guards, make_srt
from srtkit.oracle import (
    OracleConfig,
    _outputs_on,
    _table,
    enumerate_semantics,
    oracle_compose,
    oracle_functional,
    oracle_included,
)
from srtkit.trails import ordered_bell, reconstruct_register, trail_letter, weak_orderings

F = Fraction


@contextmanager
def criterion(n, title, seconds=None):
    start = time.perf_counter()
    try:
        yield
        took = time.perf_counter() - start
        if seconds is not None:
            assert took < seconds, f"took {took:.1f}s, limit {seconds}s"
    except BaseException as exc:
        took = time.perf_counter() - start
        CRITERIA[n] = f"FAIL {n}. {title} ({took:.2f}s): {exc}"
        raise
    CRITERIA[n] = f"PASS {n}. {title} ({took:.2f}s)"


def oracle_outputs(m, word):
    return _outputs_on(m, _table(m), tuple(word))


def test_1_example_fidelity():
    with criterion(1, "example fidelity: sum, filtering, sampling", 1.0):
        outs = list(Stream(fixture_sum(INTEGERS), [("a", 1)] * 20))
        assert outs == [(EMIT, i) for i in range(1, 21)]

        rng = random.Random(1)
        c = F(1, 3)
        values = [F(rng.randint(-1000, 1000), rng.randint(1, 60)) for _ in range(1000)]
        outs = list(Stream(fixture_filtering(c), [("a", v) for v in values]))
        assert [label == EMIT for label, _ in outs] == [v > c for v in values]
        assert [v for _, v in outs] == values

        sem = enumerate_semantics(fixture_sampling(2), OracleConfig(6, (0,)))
        assert len([i for i in sem if len(i) == 6]) == 2 ** 3
        assert len(complete_runs(fixture_sampling(2), [("a", F(0))] * 6)) == 2 ** 3


def test_2_register_reconstruction():
    with criterion(2, "register reconstruction from trails, 200 machines", 60.0):
        rng = random.Random(2)
        checked = 0
        for i in range(200):
            group = INTEGERS if i % 4 == 0 else RATIONALS
            grid = (-1, 0, 1, 2) if group is INTEGERS else (F(-1), F(0), F(1, 2), F(2))
            m = random_machine(rng, add_free=False, max_k=3, group=group,
                               init_values=tuple(group.coerce(v) for v in (0, 1, -1)))
            letters = [(a, d) for a in sorted(m.in_labels) for d in grid]
            # every run prefix is visited once; check its last configuration
            stack = [((), (), initial_configuration(m))]
            while stack:
                word, trail, config = stack.pop()
                for j in range(1, m.registers + 1):
                    got = reconstruct_register(trail, word, m.initial_values, len(word), j, group)
                    assert got == config.registers[j - 1], (i, word, j)
                    checked += 1
                if len(word) == 5:
                    continue
                for letter in letters:
                    for mv in enabled(m, config, letter):
                        stack.append((word + (letter,), trail + (trail_letter(mv.transition),), mv.config))
        assert checked > 0


def test_3_closure_equivalence():
    with criterion(3, "union, intersection, composition equal the oracle on 50 pairs", 120.0):
        rng = random.Random(3)
        cfg = OracleConfig(3, (F(-1), F(0), F(1)))
        labels = ("a", "b")
        for _ in range(50):
            opts = dict(in_labels=labels, out_labels=labels, density=0.7)
            m1, m2 = random_machine(rng, **opts), random_machine(rng, **opts)
            s1 = enumerate_semantics(m1, cfg, labels)
            s2 = enumerate_semantics(m2, cfg, labels)
            assert enumerate_semantics(union(m1, m2), cfg, labels) == s1 | s2
            assert enumerate_semantics(intersection(m1, m2), cfg, labels) == s1 & s2
            assert enumerate_semantics(compose_add_free(m1, m2), cfg, labels) == oracle_compose(m1, m2, cfg, labels)


def test_4_sum_after_sum():
    with criterion(4, "sum after sum emits n(n+1)/2"):
        first = fixture_sum(INTEGERS)
        second = fixture_sum(INTEGERS, in_labels=(EMIT,))
        for n in range(1, 9):
            rel = [i for i in oracle_compose(first, second, OracleConfig(n, (1,))) if len(i) == n]
            assert len(rel) == 1
            assert rel[0][-1][1][1] == n * (n + 1) // 2


def functionality_corpus():
    rng = random.Random(5)
    return [random_machine(rng) for _ in range(300)]


def test_5_functionality_vs_oracle():
    with criterion(5, "functionality agrees with the oracle on 300 machines", 300.0):
        cfg = OracleConfig(4, DENSE_GRID)
        tally = {}
        for m in functionality_corpus():
            r = check_functionality(m)
            o = oracle_functional(m, cfg)
            tally[(r.verdict, o.holds)] = tally.get((r.verdict, o.holds), 0) + 1
            if not o.holds:
                assert r.verdict == NO
            assert r.verdict in (YES, NO)
            if r.verdict == NO:
                outs = oracle_outputs(m, r.witness.input)
                assert r.witness.output_a in outs and r.witness.output_b in outs
                assert r.witness.output_a != r.witness.output_b
        assert tally.get((NO, False), 0) > 0 and tally.get((YES, True), 0) > 0
        r = check_functionality(fixture_sampling(2))
        assert r.verdict == NO and len(r.witness.input) <= 2


def test_6_inclusion_and_reactivity_vs_oracle():
    with criterion(6, "inclusion and reactivity agree with the oracle on 100 pairs", 300.0):
        rng = random.Random(6)
        cfg = OracleConfig(4, DENSE_GRID)
        for _ in range(100):
            kw = dict(deterministic=True, in_labels=("a",), density=rng.choice((0.6, 0.9, 1.0)))
            m1 = random_machine(rng, **kw)
            if rng.random() < 0.5:
                m2 = random_machine(rng, **kw)
            else:
                m2 = m1.replace(transitions=[t for t in m1.transitions if rng.random() < 0.9])
            r = check_inclusion(m1, m2)
            o = oracle_included(m1, m2, cfg)
            if not o.holds:
                assert r.verdict == NO
            assert r.verdict in (YES, NO)
            if r.verdict == NO:
                w = r.witness
                assert w.output_a in oracle_outputs(m1, w.input)
                assert w.output_a not in oracle_outputs(m2, w.input)
            assert check_inclusion(m1, extension_machine(m1)).verdict == YES
        assert check_reactivity(fixture_sum()).verdict == YES
        gt_only = make_srt([("q0", "a", ">", "o", 1, "x", "q0")], group=RATIONALS, initial_values=(0,))
        r = check_reactivity(gt_only)
        assert r.verdict == NO and len(r.witness.input) == 1


def brute_force_preorders(k):
    count = 0
    for rel in itertools.product((False, True), repeat=k * k):
        le = lambda i, j: rel[i * k + j]
        if all(le(i, i) for i in range(k)) \
                and all(le(i, j) or le(j, i) for i in range(k) for j in range(k)) \
                and all(not (le(i, j) and le(j, l)) or le(i, l)
                        for i in range(k) for j in range(k) for l in range(k)):
            count += 1
    return count


def test_7_constraint_graphs():
    with criterion(7, "constraint-graph unit suite and ordered Bell numbers"):
        g = ConstraintGraph(RATIONALS)
        g.constrain(Term(1, 0), GT, Term(0, 0))
        assert g.edges[-1] == (1, 0, CgWeight(0, -1))
        assert not has_negative_cycle(g)
        vals = solve_assignment(g)
        assert all(atom_holds(a, vals, RATIONALS) for a in g.atoms)

        g = ConstraintGraph(RATIONALS)
        g.constrain(Term(0, 0), LT, Term(1, 0))
        g.constrain(Term(1, 0), LT, Term(0, 0))
        cycle = find_negative_cycle(g)
        assert g.cycle_weight(cycle) == CgWeight(0, -2)

        g = ConstraintGraph(RATIONALS)
        g.constrain(Term(0, 0), EQ, g.const(F(3)))
        assert {(e.source, e.target, e.weight) for e in g.edges} == {
            ("zero", 0, CgWeight(3, 0)), (0, "zero", CgWeight(-3, 0))}
        vals = solve_assignment(g)
        assert vals[0] == 3 and all(atom_holds(a, vals, RATIONALS) for a in g.atoms)

        g = ConstraintGraph(RATIONALS)
        g.add_edge(1, 0, CgWeight(0, -1))
        g.add_edge(2, 1, CgWeight(2, -1))
        g.add_edge(0, 2, CgWeight(-2, -1))
        cycle = find_negative_cycle(g)
        assert g.cycle_weight(cycle) == CgWeight(0, -3)

        for k, b in zip(range(1, 5), (1, 3, 13, 75)):
            assert len(weak_orderings(k)) == ordered_bell(k) == b
            if k <= 3:
                assert brute_force_preorders(k) == b
        assert brute_force_preorders(4) == 75


def test_8_witness_bound():
    with criterion(8, "witness bound 81 and no first witness beyond the bound", 300.0):
        ts = [(f"q{i}", "a", g, "no", 1, "x", f"q{(i + 1) % 3}") for i in range(3) for g in all_guards(2)]
        assert witness_bound(make_srt(ts, group=RATIONALS, initial_values=(0, 0))) == 81
        for m in functionality_corpus():
            if check_functionality(m).bound_formula == "deterministic":
                continue
            bound = witness_bound(m)
            deep = check_functionality(m, 2 * bound, trust_bound=False)
            at_bound = check_functionality(m, bound, trust_bound=False)
            if deep.verdict == NO:
                assert len(deep.witness.input) <= bound
                assert at_bound.verdict == NO
            else:
                assert at_bound.verdict != NO
