"""Functionality, inclusion and reactivity checks for add-free machines.

All three reduce to a search for two trails over one input word that agree
on their outputs up to the last position and then diverge (or, for
inclusion, one of them gets stuck). Feasibility of each candidate is a
difference-constraint question. The search runs breadth-first over pairs of
trail-automaton states and keeps, per node, only the shortest-path closure
among the input variables still held in registers; nodes with the same
summary have the same futures, so they are merged.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .constraints import (
    CgWeight,
    build_constraint_graph,
    input_word_from,
    solve_assignment,
    strict_weight,
    weight_adder,
)
from .domain import EQ, GT, LT, word_to_json
from .execution import complete_runs, run_word
from .machine import (
    OLD,
    Srt,
    Transition,
    all_guards,
    ensure_valid,
    is_add_free,
    is_deterministic,
    is_uninitialized,
    same_group,
)
from .trails import build_trail_automaton, ordered_bell, trail_letter

DEFAULT_MAX_BOUND = 1000
DEFAULT_MAX_STATES = 200_000

YES, NO, EXHAUSTED = "yes", "no", "bound-exhausted"


class UnsupportedMachine(ValueError):
    pass


@dataclass(frozen=True)
class Witness:
    input: tuple
    output_a: tuple
    output_b: tuple
    divergence: str
    group: object = None

    def to_json(self) -> dict:
        return {
            "input": word_to_json(self.input, self.group),
            "output_a": word_to_json(self.output_a, self.group),
            "output_b": word_to_json(self.output_b, self.group),
            "divergence": self.divergence,
        }


@dataclass(frozen=True)
class WitnessReport:
    verdict: str
    witness: Optional[Witness]
    depth_explored: int
    states_visited: int
    bound_used: int
    bound_formula: str = ""

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness": None if self.witness is None else self.witness.to_json(),
            "depth_explored": self.depth_explored,
            "states_visited": self.states_visited,
            "bound_used": self.bound_used,
            "bound_formula": self.bound_formula,
        }


# -- bounds -------------------------------------------------------------------------------


def _bound(ma: Srt, mb: Optional[Srt] = None):
    single = mb is None
    mb = ma if single else mb
    qa = len(ma.states) * ordered_bell(ma.k)
    qb = len(mb.states) * ordered_bell(mb.k)
    base = qa * qb
    if single:
        base_txt = f"(|Q|*B_k)^2 = ({len(ma.states)}*{ordered_bell(ma.k)})^2 = {base}"
    else:
        base_txt = (
            f"(|Q1|*B_k1)*(|Q2|*B_k2) = ({len(ma.states)}*{ordered_bell(ma.k)})"
            f"*({len(mb.states)}*{ordered_bell(mb.k)}) = {base}"
        )
    if ma.group.dense or (is_uninitialized(ma) and is_uninitialized(mb)):
        return base, base_txt
    big_k = ma.k if single else ma.k + mb.k
    exp = (big_k + 1) ** (big_k - 1) if big_k >= 1 else 1
    return base ** exp, f"B^((K+1)^(K-1)) with B = {base_txt}, K = {big_k}: exponent {exp}"


def witness_bound(m: Srt, other: Optional[Srt] = None) -> int:
    """Length beyond which no shortest witness can exist.

    Dense or uninitialized machines: ``(|Q| * B_k) ** 2`` with ``B_k`` the
    ordered Bell number. Discrete initialized machines raise that base to
    ``(k + 1) ** (k - 1)``. With ``other`` the bound is for a pair of
    machines, using the product of both state counts and ``K = k1 + k2``.
    """
    for mm in (m,) if other is None else (m, other):
        if not is_add_free(mm):
            raise UnsupportedMachine("witness bounds exist only for add-free machines")
    return _bound(m, other)[0]


def bound_formula(m: Srt, other: Optional[Srt] = None) -> str:
    return _bound(m, other)[1]


# -- the pair search ----------------------------------------------------------------------


class _PairSearch:
    """Breadth-first search for diverging trail pairs.

    ``mode`` is ``"functional"`` (both trails from one machine) or
    ``"inclusion"`` (``ma`` against a deterministic ``mb``, with stuck
    divergences on the ``mb`` side).
    """

    def __init__(self, ma: Srt, mb: Srt, mode: str, limit: int, max_states: int):
        self.ma, self.mb, self.mode = ma, mb, mode
        self.limit, self.max_states = limit, max_states
        self.group = ma.group
        self.add = weight_adder(self.group)
        self.zw = CgWeight(self.group.zero, 0)
        self.strict = strict_weight(self.group)
        if self.group.dense:
            self.clamp = "eps"
        elif is_uninitialized(ma) and is_uninitialized(mb):
            self.clamp = "lp"
            self.floor = self.group.negate(self.group.least_positive)
        else:
            self.clamp = None
        self.ta = build_trail_automaton(ma)
        self.tb = self.ta if mode == "functional" else build_trail_automaton(mb)
        self.missing = {}

    # closure helpers; matrices are lists of rows with None for +infinity

    def _grow(self, D):
        size = len(D)
        M = [list(row) + [None] for row in D]
        M.append([None] * size + [self.zw])
        return M

    def _edge(self, M, a, b, w) -> bool:
        """Add ``x_b - x_a <= w`` to the closed matrix ``M``; False on a negative cycle."""
        add, zw = self.add, self.zw
        if a == b:
            return not w < zw
        back = M[b][a]
        if back is not None and add(back, w) < zw:
            return False
        col_a = [row[a] for row in M]
        row_b = list(M[b])
        for u, du in enumerate(col_a):
            if du is None:
                continue
            base = add(du, w)
            Mu = M[u]
            for v, bv in enumerate(row_b):
                if bv is None:
                    continue
                c = add(base, bv)
                cur = Mu[v]
                if cur is None or c < cur:
                    Mu[v] = c
        return True

    def _atom(self, M, x, rel, y) -> bool:
        g = self.group
        (vx, cx), (vy, cy) = x, y
        if rel == EQ:
            return self._edge(M, vx, vy, CgWeight(g.sub(cx, cy), 0)) and self._edge(
                M, vy, vx, CgWeight(g.sub(cy, cx), 0)
            )
        if rel == GT:
            (vb, cb), (vs, cs) = x, y
        else:
            (vb, cb), (vs, cs) = y, x
        c, e = self.strict
        return self._edge(M, vb, vs, CgWeight(g.add(g.sub(cb, cs), c), e))

    def _guard(self, M, new, guard, regs) -> bool:
        d = (new, self.group.zero)
        return all(self._atom(M, d, rel, r) for rel, r in zip(guard, regs))

    def _copy(self, M):
        return [list(row) for row in M]

    def _after(self, new, t: Transition, regs):
        d = (new, self.group.zero)
        return tuple(d if u != OLD else r for u, r in zip(t.update, regs))

    def _clamp(self, w):
        if w is None or self.clamp is None:
            return w
        if self.clamp == "eps":
            return w if w.eps >= -1 else CgWeight(w.constant, -1)
        return w if w.constant >= self.floor else CgWeight(self.floor, 0)

    def _summarise(self, M, ra, rb):
        live = []
        for v, _ in ra + rb:
            if v != 0 and v not in live:
                live.append(v)
        idx = [0] + live
        remap = {old: new for new, old in enumerate(idx)}
        D = tuple(tuple(self._clamp(M[i][j]) for j in idx) for i in idx)
        return tuple((remap[v], c) for v, c in ra), tuple((remap[v], c) for v, c in rb), D

    def _missing_guards(self, q, label):
        key = (q, label)
        if key not in self.missing:
            present = self.mb.guards_from(q, label)
            self.missing[key] = tuple(g for g in all_guards(self.mb.k) if g not in present)
        return self.missing[key]

    # main loop

    def run(self):
        ra0 = tuple((0, v) for v in self.ma.initial_values)
        rb0 = tuple((0, v) for v in self.mb.initial_values)
        root = (self.ta.initial, self.tb.initial, ra0, rb0, ((self.zw,),))
        self.parent = {root: None}
        level = [root]
        depth = 0
        while level:
            if depth >= self.limit:
                return "limit", None, depth
            nxt = []
            for node in level:
                found = self._expand(node, nxt)
                if found is not None:
                    return "witness", found, depth + 1
                if len(self.parent) > self.max_states:
                    return "budget", None, depth + 1
            level = nxt
            depth += 1
        return "saturated", None, depth

    def _expand(self, node, nxt):
        sa, sb, ra, rb, D = node
        new = len(D)
        for la, tra, tgt_a in self.ta.successors(sa):
            Ma = self._grow(D)
            if not self._guard(Ma, new, tra.guard, ra):
                continue
            ra2 = self._after(new, tra, ra)
            oa = ra2[tra.out_reg - 1]
            for lb, trb, tgt_b in self.tb.successors(sb):
                if lb.label != la.label:
                    continue
                Mab = self._copy(Ma)
                if not self._guard(Mab, new, trb.guard, rb):
                    continue
                rb2 = self._after(new, trb, rb)
                ob = rb2[trb.out_reg - 1]
                if la.out_label != lb.out_label:
                    return (node, tra, trb, "label")
                for kind, rel in (("lt", LT), ("gt", GT)):
                    Mk = self._copy(Mab)
                    if self._atom(Mk, oa, rel, ob):
                        return (node, tra, trb, kind)
                if not self._atom(Mab, oa, EQ, ob):
                    continue
                ra3, rb3, D2 = self._summarise(Mab, ra2, rb2)
                child = (tgt_a, tgt_b, ra3, rb3, D2)
                if child not in self.parent:
                    self.parent[child] = (node, tra, trb)
                    nxt.append(child)
            if self.mode == "inclusion":
                for g in self._missing_guards(sb[0], la.label):
                    Ms = self._copy(Ma)
                    if self._guard(Ms, new, g, rb):
                        return (node, tra, g, "stuck")
        return None

    def path_to(self, node):
        moves = []
        while self.parent[node] is not None:
            node, a, b = self.parent[node]
            moves.append((a, b))
        moves.reverse()
        return moves


def _solve_witness(search: _PairSearch, found):
    node, tra, last_b, kind = found
    moves = search.path_to(node)
    path_a = [a for a, _ in moves] + [tra]
    path_b = [b for _, b in moves] + ([] if kind == "stuck" else [last_b])
    trail_a = [trail_letter(t) for t in path_a]
    trail_b = [trail_letter(t) for t in path_b]
    g = build_constraint_graph(
        search.ma, trail_a, trail_b, kind, second=search.mb,
        stuck_guard=last_b if kind == "stuck" else None,
    )
    values = solve_assignment(g)
    word = input_word_from(trail_a, values)
    return word, tuple(path_a), tuple(path_b)


def _run_along(m, word, path):
    for r in run_word(m, word):
        if r.transitions == path:
            return r
    raise AssertionError("witness does not replay along the expected transitions")


def _report(search, outcome, found, depth, bound, formula, trust_bound, theoretical, replay):
    states = len(search.parent)
    if outcome == "witness":
        return WitnessReport(NO, replay(found), depth, states, bound, formula)
    if outcome == "saturated":
        return WitnessReport(YES, None, depth, states, bound, formula)
    if outcome == "limit" and trust_bound and bound >= theoretical:
        return WitnessReport(YES, None, depth, states, bound, formula)
    return WitnessReport(EXHAUSTED, None, depth, states, bound, formula)


def _limit(theoretical, max_bound, trust_bound):
    cap = DEFAULT_MAX_BOUND if max_bound is None else int(max_bound)
    if cap < 0:
        raise ValueError("max_bound must be non-negative")
    return min(theoretical, cap) if trust_bound else cap


def check_functionality(
    m: Srt,
    max_bound: Optional[int] = None,
    *,
    max_states: int = DEFAULT_MAX_STATES,
    trust_bound: bool = True,
) -> WitnessReport:
    """Does every input have at most one output?

    ``max_bound`` caps the witness length searched (default
    ``DEFAULT_MAX_BOUND``); a cap below the theoretical bound that leaves
    the search unfinished reports ``bound-exhausted``. With
    ``trust_bound=False`` the theoretical bound is ignored and the search
    goes up to ``max_bound`` anyway.
    """
    ensure_valid(m)
    if is_deterministic(m):
        return WitnessReport(YES, None, 0, 0, 0, "deterministic")
    if not is_add_free(m):
        raise UnsupportedMachine(
            "functionality is undecidable once add updates are allowed "
            "(two-counter machines reduce to it); only add-free machines are supported"
        )
    theoretical, formula = _bound(m)
    limit = _limit(theoretical, max_bound, trust_bound)
    search = _PairSearch(m, m, "functional", limit, max_states)
    outcome, found, depth = search.run()

    def replay(found):
        word, path_a, path_b = _solve_witness(search, found)
        run_a, run_b = _run_along(m, word, path_a), _run_along(m, word, path_b)
        if not (run_a.complete and run_b.complete) or run_a.output_word == run_b.output_word:
            raise AssertionError("functionality witness failed to replay")
        return Witness(word, run_a.output_word, run_b.output_word, found[3], m.group)

    return _report(search, outcome, found, depth, limit, formula, trust_bound, theoretical, replay)


def _require_dsrt_a(*machines):
    for m in machines:
        ensure_valid(m)
        if not is_add_free(m) or not is_deterministic(m):
            raise UnsupportedMachine("inclusion and reactivity need deterministic add-free machines")


def check_inclusion(
    m1: Srt,
    m2: Srt,
    max_bound: Optional[int] = None,
    *,
    max_states: int = DEFAULT_MAX_STATES,
    trust_bound: bool = True,
) -> WitnessReport:
    """Is every input/output instance of ``m1`` also one of ``m2``?

    A witness is an input on which both machines agree up to the last
    letter, where ``m2`` either gets stuck or emits something else.
    """
    _require_dsrt_a(m1, m2)
    same_group(m1, m2)
    theoretical, formula = _bound(m1, m2)
    limit = _limit(theoretical, max_bound, trust_bound)
    search = _PairSearch(m1, m2, "inclusion", limit, max_states)
    outcome, found, depth = search.run()

    def replay(found):
        word, path_a, path_b = _solve_witness(search, found)
        run_a = _run_along(m1, word, path_a)
        if not run_a.complete:
            raise AssertionError("inclusion witness: first machine does not read the word")
        if any(r.output_word == run_a.output_word for r in complete_runs(m2, word)):
            raise AssertionError("inclusion witness: second machine reproduces the instance")
        runs_b = run_word(m2, word)
        out_b = runs_b[0].output_word if runs_b else ()
        return Witness(word, run_a.output_word, out_b, found[3], m1.group)

    return _report(search, outcome, found, depth, limit, formula, trust_bound, theoretical, replay)


# -- reactivity ---------------------------------------------------------------------------

BOTTOM = "⊥"


def _fresh(name, taken):
    while name in taken:
        name += "'"
    return name


def extension_machine(m: Srt) -> Srt:
    """The totalised machine used to reduce reactivity to inclusion.

    Every missing ``(state, label, guard)`` leads to a fresh sink state that
    emits a fresh label forever. The emitted value 0 is held in one extra
    register that is never updated.
    """
    ensure_valid(m)
    sink = _fresh(BOTTOM, m.states)
    bottom = _fresh(BOTTOM, m.out_labels)
    k = m.k
    zero_reg = k + 1
    transitions = []
    for t in m.transitions:
        for c in (GT, EQ, LT):
            transitions.append(t._replace(guard=t.guard + c, update=t.update + OLD))
    idle = OLD * (k + 1)
    for q in sorted(m.states, key=repr):
        for a in sorted(m.in_labels, key=repr):
            present = m.guards_from(q, a)
            for g in all_guards(k):
                if g not in present:
                    for c in (GT, EQ, LT):
                        transitions.append(Transition(q, a, g + c, idle, zero_reg, bottom, sink))
    for a in m.in_labels:
        for g in all_guards(k + 1):
            transitions.append(Transition(sink, a, g, idle, zero_reg, bottom, sink))
    return Srt(
        in_labels=m.in_labels,
        out_labels=m.out_labels | {bottom},
        group=m.group,
        states=m.states | {sink},
        initial_state=m.initial_state,
        registers=k + 1,
        initial_values=m.initial_values + (m.group.zero,),
        transitions=transitions,
    )


def is_total(m: Srt) -> bool:
    """Every ``(state, label, guard)`` has a transition, so the machine can never get stuck."""
    full = len(all_guards(m.k))
    return all(len(m.guards_from(q, a)) == full for q in m.states for a in m.in_labels)


def check_reactivity(
    m: Srt,
    max_bound: Optional[int] = None,
    *,
    max_states: int = DEFAULT_MAX_STATES,
    trust_bound: bool = True,
) -> WitnessReport:
    """Can the machine always read one more letter?

    Machines with a transition for every ``(state, label, guard)`` are
    reactive outright, add updates or not. Otherwise the machine must be
    deterministic and add-free, and the question becomes whether the
    totalised machine is included in it; the witness input drives ``m``
    into a stuck configuration.
    """
    ensure_valid(m)
    if is_total(m):
        return WitnessReport(YES, None, 0, 0, 0, "total transition table")
    _require_dsrt_a(m)
    return check_inclusion(
        extension_machine(m), m, max_bound, max_states=max_states, trust_bound=trust_bound
    )

