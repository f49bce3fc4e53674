"""Union, intersection and add-free composition of streaming register transducers."""
from __future__ import annotations

from collections import deque

from .domain import EQ, GT, LT
from .machine import (
    NEW,
    OLD,
    Srt,
    Transition,
    all_guards,
    ensure_valid,
    is_add_free,
    same_group,
)
from .trails import ordering_of

FLIP = {GT: LT, LT: GT, EQ: EQ}


def _rel(a, b) -> str:
    return GT if a > b else (EQ if a == b else LT)


def union(m1: Srt, m2: Srt) -> Srt:
    """A machine whose transformation is the union of both.

    States are tagged ``(1, q)`` / ``(2, q)`` plus a fresh initial state
    ``(0, "init")`` that copies the initial transitions of both machines.
    Registers ``1..k1`` belong to ``m1``, ``k1+1..k1+k2`` to ``m2``; each
    side's guards accept any comparison on the other side's registers.
    """
    ensure_valid(m1)
    ensure_valid(m2)
    group = same_group(m1, m2)
    k1, k2 = m1.registers, m2.registers
    init = (0, "init")
    transitions = []
    for t in m1.transitions:
        for pad in all_guards(k2):
            ext = (t.label, t.guard + pad, t.update + OLD * k2, t.out_reg, t.out_label, (1, t.target))
            transitions.append(Transition((1, t.source), *ext))
            if t.source == m1.initial_state:
                transitions.append(Transition(init, *ext))
    for t in m2.transitions:
        for pad in all_guards(k1):
            ext = (t.label, pad + t.guard, OLD * k1 + t.update, t.out_reg + k1, t.out_label, (2, t.target))
            transitions.append(Transition((2, t.source), *ext))
            if t.source == m2.initial_state:
                transitions.append(Transition(init, *ext))
    return Srt(
        in_labels=m1.in_labels | m2.in_labels,
        out_labels=m1.out_labels | m2.out_labels,
        group=group,
        states={init} | {(1, q) for q in m1.states} | {(2, q) for q in m2.states},
        initial_state=init,
        registers=k1 + k2,
        initial_values=m1.initial_values + m2.initial_values,
        transitions=transitions,
    )


def _require_add_free(*machines, what):
    for m in machines:
        if not is_add_free(m):
            raise ValueError(f"{what} requires add-free operands")


def _consistent(n: int, relations) -> bool:
    """Are the ``(a, rel, b)`` constraints over ``n`` points satisfiable in a linear order?"""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    strict = []
    for a, rel, b in relations:
        if rel == EQ:
            parent[find(a)] = find(b)
        elif rel == LT:
            strict.append((a, b))
        else:
            strict.append((b, a))
    succ = {}
    for a, b in strict:
        a, b = find(a), find(b)
        if a == b:
            return False
        succ.setdefault(a, set()).add(b)
    # acyclicity of the strict relation between classes
    state = {}
    for root in list(succ):
        if state.get(root):
            continue
        stack = [(root, iter(succ.get(root, ())))]
        state[root] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[node] = 2
                stack.pop()
            elif state.get(nxt) == 1:
                return False
            elif not state.get(nxt):
                state[nxt] = 1
                stack.append((nxt, iter(succ.get(nxt, ()))))
    return True


def intersection(m1: Srt, m2: Srt) -> Srt:
    """A machine whose transformation is the intersection of both.

    States are ``(q1, q2, array)`` where ``array`` is a ``k1 * k2`` string
    (row-major) holding the comparison of each ``m1`` register with each
    ``m2`` register. Only reachable states are built.
    """
    ensure_valid(m1)
    ensure_valid(m2)
    group = same_group(m1, m2)
    _require_add_free(m1, m2, what="intersection")
    k1, k2 = m1.registers, m2.registers
    array0 = "".join(_rel(a, b) for a in m1.initial_values for b in m2.initial_values)
    init = (m1.initial_state, m2.initial_state, array0)
    seen = {init}
    queue = deque([init])
    transitions = []
    while queue:
        state = queue.popleft()
        q1, q2, arr = state
        base = [(i, arr[i * k2 + j], k1 + j) for i in range(k1) for j in range(k2)]
        for t1 in m1.transitions_from(q1):
            for t2 in m2.transitions_from(q2):
                if t1.label != t2.label or t1.out_label != t2.out_label:
                    continue
                d = k1 + k2
                rels = base + [(d, c, i) for i, c in enumerate(t1.guard)]
                rels += [(d, c, k1 + j) for j, c in enumerate(t2.guard)]
                if not _consistent(k1 + k2 + 1, rels):
                    continue
                new_arr = []
                for i in range(k1):
                    for j in range(k2):
                        n1, n2 = t1.update[i] == NEW, t2.update[j] == NEW
                        if n1 and n2:
                            new_arr.append(EQ)
                        elif n1:
                            new_arr.append(t2.guard[j])
                        elif n2:
                            new_arr.append(FLIP[t1.guard[i]])
                        else:
                            new_arr.append(arr[i * k2 + j])
                new_arr = "".join(new_arr)
                if new_arr[(t1.out_reg - 1) * k2 + (t2.out_reg - 1)] != EQ:
                    continue
                target = (t1.target, t2.target, new_arr)
                transitions.append(
                    Transition(state, t1.label, t1.guard + t2.guard, t1.update + t2.update,
                               t1.out_reg, t1.out_label, target)
                )
                if target not in seen:
                    seen.add(target)
                    queue.append(target)
    return Srt(
        in_labels=m1.in_labels | m2.in_labels,
        out_labels=m1.out_labels | m2.out_labels,
        group=group,
        states=seen,
        initial_state=init,
        registers=k1 + k2,
        initial_values=m1.initial_values + m2.initial_values,
        transitions=transitions,
    )


def _positions(w):
    """Every place an input value can take relative to the classes of ``w``."""
    classes = max(w) + 1 if w else 0
    out = [c - 0.5 for c in range(classes + 1)]
    out += list(range(classes))
    return sorted(out)


def _guard_at(w, pos) -> str:
    return "".join(GT if pos > r else (EQ if pos == r else LT) for r in w)


def compose_add_free(m1: Srt, m2: Srt) -> Srt:
    """A machine for the composition: ``m1``'s output is fed to ``m2``.

    The product has ``k1 + k2`` physical registers ("slots"). Add-free
    updates cannot copy one register into another, so each logical register
    of ``m1`` and ``m2`` points at a slot and a state records

    ``(q1, q2, slots_of_m1, slots_of_m2, ordering_of_all_slots)``.

    Reading an input writes it into one free slot when some logical register
    takes it; ``m2`` receiving an old ``m1`` register value just shares that
    slot. The slot ordering is exact, so ``m2``'s guard on a register value
    is decided in the finite state while guards on the input itself are
    checked by the product guard.
    """
    ensure_valid(m1)
    ensure_valid(m2)
    group = same_group(m1, m2)
    _require_add_free(m1, m2, what="composition")
    k1, k2 = m1.registers, m2.registers
    n = k1 + k2
    values0 = m1.initial_values + m2.initial_values
    init = (m1.initial_state, m2.initial_state, tuple(range(k1)), tuple(range(k1, n)), ordering_of(values0))
    seen = {init}
    queue = deque([init])
    transitions = []
    while queue:
        state = queue.popleft()
        q1, q2, map1, map2, w = state
        for pos in _positions(w):
            g = _guard_at(w, pos)
            g1 = "".join(g[s] for s in map1)
            for a in sorted(m1.in_labels, key=repr):
                for t1 in m1.index.get((q1, a, g1), ()):
                    # m1's output: "d" for the fresh input, else a slot index
                    o1 = t1.out_reg - 1
                    v = "d" if t1.update[o1] == NEW else map1[o1]
                    if v == "d":
                        g2 = "".join(g[s] for s in map2)
                    else:
                        g2 = "".join(_rel(w[v], w[s]) for s in map2)
                    for t2 in m2.index.get((q2, t1.out_label, g2), ()):
                        logical = [
                            ("d" if t1.update[i] == NEW else map1[i]) for i in range(k1)
                        ] + [(v if t2.update[j] == NEW else map2[j]) for j in range(k2)]
                        kept = {s for s in logical if s != "d"}
                        slot_d = None
                        if "d" in logical:
                            slot_d = min(s for s in range(n) if s not in kept)
                        logical = [slot_d if s == "d" else s for s in logical]
                        upd = "".join(NEW if s == slot_d else OLD for s in range(n))
                        keys = [pos if s == slot_d else w[s] for s in range(n)]
                        w2 = ordering_of(keys)
                        out_slot = logical[k1 + t2.out_reg - 1]
                        target = (t1.target, t2.target, tuple(logical[:k1]), tuple(logical[k1:]), w2)
                        transitions.append(
                            Transition(state, a, g, upd, out_slot + 1, t2.out_label, target)
                        )
                        if target not in seen:
                            seen.add(target)
                            queue.append(target)
    return Srt(
        in_labels=m1.in_labels,
        out_labels=m2.out_labels,
        group=group,
        states=seen,
        initial_state=init,
        registers=n,
        initial_values=values0,
        transitions=transitions,
    )


def compose(m1: Srt, m2: Srt) -> Srt:
    return compose_add_free(m1, m2)
