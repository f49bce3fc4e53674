"""Trails: runs with the data values erased.

A weak ordering of ``k`` registers is stored as a *rank vector*: ``w[i]`` is the
index of the equivalence class of register ``i + 1``, classes numbered from
the lowest upwards with no gaps. ``(0, 1)`` is ``{1} < {2}``, ``(0, 0)`` is
``{1, 2}`` and ``(1, 0)`` is ``{2} < {1}``.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Hashable, NamedTuple, Sequence

from .domain import EQ, GT, LT, canonical_key, jsonable
from .execution import Run
from .machine import ADD, NEW, OLD, Srt, ensure_valid


class TrailLetter(NamedTuple):
    label: Hashable
    guard: str
    update: str
    out_reg: int
    out_label: Hashable


def trail_letter(t) -> TrailLetter:
    return TrailLetter(t.label, t.guard, t.update, t.out_reg, t.out_label)


# -- weak orderings ---------------------------------------------------------------------


def _dense_ranks(keys: Sequence) -> tuple:
    order = sorted(set(keys))
    pos = {key: i for i, key in enumerate(order)}
    return tuple(pos[key] for key in keys)


def weak_orderings(k: int) -> list[tuple]:
    """All weak orderings of ``k`` registers (ordered Bell number many)."""
    if k == 0:
        return [()]
    return [w for w in itertools.product(range(k), repeat=k) if set(w) == set(range(max(w) + 1))]


def ordered_bell(k: int) -> int:
    # a(n) = sum_{i=1..n} C(n, i) a(n - i)
    a = [1]
    for n in range(1, k + 1):
        a.append(sum(_binom(n, i) * a[n - i] for i in range(1, n + 1)))
    return a[k]


def _binom(n, r):
    from math import comb

    return comb(n, r)


def ordering_of(values: Sequence) -> tuple:
    """The weak ordering realised by concrete register values."""
    return _dense_ranks(list(values))


def ordering_classes(w: Sequence[int]) -> list[list[int]]:
    """Rank vector to an ordered partition of 1-based register indices."""
    if not w:
        return []
    return [[i + 1 for i, r in enumerate(w) if r == c] for c in range(max(w) + 1)]


def ordering_from_classes(classes: Sequence[Sequence[int]]) -> tuple:
    k = sum(len(c) for c in classes)
    w = [None] * k
    for rank, cls in enumerate(classes):
        for reg in cls:
            w[reg - 1] = rank
    return tuple(w)


def input_position(w: Sequence[int], guard: str):
    """Where the input sits among the register classes, as a rank key.

    An integer ``r`` means equal to class ``r``; ``r + 0.5`` means strictly
    between classes ``r`` and ``r + 1``. ``None`` if the guard is not
    satisfiable under ``w`` in a dense order.
    """
    eq = {w[i] for i, c in enumerate(guard) if c == EQ}
    below = [w[i] for i, c in enumerate(guard) if c == GT]
    above = [w[i] for i, c in enumerate(guard) if c == LT]
    if len(eq) > 1:
        return None
    if eq:
        (r,) = eq
        if any(b >= r for b in below) or any(a <= r for a in above):
            return None
        return r
    lo = max(below) if below else -1
    hi = min(above) if above else len(w) + 1
    if lo >= hi:
        return None
    return lo + 0.5


def guard_compatible(w: Sequence[int], guard: str) -> bool:
    """Can some input value satisfy ``guard`` when the registers are ordered as ``w``?

    Dense semantics: a strict gap between two register classes is assumed to
    contain a value.
    """
    return input_position(w, guard) is not None


def update_ordering(w: Sequence[int], guard: str, update: str) -> frozenset:
    """Successor orderings after applying ``update`` to registers ordered as ``w``.

    Without ``add`` the successor is unique. Registers updated with ``add``
    may land anywhere: every ordering that keeps the relations among the
    remaining registers is returned.
    """
    pos = input_position(w, guard)
    if pos is None:
        return frozenset()
    keys = [pos if u == NEW else w[i] for i, u in enumerate(update)]
    if ADD not in update:
        return frozenset([_dense_ranks(keys)])
    fixed = [i for i, u in enumerate(update) if u != ADD]
    fixed_order = _dense_ranks([keys[i] for i in fixed])
    return frozenset(
        cand
        for cand in weak_orderings(len(w))
        if _dense_ranks([cand[i] for i in fixed]) == fixed_order
    )


# -- trail automaton --------------------------------------------------------------------


@dataclass(frozen=True)
class TrailAutomaton:
    """Finite automaton over trail letters; states are ``(q, ordering)``, all accepting."""

    machine: Srt
    initial: tuple
    states: frozenset
    edges: dict  # state -> tuple of (TrailLetter, Transition, target state)

    def successors(self, state) -> tuple:
        return self.edges.get(state, ())

    def reach(self, trail: Sequence[TrailLetter]) -> frozenset:
        current = {self.initial}
        for letter in trail:
            current = {tgt for s in current for lt, _, tgt in self.successors(s) if lt == letter}
            if not current:
                break
        return frozenset(current)

    def accepts(self, trail: Sequence[TrailLetter]) -> bool:
        return bool(self.reach(trail))

    def to_json(self) -> dict:
        def st(s):
            return {"state": jsonable(s[0]), "ordering": ordering_classes(s[1])}

        edges = []
        for src in sorted(self.edges, key=canonical_key):
            for lt, _, tgt in self.edges[src]:
                edges.append(
                    {
                        "from": st(src),
                        "letter": {
                            "label": jsonable(lt.label),
                            "guard": lt.guard,
                            "update": lt.update,
                            "out_reg": lt.out_reg,
                            "out_label": jsonable(lt.out_label),
                        },
                        "to": st(tgt),
                    }
                )
        return {
            "initial": st(self.initial),
            "states": [st(s) for s in sorted(self.states, key=canonical_key)],
            "transitions": edges,
        }

    def to_dot(self) -> str:
        names = {s: f"s{i}" for i, s in enumerate(sorted(self.states, key=canonical_key))}
        lines = ["digraph trails {", "  rankdir=LR;", '  __start [shape=point];']
        for s, name in names.items():
            classes = "<".join("{" + ",".join(map(str, c)) + "}" for c in ordering_classes(s[1]))
            label = f"{s[0]}\\n{classes}".replace('"', '\\"')
            lines.append(f'  {name} [shape=doublecircle, label="{label}"];')
        lines.append(f"  __start -> {names[self.initial]};")
        for src in sorted(self.edges, key=canonical_key):
            for lt, _, tgt in self.edges[src]:
                label = f"{lt.label}/{lt.guard}/{lt.update}/{lt.out_reg}/{lt.out_label}"
                label = label.replace('"', '\\"')
                lines.append(f'  {names[src]} -> {names[tgt]} [label="{label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_trail_automaton(m: Srt) -> TrailAutomaton:
    ensure_valid(m)
    init = (m.initial_state, ordering_of(m.initial_values))
    seen = {init}
    edges = {}
    queue = deque([init])
    while queue:
        state = queue.popleft()
        q, w = state
        out = []
        for t in m.transitions_from(q):
            if not guard_compatible(w, t.guard):
                continue
            for w2 in sorted(update_ordering(w, t.guard, t.update)):
                tgt = (t.target, w2)
                out.append((trail_letter(t), t, tgt))
                if tgt not in seen:
                    seen.add(tgt)
                    queue.append(tgt)
        if out:
            edges[state] = tuple(out)
    return TrailAutomaton(m, init, frozenset(seen), edges)


def corresponding_trail(run: Run) -> tuple:
    return tuple(trail_letter(s.transition) for s in run.steps)


# -- register reconstruction ------------------------------------------------------------


def p_set(trail: Sequence[TrailLetter], i: int, j: int) -> frozenset:
    """Positions whose inputs sum to register ``j`` (1-based) after ``i`` steps.

    ``-1`` stands for the initial value: it is present when register ``j``
    was not overwritten by ``new`` in the first ``i`` steps.
    """
    if not 0 <= i <= len(trail):
        raise IndexError(f"step {i} out of range for a trail of length {len(trail)}")
    if not trail:
        if j < 1:
            raise IndexError(f"register {j} out of range")
        return frozenset([-1])
    k = len(trail[0].update)
    if not 1 <= j <= k:
        raise IndexError(f"register {j} out of range 1..{k}")
    members = []
    for n in range(i - 1, -1, -1):
        u = trail[n].update[j - 1]
        if u != OLD:
            members.append(n)
        if u == NEW:
            return frozenset(members)
    members.append(-1)
    return frozenset(members)


def reconstruct_register(trail, word, initial_values, i: int, j: int, group):
    """Register ``j`` (1-based) after ``i`` steps, computed from the trail and the input only."""
    if i > len(word):
        raise IndexError(f"step {i} beyond input of length {len(word)}")
    total = group.zero
    for e in sorted(p_set(trail, i, j)):
        total = group.add(total, initial_values[j - 1] if e < 0 else word[e][1])
    return total


def is_dead_state(ta: TrailAutomaton, state) -> bool:
    return not ta.successors(state)


def is_dead(ta: TrailAutomaton, trail: Sequence[TrailLetter]) -> bool:
    """True iff no accepted extension of ``trail`` exists."""
    reached = ta.reach(trail)
    if not reached:
        raise ValueError("trail is not accepted by the trail automaton")
    return all(is_dead_state(ta, s) for s in reached)
