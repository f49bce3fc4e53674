"""Difference-constraint graphs with infinitesimal-aware weights.

An edge ``u -> v`` with weight ``w`` encodes ``x_v - x_u <= w``. Weights are
``CgWeight(constant, eps)`` standing for ``constant + eps * epsilon`` with
``epsilon`` a positive infinitesimal; they compare lexicographically. Strict
inequalities weigh ``-epsilon`` over dense groups and minus the least
positive element over discrete ones.
"""
from __future__ import annotations

from typing import Any, Hashable, NamedTuple

from .domain import EQ, GT, LT, GroupDescriptor
from .machine import is_add_free
from .trails import ordering_of, p_set, update_ordering

ZERO = "zero"


class CgWeight(NamedTuple):
    constant: Any
    eps: int = 0


class Term(NamedTuple):
    """``x_vertex + offset``; constants are terms on the ``zero`` vertex."""

    vertex: Hashable
    offset: Any


class Edge(NamedTuple):
    source: Hashable
    target: Hashable
    weight: CgWeight


def weight_adder(group: GroupDescriptor):
    if group.kind == "lex":
        add = group.add
        return lambda a, b: CgWeight(add(a[0], b[0]), a[1] + b[1])
    return lambda a, b: CgWeight(a[0] + b[0], a[1] + b[1])


def strict_weight(group: GroupDescriptor) -> CgWeight:
    if group.dense:
        return CgWeight(group.zero, -1)
    return CgWeight(group.negate(group.least_positive), 0)


def is_negative(w: CgWeight, group: GroupDescriptor) -> bool:
    return w < CgWeight(group.zero, 0)


class ConstraintGraph:
    def __init__(self, group: GroupDescriptor):
        self.group = group
        self.vertices: list = [ZERO]
        self._known = {ZERO}
        self.edges: list[Edge] = []
        self.atoms: list = []
        self.strict = strict_weight(group)

    def __repr__(self):
        return f"ConstraintGraph({len(self.vertices)} vertices, {len(self.edges)} edges)"

    def var(self, v) -> Term:
        self.add_vertex(v)
        return Term(v, self.group.zero)

    def const(self, c) -> Term:
        return Term(ZERO, c)

    def add_vertex(self, v):
        if v not in self._known:
            self._known.add(v)
            self.vertices.append(v)

    def add_edge(self, u, v, weight: CgWeight):
        self.add_vertex(u)
        self.add_vertex(v)
        self.edges.append(Edge(u, v, CgWeight(*weight)))

    def constrain(self, x: Term, rel: str, y: Term):
        """Record ``x rel y`` and add the edges that encode it."""
        g = self.group
        self.atoms.append((x, rel, y))
        if rel == EQ:
            # x_vy - x_vx <= cx - cy and the reverse
            self.add_edge(x.vertex, y.vertex, CgWeight(g.sub(x.offset, y.offset), 0))
            self.add_edge(y.vertex, x.vertex, CgWeight(g.sub(y.offset, x.offset), 0))
        elif rel in (GT, LT):
            big, small = (x, y) if rel == GT else (y, x)
            # small < big:  x_vsmall - x_vbig <= cbig - csmall - strict
            c, e = self.strict
            w = CgWeight(g.add(g.sub(big.offset, small.offset), c), e)
            self.add_edge(big.vertex, small.vertex, w)
        else:
            raise ValueError(f"unknown relation {rel!r}")

    def cycle_weight(self, cycle) -> CgWeight:
        add = weight_adder(self.group)
        total = CgWeight(self.group.zero, 0)
        for e in cycle:
            total = add(total, e.weight)
        return total


def _bellman_ford(g: ConstraintGraph):
    """Potentials from a virtual source, or the vertex relaxed in the extra pass."""
    add = weight_adder(g.group)
    zero_w = CgWeight(g.group.zero, 0)
    dist = {v: zero_w for v in g.vertices}
    pred: dict = {}
    n = len(g.vertices)
    for it in range(n + 1):
        changed = None
        for e in g.edges:
            cand = add(dist[e.source], e.weight)
            if cand < dist[e.target]:
                dist[e.target] = cand
                pred[e.target] = e
                changed = e.target
        if changed is None:
            return dist, pred, None
    return dist, pred, changed


def find_negative_cycle(g: ConstraintGraph):
    """A list of edges forming a negative-weight cycle, or ``None``."""
    _, pred, changed = _bellman_ford(g)
    if changed is None:
        return None
    v = changed
    for _ in range(len(g.vertices)):
        v = pred[v].source
    cycle = []
    x = v
    while True:
        e = pred[x]
        cycle.append(e)
        x = e.source
        if x == v:
            break
    cycle.reverse()
    return cycle


def has_negative_cycle(g: ConstraintGraph) -> bool:
    return find_negative_cycle(g) is not None


class Infeasible(ValueError):
    pass


def term_value(t: Term, values: dict, group: GroupDescriptor):
    return group.add(values[t.vertex], t.offset)


def atom_holds(atom, values: dict, group: GroupDescriptor) -> bool:
    x, rel, y = atom
    a, b = term_value(x, values, group), term_value(y, values, group)
    return {GT: a > b, EQ: a == b, LT: a < b}[rel]


def solve_assignment(g: ConstraintGraph) -> dict:
    """Concrete values for every vertex (``zero`` maps to 0) satisfying all constraints.

    Shortest-path potentials give ``constant + eps * epsilon`` per vertex; a
    concrete epsilon is then picked small enough for every edge. The result
    is re-checked against the recorded atoms before it is returned.
    """
    group = g.group
    dist, _, changed = _bellman_ford(g)
    if changed is not None:
        raise Infeasible("constraint graph has a negative-weight cycle")
    base = dist[ZERO]
    pot = {
        v: (group.sub(d.constant, base.constant), d.eps - base.eps) for v, d in dist.items()
    }
    eps = None
    for edge in g.edges:
        cu, eu = pot[edge.source]
        cv, ev = pot[edge.target]
        slack = group.sub(group.add(cu, edge.weight.constant), cv)
        coef = ev - eu - edge.weight.eps
        if slack > group.zero and coef > 0:
            if not group.dense:
                raise AssertionError("discrete constraint graphs never carry epsilon terms")
            cand = group.fraction_below(slack, coef)
            if eps is None or cand < eps:
                eps = cand
    if eps is None:
        eps = group.unit
    values = {}
    for v, (c, e) in pot.items():
        values[v] = group.add(c, group.times(eps, e)) if e else c
    for atom in g.atoms:
        if not atom_holds(atom, values, group):
            raise AssertionError(f"assignment violates {atom!r}")
    for edge in g.edges:
        lhs = group.sub(values[edge.target], values[edge.source])
        c, e = edge.weight
        rhs = group.add(c, group.times(eps, e)) if e else c
        if not lhs <= rhs:
            raise AssertionError(f"assignment violates edge {edge!r}")
    return values


# -- graphs for pairs of trails ---------------------------------------------------------

DIVERGENCES = ("label", "lt", "gt", "stuck", None)


def _orderings_along(m, trail) -> list:
    w = ordering_of(m.initial_values)
    out = [w]
    for i, letter in enumerate(trail):
        nxt = update_ordering(w, letter.guard, letter.update)
        if len(nxt) != 1:
            raise ValueError(f"trail is not accepted: guard {letter.guard!r} at position {i} "
                             f"contradicts the register ordering {w!r}")
        (w,) = nxt
        out.append(w)
    return out


def _register_term(m, trail, i: int, j: int) -> Term:
    (p,) = p_set(trail, i, j)
    return Term(ZERO, m.initial_values[j - 1]) if p < 0 else Term(p, m.group.zero)


def _add_trail(g: ConstraintGraph, m, trail, out_upto: int):
    """Guards and register orderings of one trail; returns output terms for steps ``< out_upto``."""
    for i, letter in enumerate(trail):
        g.add_vertex(i)
        for j, rel in enumerate(letter.guard, start=1):
            g.constrain(Term(i, g.group.zero), rel, _register_term(m, trail, i, j))
    ws = _orderings_along(m, trail)
    for i in range(1, len(trail) + 1):
        w = ws[i]
        terms = [_register_term(m, trail, i, j) for j in range(1, m.registers + 1)]
        for a in range(len(terms)):
            for b in range(a + 1, len(terms)):
                if terms[a].vertex == ZERO and terms[b].vertex == ZERO:
                    continue
                rel = GT if w[a] > w[b] else (EQ if w[a] == w[b] else LT)
                g.constrain(terms[a], rel, terms[b])
    return [_register_term(m, trail, i + 1, trail[i].out_reg) for i in range(out_upto)]


def build_constraint_graph(m, trail_a, trail_b, divergence=None, second=None, stuck_guard=None):
    """Constraints on input values realising both trails over one input word.

    Outputs must agree (label and value) on every position but the last,
    where ``divergence`` applies: ``"label"`` (labels differ), ``"lt"`` or
    ``"gt"`` (output of ``trail_a`` below or above that of ``trail_b``), or
    ``"stuck"``: ``trail_b`` is one letter shorter and its machine has no
    transition for ``stuck_guard`` on the last input. ``None`` asks for
    agreement everywhere. ``second`` is the machine of ``trail_b`` (default
    ``m``). Both machines must be add-free.
    """
    mb = m if second is None else second
    if divergence not in DIVERGENCES:
        raise ValueError(f"unknown divergence {divergence!r}")
    for mm in (m, mb):
        if not is_add_free(mm):
            raise ValueError("constraint graphs need add-free machines")
    trail_a, trail_b = tuple(trail_a), tuple(trail_b)
    n = len(trail_a)
    expected = n - 1 if divergence == "stuck" else n
    if len(trail_b) != expected:
        raise ValueError(f"trail lengths {n} and {len(trail_b)} do not match divergence {divergence!r}")
    if divergence == "stuck" and stuck_guard is None:
        raise ValueError("stuck divergence needs the missing guard")
    for i in range(len(trail_b)):
        if trail_a[i].label != trail_b[i].label:
            raise ValueError(f"input labels differ at position {i}")
    g = ConstraintGraph(m.group)
    out_a = _add_trail(g, m, trail_a, n)
    out_b = _add_trail(g, mb, trail_b, len(trail_b))
    agree = n if divergence is None else n - 1
    for i in range(agree):
        if trail_a[i].out_label != trail_b[i].out_label:
            raise ValueError(f"output labels differ at position {i}")
        g.constrain(out_a[i], EQ, out_b[i])
    if n and divergence == "label" and trail_a[-1].out_label == trail_b[-1].out_label:
        raise ValueError("last output labels coincide")
    if divergence in ("lt", "gt"):
        if trail_a[-1].out_label != trail_b[-1].out_label:
            raise ValueError("last output labels differ; use the label divergence")
        g.constrain(out_a[-1], LT if divergence == "lt" else GT, out_b[-1])
    if divergence == "stuck":
        if len(stuck_guard) != mb.registers:
            raise ValueError("stuck guard has the wrong width")
        g.add_vertex(n - 1)
        for j, rel in enumerate(stuck_guard, start=1):
            g.constrain(Term(n - 1, g.group.zero), rel, _register_term(mb, trail_b, n - 1, j))
    return g


def input_word_from(trail, values: dict) -> tuple:
    """The data word read along ``trail`` under a solved assignment."""
    return tuple((letter.label, values[i]) for i, letter in enumerate(trail))
