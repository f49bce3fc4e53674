"""Streaming register transducers: the machine tuple, validation, subclasses, JSON."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, NamedTuple

from .domain import (
    EQ,
    GT,
    LT,
    GroupDescriptor,
    IncompatibleGroups,
    canonical_key,
    hashable,
    jsonable,
)

OLD, NEW, ADD = "o", "n", "a"
COMPARISONS = (GT, EQ, LT)
UPDATES = (OLD, NEW, ADD)
SILENT = "#"


class Transition(NamedTuple):
    """``(q, sigma, guard, update, u, gamma, q')``.

    ``guard[i]`` relates the input value to register ``i + 1`` (``">"`` means the
    input is larger). ``out_reg`` is 1-based, as in files and error messages.
    """

    source: Hashable
    label: Hashable
    guard: str
    update: str
    out_reg: int
    out_label: Hashable
    target: Hashable


class InvalidMachine(ValueError):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


def all_guards(k: int) -> list[str]:
    return ["".join(p) for p in itertools.product(COMPARISONS, repeat=k)]


def expand_guard(pattern: str) -> list[str]:
    """Expand ``*`` wildcards in a guard pattern into every concrete guard."""
    choices = [COMPARISONS if c == "*" else (c,) for c in pattern]
    return ["".join(p) for p in itertools.product(*choices)]


@dataclass(frozen=True)
class Srt:
    in_labels: frozenset
    out_labels: frozenset
    group: GroupDescriptor
    states: frozenset
    initial_state: Hashable
    registers: int
    initial_values: tuple
    transitions: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "in_labels", frozenset(self.in_labels))
        object.__setattr__(self, "out_labels", frozenset(self.out_labels))
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(
            self, "initial_values", tuple(self.group.coerce(v) for v in self.initial_values)
        )
        object.__setattr__(
            self, "transitions", frozenset(Transition(*t) for t in self.transitions)
        )

    @property
    def k(self) -> int:
        return self.registers

    @cached_property
    def ordered_transitions(self) -> tuple:
        keys: dict = {}

        def key(x):
            if x not in keys:
                keys[x] = canonical_key(x)
            return keys[x]

        return tuple(
            sorted(
                self.transitions,
                key=lambda t: (key(t.source), key(t.label), key(t.guard), key(t.update),
                               key(t.out_reg), key(t.out_label), key(t.target)),
            )
        )

    @cached_property
    def index(self) -> dict:
        """``(state, label, guard) -> transitions`` in canonical order."""
        idx: dict = {}
        for t in self.ordered_transitions:
            idx.setdefault((t.source, t.label, t.guard), []).append(t)
        return {key: tuple(v) for key, v in idx.items()}

    @cached_property
    def outgoing(self) -> dict:
        out: dict = {}
        for t in self.ordered_transitions:
            out.setdefault(t.source, []).append(t)
        return {q: tuple(v) for q, v in out.items()}

    def transitions_from(self, state) -> tuple:
        return self.outgoing.get(state, ())

    def guards_from(self, state, label) -> frozenset:
        return frozenset(t.guard for t in self.transitions_from(state) if t.label == label)

    def replace(self, **changes) -> "Srt":
        fields = dict(
            in_labels=self.in_labels,
            out_labels=self.out_labels,
            group=self.group,
            states=self.states,
            initial_state=self.initial_state,
            registers=self.registers,
            initial_values=self.initial_values,
            transitions=self.transitions,
        )
        fields.update(changes)
        return Srt(**fields)

    # -- JSON -------------------------------------------------------------------------

    def to_json(self) -> dict:
        g = self.group
        return {
            "in_labels": [jsonable(a) for a in sorted(self.in_labels, key=canonical_key)],
            "out_labels": [jsonable(a) for a in sorted(self.out_labels, key=canonical_key)],
            "group": g.to_json(),
            "states": [jsonable(q) for q in sorted(self.states, key=canonical_key)],
            "initial_state": jsonable(self.initial_state),
            "registers": self.registers,
            "initial_values": [g.value_to_json(v) for v in self.initial_values],
            "transitions": [
                {
                    "from": jsonable(t.source),
                    "label": jsonable(t.label),
                    "guard": t.guard,
                    "update": t.update,
                    "out_reg": t.out_reg,
                    "out_label": jsonable(t.out_label),
                    "to": jsonable(t.target),
                }
                for t in self.ordered_transitions
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, obj: dict) -> "Srt":
        required = (
            "in_labels", "out_labels", "group", "states", "initial_state",
            "registers", "initial_values", "transitions",
        )
        missing = [key for key in required if key not in obj]
        if missing:
            raise ValueError(f"machine JSON is missing {', '.join(missing)}")
        group = GroupDescriptor.from_json(obj["group"])
        transitions = []
        for i, t in enumerate(obj["transitions"]):
            try:
                transitions.append(
                    Transition(
                        hashable(t["from"]), hashable(t["label"]), t["guard"], t["update"],
                        t["out_reg"], hashable(t["out_label"]), hashable(t["to"]),
                    )
                )
            except (KeyError, TypeError) as exc:
                raise ValueError(f"transition {i}: malformed entry {t!r}") from exc
        return cls(
            in_labels=[hashable(a) for a in obj["in_labels"]],
            out_labels=[hashable(a) for a in obj["out_labels"]],
            group=group,
            states=[hashable(q) for q in obj["states"]],
            initial_state=hashable(obj["initial_state"]),
            registers=obj["registers"],
            initial_values=obj["initial_values"],
            transitions=transitions,
        )

    @classmethod
    def loads(cls, text: str) -> "Srt":
        return cls.from_json(json.loads(text))


def make_srt(
    transitions: Iterable,
    *,
    group: GroupDescriptor,
    initial_values=(),
    initial_state="q0",
    states=None,
    in_labels=None,
    out_labels=None,
) -> Srt:
    """Convenience constructor that infers label and state sets from the transitions."""
    transitions = [Transition(*t) for t in transitions]
    initial_values = tuple(initial_values)
    if states is None:
        states = {initial_state} | {t.source for t in transitions} | {t.target for t in transitions}
    if in_labels is None:
        in_labels = {t.label for t in transitions}
    if out_labels is None:
        out_labels = {t.out_label for t in transitions}
    return Srt(
        in_labels=in_labels,
        out_labels=out_labels,
        group=group,
        states=states,
        initial_state=initial_state,
        registers=len(initial_values),
        initial_values=initial_values,
        transitions=transitions,
    )


def validate(m: Srt) -> list[str]:
    """Structural errors of ``m``; an empty list means the machine is well formed."""
    errors = []
    k = m.registers
    if not isinstance(k, int) or isinstance(k, bool) or k < 0:
        return [f"register count must be a natural number, got {k!r}"]
    if m.initial_state not in m.states:
        errors.append(f"initial state {m.initial_state!r} is not a declared state")
    if len(m.initial_values) != k:
        errors.append(
            f"initial register vector length {len(m.initial_values)} does not match k = {k}"
        )
    for v in m.initial_values:
        if not m.group.contains(v):
            errors.append(f"initial value {v!r} is not in group {m.group}")
    for t in m.ordered_transitions:
        where = f"transition {t.source!r} --{t.label!r}/{t.guard}/{t.update}--> {t.target!r}"
        if t.source not in m.states:
            errors.append(f"{where}: unknown source state")
        if t.target not in m.states:
            errors.append(f"{where}: unknown target state")
        if t.label not in m.in_labels:
            errors.append(f"{where}: input label {t.label!r} not declared")
        if t.out_label not in m.out_labels:
            errors.append(f"{where}: output label {t.out_label!r} not declared")
        if not isinstance(t.guard, str) or len(t.guard) != k or set(t.guard) - set(COMPARISONS):
            errors.append(f"{where}: guard must be a string of {k} characters from '>=<'")
        if not isinstance(t.update, str) or len(t.update) != k or set(t.update) - set(UPDATES):
            errors.append(f"{where}: update must be a string of {k} characters from 'ona'")
        if (
            not isinstance(t.out_reg, int)
            or isinstance(t.out_reg, bool)
            or not 1 <= t.out_reg <= k
        ):
            errors.append(f"{where}: output register out of range (got {t.out_reg!r}, k = {k})")
    return errors


def ensure_valid(m: Srt) -> Srt:
    # machines are immutable, so the verdict is cached on the instance
    errors = m.__dict__.get("_errors")
    if errors is None:
        errors = m.__dict__["_errors"] = validate(m)
    if errors:
        raise InvalidMachine(errors)
    return m


def same_group(*machines: Srt) -> GroupDescriptor:
    group = machines[0].group
    for other in machines[1:]:
        if other.group != group:
            raise IncompatibleGroups(
                f"signature mismatch: group {group} vs {other.group}"
            )
    return group


@dataclass(frozen=True)
class SubclassReport:
    deterministic: bool
    add_free: bool
    uninitialized: bool
    dense: bool

    def to_json(self) -> dict:
        return {
            "deterministic": self.deterministic,
            "add_free": self.add_free,
            "uninitialized": self.uninitialized,
            "dense": self.dense,
        }


def is_deterministic(m: Srt) -> bool:
    return all(len(ts) == 1 for ts in m.index.values())


def is_add_free(m: Srt) -> bool:
    return all(ADD not in t.update for t in m.transitions)


def is_uninitialized(m: Srt) -> bool:
    return all(v == m.group.zero for v in m.initial_values)


def classify(m: Srt) -> SubclassReport:
    return SubclassReport(
        deterministic=is_deterministic(m),
        add_free=is_add_free(m),
        uninitialized=is_uninitialized(m),
        dense=m.group.dense,
    )
