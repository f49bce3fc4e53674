"""Linear-group data domains, data words and transformation instances.

Group values are plain Python objects so that comparisons stay cheap:

* ``Z``  -- ``int``
* ``Q``  -- ``fractions.Fraction``
* ``lex(A, B)`` -- a 2-tuple ``(a, b)`` ordered lexicographically, added
  point-wise.

Python already orders tuples lexicographically, so ``<``/``==`` work on every
value shape directly. Only addition needs the descriptor.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Hashable, Iterable, Sequence, Tuple

GT, EQ, LT = ">", "=", "<"

Letter = Tuple[Hashable, Any]
DataWord = Tuple[Letter, ...]
TransformationInstance = Tuple[Tuple[Letter, Letter], ...]


class IncompatibleGroups(ValueError):
    """Raised when values or machines from different linear groups meet."""


@dataclass(frozen=True)
class GroupDescriptor:
    """A linear group: integers, rationals, or a lexicographic pair of groups."""

    kind: str
    parts: tuple = ()

    def __post_init__(self):
        if self.kind in ("Z", "Q"):
            if self.parts:
                raise ValueError(f"group {self.kind} takes no components")
        elif self.kind == "lex":
            if len(self.parts) != 2 or not all(isinstance(p, GroupDescriptor) for p in self.parts):
                raise ValueError("lex group needs exactly two component groups")
        else:
            raise ValueError(f"unknown group kind {self.kind!r}")

    def __str__(self):
        if self.kind == "lex":
            return f"lex({self.parts[0]}, {self.parts[1]})"
        return self.kind

    # -- order-theoretic structure -------------------------------------------------

    @property
    def dense(self) -> bool:
        # Z x Q has no least positive element, Q x Z has (0, 1).
        if self.kind == "lex":
            return self.parts[1].dense
        return self.kind == "Q"

    @property
    def discrete(self) -> bool:
        return not self.dense

    @property
    def least_positive(self):
        """The least positive element, or ``None`` for dense groups."""
        if self.kind == "Z":
            return 1
        if self.kind == "Q":
            return None
        inner = self.parts[1].least_positive
        if inner is None:
            return None
        return (self.parts[0].zero, inner)

    @property
    def zero(self):
        if self.kind == "Z":
            return 0
        if self.kind == "Q":
            return Fraction(0)
        return (self.parts[0].zero, self.parts[1].zero)

    @property
    def unit(self):
        """Some fixed positive element."""
        if self.kind == "Z":
            return 1
        if self.kind == "Q":
            return Fraction(1)
        return (self.parts[0].zero, self.parts[1].unit)

    # -- membership and coercion ----------------------------------------------------

    def contains(self, v) -> bool:
        if self.kind == "Z":
            return isinstance(v, int) and not isinstance(v, bool)
        if self.kind == "Q":
            return isinstance(v, (int, Fraction)) and not isinstance(v, bool)
        return (
            isinstance(v, tuple)
            and len(v) == 2
            and self.parts[0].contains(v[0])
            and self.parts[1].contains(v[1])
        )

    def coerce(self, raw):
        """Turn a Python or JSON-decoded value into a value of this group."""
        if self.kind == "Z":
            if isinstance(raw, bool):
                raise IncompatibleGroups(f"{raw!r} is not an integer")
            if isinstance(raw, int):
                return raw
            if isinstance(raw, Fraction) and raw.denominator == 1:
                return int(raw)
            if isinstance(raw, str):
                f = Fraction(raw)
                if f.denominator == 1:
                    return int(f)
            raise IncompatibleGroups(f"{raw!r} is not an integer")
        if self.kind == "Q":
            if isinstance(raw, bool) or isinstance(raw, float):
                raise IncompatibleGroups(f"{raw!r} is not an exact rational")
            if isinstance(raw, (int, Fraction, str)):
                try:
                    return Fraction(raw)
                except ValueError as exc:
                    raise IncompatibleGroups(f"{raw!r} is not a rational") from exc
            raise IncompatibleGroups(f"{raw!r} is not a rational")
        if not isinstance(raw, (list, tuple)) or len(raw) != 2:
            raise IncompatibleGroups(f"{raw!r} is not a pair for {self}")
        return (self.parts[0].coerce(raw[0]), self.parts[1].coerce(raw[1]))

    # -- arithmetic -----------------------------------------------------------------

    def add(self, a, b):
        if self.kind == "lex":
            return (self.parts[0].add(a[0], b[0]), self.parts[1].add(a[1], b[1]))
        return a + b

    def negate(self, a):
        if self.kind == "lex":
            return (self.parts[0].negate(a[0]), self.parts[1].negate(a[1]))
        return -a

    def sub(self, a, b):
        return self.add(a, self.negate(b))

    def times(self, a, n: int):
        """``n * a`` for an integer ``n``."""
        if self.kind == "lex":
            return (self.parts[0].times(a[0], n), self.parts[1].times(a[1], n))
        return a * n

    def strictly_between(self, a, b):
        """A value ``c`` with ``a < c < b``.

        Always succeeds for dense groups when ``a < b``; for discrete groups it
        raises ``ValueError`` when ``a`` and ``b`` are adjacent.
        """
        if not a < b:
            raise ValueError(f"need a < b, got {a!r} and {b!r}")
        if self.kind == "Z":
            if b - a < 2:
                raise ValueError(f"no integer strictly between {a} and {b}")
            return a + 1
        if self.kind == "Q":
            return (a + b) / 2
        first, second = self.parts
        if a[0] == b[0]:
            return (a[0], second.strictly_between(a[1], b[1]))
        return (a[0], second.add(a[1], second.unit))

    def fraction_below(self, gap, n: int):
        """A positive value ``x`` with ``n * x <= gap`` (dense groups, ``gap > 0``)."""
        if not self.dense:
            raise ValueError(f"{self} is discrete")
        if self.kind == "Q":
            return Fraction(gap) / n
        first, second = self.parts
        if gap[0] > first.zero:
            return (first.zero, second.unit)
        return (first.zero, second.fraction_below(gap[1], n))

    # -- serialization ----------------------------------------------------------------

    def value_to_json(self, v):
        if self.kind == "Z":
            return int(v)
        if self.kind == "Q":
            f = Fraction(v)
            return f"{f.numerator}/{f.denominator}"
        return [self.parts[0].value_to_json(v[0]), self.parts[1].value_to_json(v[1])]

    def value_from_json(self, obj):
        return self.coerce(obj)

    def to_json(self):
        if self.kind == "lex":
            return ["lex", self.parts[0].to_json(), self.parts[1].to_json()]
        return self.kind

    @classmethod
    def from_json(cls, obj) -> "GroupDescriptor":
        if obj in ("Z", "Q"):
            return cls(obj)
        if isinstance(obj, list) and len(obj) == 3 and obj[0] == "lex":
            return cls("lex", (cls.from_json(obj[1]), cls.from_json(obj[2])))
        raise ValueError(f"unknown group descriptor {obj!r}")


INTEGERS = GroupDescriptor("Z")
RATIONALS = GroupDescriptor("Q")


def lex(first: GroupDescriptor, second: GroupDescriptor) -> GroupDescriptor:
    return GroupDescriptor("lex", (first, second))


def _shape(v):
    if isinstance(v, bool):
        raise IncompatibleGroups(f"{v!r} is not a group value")
    if isinstance(v, int):
        return "Z"
    if isinstance(v, Fraction):
        return "Q"
    if isinstance(v, tuple) and len(v) == 2:
        return (_shape(v[0]), _shape(v[1]))
    raise IncompatibleGroups(f"{v!r} is not a group value")


def _check_same(a, b):
    if _shape(a) != _shape(b):
        raise IncompatibleGroups(f"incompatible group descriptors: {a!r} vs {b!r}")


def compare(a, b) -> str:
    """Return ``"<"``, ``"="`` or ``">"`` for ``a`` relative to ``b``."""
    _check_same(a, b)
    return GT if a > b else (EQ if a == b else LT)


def add(a, b):
    _check_same(a, b)
    if isinstance(a, tuple):
        return (add(a[0], b[0]), add(a[1], b[1]))
    return a + b


def negate(a):
    _shape(a)
    if isinstance(a, tuple):
        return (negate(a[0]), negate(a[1]))
    return -a


def zero(group: GroupDescriptor):
    return group.zero


def strictly_between(group: GroupDescriptor, a, b):
    return group.strictly_between(a, b)


# -- data words ---------------------------------------------------------------------


def data_word(letters: Iterable[Sequence], group: GroupDescriptor | None = None) -> DataWord:
    """Build a data word from ``(label, value)`` pairs, coercing values if a group is given."""
    if group is None:
        return tuple((label, value) for label, value in letters)
    return tuple((label, group.coerce(value)) for label, value in letters)


def project_positions(word: Sequence[Letter], label) -> set:
    return {p for p, (a, _) in enumerate(word) if a == label}


def zip_words(s: Sequence[Letter], t: Sequence[Letter]) -> TransformationInstance:
    if len(s) != len(t):
        raise ValueError(f"length mismatch: input has {len(s)} letters, output {len(t)}")
    return tuple((tuple(a), tuple(b)) for a, b in zip(s, t))


def unzip(instance: Sequence) -> tuple[DataWord, DataWord]:
    return tuple(p[0] for p in instance), tuple(p[1] for p in instance)


def word_to_json(word: Sequence[Letter], group: GroupDescriptor) -> list:
    return [[label, group.value_to_json(v)] for label, v in word]


def word_from_json(obj, group: GroupDescriptor) -> DataWord:
    if not isinstance(obj, list):
        raise ValueError("a data word must be a JSON array of [label, value] pairs")
    out = []
    for i, item in enumerate(obj):
        if not isinstance(item, list) or len(item) != 2:
            raise ValueError(f"letter {i}: expected [label, value], got {item!r}")
        out.append((hashable(item[0]), group.coerce(item[1])))
    return tuple(out)


def instance_to_json(instance, group: GroupDescriptor) -> list:
    return [
        [[a, group.value_to_json(d)], [b, group.value_to_json(e)]]
        for (a, d), (b, e) in instance
    ]


def instance_from_json(obj, group: GroupDescriptor) -> TransformationInstance:
    s = word_from_json([pair[0] for pair in obj], group)
    t = word_from_json([pair[1] for pair in obj], group)
    return zip_words(s, t)


def hashable(obj):
    """Turn JSON-decoded lists into tuples, recursively (labels and states)."""
    if isinstance(obj, list):
        return tuple(hashable(x) for x in obj)
    return obj


def jsonable(obj):
    if isinstance(obj, tuple):
        return [jsonable(x) for x in obj]
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    return obj


def canonical_key(obj) -> str:
    """A total sort key for mixed labels, states and values."""
    return json.dumps(jsonable(obj), sort_keys=True, ensure_ascii=False)
