"""Configurations, enabled transition steps, runs and a pull-based streaming engine."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, NamedTuple, Sequence

from .domain import EQ, GT, LT, Letter, zip_words
from .machine import ADD, NEW, Srt, Transition, classify, ensure_valid


class Configuration(NamedTuple):
    state: Hashable
    registers: tuple


class Move(NamedTuple):
    transition: Transition
    config: Configuration
    output: Letter


class Step(NamedTuple):
    letter: Letter
    transition: Transition
    output: Letter
    config: Configuration


def initial_configuration(m: Srt) -> Configuration:
    return Configuration(m.initial_state, m.initial_values)


def guard_of(value, registers: Sequence) -> str:
    """The comparison vector of ``value`` against every register."""
    return "".join(GT if value > r else (EQ if value == r else LT) for r in registers)


def apply_update(m: Srt, registers: Sequence, value, update: str) -> tuple:
    if ADD not in update:
        return tuple(value if u == NEW else r for r, u in zip(registers, update))
    add = m.group.add
    return tuple(
        value if u == NEW else (add(r, value) if u == ADD else r)
        for r, u in zip(registers, update)
    )


def enabled(m: Srt, config: Configuration, letter: Letter) -> list[Move]:
    """Every transition step from ``config`` on ``letter``.

    The output value is read from the register vector *after* the update.
    An empty list means the machine is stuck.
    """
    label, value = letter
    candidates = m.index.get((config.state, label, guard_of(value, config.registers)), ())
    moves = []
    for t in candidates:
        regs = apply_update(m, config.registers, value, t.update)
        moves.append(Move(t, Configuration(t.target, regs), (t.out_label, regs[t.out_reg - 1])))
    return moves


@dataclass(frozen=True)
class Run:
    start: Configuration
    steps: tuple = ()
    stuck_at: int | None = None

    def __len__(self):
        return len(self.steps)

    @property
    def complete(self) -> bool:
        return self.stuck_at is None

    @property
    def input_word(self) -> tuple:
        return tuple(s.letter for s in self.steps)

    @property
    def output_word(self) -> tuple:
        return tuple(s.output for s in self.steps)

    @property
    def instance(self) -> tuple:
        return zip_words(self.input_word, self.output_word)

    @property
    def transitions(self) -> tuple:
        return tuple(s.transition for s in self.steps)

    @property
    def configurations(self) -> tuple:
        return (self.start,) + tuple(s.config for s in self.steps)

    @property
    def end(self) -> Configuration:
        return self.steps[-1].config if self.steps else self.start

    def prefix(self, n: int) -> "Run":
        return Run(self.start, self.steps[:n])


def run_word(m: Srt, word: Sequence[Letter]) -> list[Run]:
    """All maximal runs of ``m`` over ``word``.

    Runs that consume the whole word are complete; a run that cannot read
    letter ``i`` is returned with ``stuck_at == i``.
    """
    ensure_valid(m)
    start = initial_configuration(m)
    finished = []
    partial = [Run(start)]
    for i, letter in enumerate(word):
        extended = []
        for run in partial:
            moves = enabled(m, run.end, letter)
            if not moves:
                finished.append(Run(run.start, run.steps, stuck_at=i))
            for mv in moves:
                extended.append(Run(run.start, run.steps + (Step(letter, mv.transition, mv.output, mv.config),)))
        partial = extended
    return partial + finished


def complete_runs(m: Srt, word: Sequence[Letter]) -> list[Run]:
    return [r for r in run_word(m, word) if r.complete]


class Stuck(Exception):
    """No transition is enabled; carries the input position and configuration."""

    def __init__(self, position: int, config: Configuration, letter: Letter):
        self.position = position
        self.config = config
        self.letter = letter
        super().__init__(f"stuck at position {position} in state {config.state!r} reading {letter!r}")


class Stream:
    """Lazily transform a letter source, keeping only the current configuration.

    Nondeterministic machines need ``policy``: an integer seed or a
    ``random.Random`` used to pick among the enabled moves.
    """

    def __init__(self, m: Srt, source: Iterable[Letter], policy=None):
        ensure_valid(m)
        if policy is None or policy == "deterministic":
            if not classify(m).deterministic:
                raise ValueError("nondeterministic machine: pass a seed or random.Random policy")
            self._rng = None
        elif isinstance(policy, random.Random):
            self._rng = policy
        else:
            self._rng = random.Random(policy)
        self.machine = m
        self.config = initial_configuration(m)
        self.position = 0
        self._source = iter(source)

    def __iter__(self) -> Iterator[Letter]:
        return self

    def __next__(self) -> Letter:
        letter = next(self._source)
        moves = enabled(self.machine, self.config, letter)
        if not moves:
            raise Stuck(self.position, self.config, letter)
        mv = moves[0] if self._rng is None or len(moves) == 1 else self._rng.choice(moves)
        self.config = mv.config
        self.position += 1
        return mv.output


def stream(m: Srt, source: Iterable[Letter], policy=None) -> Stream:
    return Stream(m, source, policy)


def semantics_prefixes(m: Srt, max_len: int, values: Iterable, labels=None) -> frozenset:
    """All instances of runs over inputs of length ``<= max_len`` with the given values."""
    ensure_valid(m)
    values = list(values)
    labels = sorted(m.in_labels, key=repr) if labels is None else list(labels)
    letters = [(a, d) for a in labels for d in values]
    result = {()}
    layer = {((), initial_configuration(m))}
    for _ in range(max_len):
        nxt = set()
        for inst, config in layer:
            for letter in letters:
                for mv in enabled(m, config, letter):
                    nxt.add((inst + ((letter, mv.output),), mv.config))
        result.update(inst for inst, _ in nxt)
        layer = nxt
    return frozenset(result)
