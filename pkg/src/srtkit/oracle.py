"""Brute-force semantics over short inputs drawn from a finite value grid.

Everything here re-derives the transition relation from the raw transition
list with a literal reading of the guard, so it shares no lookup code with
the execution engine. "No" answers are sound outright; "yes" answers only
hold for the inputs the grid and length limit can express.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

from .machine import ADD, NEW, Srt, ensure_valid


class OracleCapExceeded(RuntimeError):
    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(f"more than {cap} runs for one input (aborted after {count} partial runs)")


@dataclass(frozen=True)
class OracleConfig:
    max_len: int
    grid: tuple
    nondet_cap: int = 100_000

    def __post_init__(self):
        grid = tuple(self.grid)
        if not grid:
            raise ValueError("value grid must be nonempty")
        if len(set(grid)) != len(grid):
            raise ValueError("value grid must not repeat values")
        if self.max_len < 0:
            raise ValueError("max_len must be non-negative")
        object.__setattr__(self, "grid", grid)


class OracleResult(NamedTuple):
    holds: bool
    witness: Optional[tuple] = None


def _table(m: Srt) -> dict:
    table: dict = {}
    for t in m.transitions:
        table.setdefault(t.source, []).append(t)
    return table


def _satisfies(value, registers, guard) -> bool:
    for r, c in zip(registers, guard):
        if c == ">" and not value > r:
            return False
        if c == "=" and not value == r:
            return False
        if c == "<" and not value < r:
            return False
    return True


def _successors(m: Srt, table, config, letter):
    """``(output letter, next configuration)`` for every enabled transition."""
    state, regs = config
    label, value = letter
    out = []
    for t in table.get(state, ()):
        if t.label != label or not _satisfies(value, regs, t.guard):
            continue
        new = []
        for r, u in zip(regs, t.update):
            if u == NEW:
                new.append(value)
            elif u == ADD:
                new.append(m.group.add(r, value))
            else:
                new.append(r)
        out.append(((t.out_label, new[t.out_reg - 1]), (t.target, tuple(new))))
    return out


def _letters(m: Srt, cfg: OracleConfig, labels=None):
    labels = sorted(m.in_labels, key=repr) if labels is None else list(labels)
    grid = [m.group.coerce(v) for v in cfg.grid]
    return [(a, d) for a in labels for d in grid]


def _start(m: Srt):
    return (m.initial_state, tuple(m.initial_values))


def enumerate_semantics(m: Srt, cfg: OracleConfig, labels=None) -> frozenset:
    """Every instance (tuple of ``(input letter, output letter)``) of a run on a short input."""
    ensure_valid(m)
    table = _table(m)
    letters = _letters(m, cfg, labels)
    result = {()}
    # input word -> set of (instance, configuration)
    layer = {(): {((), _start(m))}}
    for _ in range(cfg.max_len):
        nxt = {}
        for word, runs in layer.items():
            for letter in letters:
                bucket = set()
                for inst, config in runs:
                    for out, config2 in _successors(m, table, config, letter):
                        bucket.add((inst + ((letter, out),), config2))
                        if len(bucket) > cfg.nondet_cap:
                            raise OracleCapExceeded(len(bucket), cfg.nondet_cap)
                if bucket:
                    nxt[word + (letter,)] = bucket
        for runs in nxt.values():
            result.update(inst for inst, _ in runs)
        layer = nxt
    return frozenset(result)


def oracle_functional(m: Srt, cfg: OracleConfig, labels=None) -> OracleResult:
    """Functional iff no input reaches two different outputs; the witness is ``(input, out1, out2)``."""
    ensure_valid(m)
    table = _table(m)
    letters = _letters(m, cfg, labels)
    # input word -> (the common output so far, configurations)
    layer = {(): ((), {_start(m)})}
    for _ in range(cfg.max_len):
        nxt = {}
        for word, (output, configs) in sorted(layer.items(), key=lambda kv: repr(kv[0])):
            for letter in letters:
                by_out: dict = {}
                for config in configs:
                    for out, config2 in _successors(m, table, config, letter):
                        by_out.setdefault(out, set()).add(config2)
                if len(by_out) > 1:
                    o1, o2 = sorted(by_out, key=repr)[:2]
                    w = word + (letter,)
                    return OracleResult(False, (w, output + (o1,), output + (o2,)))
                if by_out:
                    ((out, configs2),) = by_out.items()
                    if len(configs2) > cfg.nondet_cap:
                        raise OracleCapExceeded(len(configs2), cfg.nondet_cap)
                    nxt[word + (letter,)] = (output + (out,), configs2)
        layer = nxt
    return OracleResult(True)


def oracle_included(m1: Srt, m2: Srt, cfg: OracleConfig, labels=None) -> OracleResult:
    """Is every bounded instance of ``m1`` an instance of ``m2``? The witness is the first that is not."""
    ensure_valid(m1)
    ensure_valid(m2)
    t1, t2 = _table(m1), _table(m2)
    letters = _letters(m1, cfg, labels)
    # (instance, m1 configuration, m2 configurations consistent with the instance)
    layer = [((), _start(m1), frozenset([_start(m2)]))]
    for _ in range(cfg.max_len):
        nxt = []
        for inst, c1, cs2 in layer:
            for letter in letters:
                for out, c1b in _successors(m1, t1, c1, letter):
                    cs2b = frozenset(
                        c2b for c2 in cs2 for out2, c2b in _successors(m2, t2, c2, letter) if out2 == out
                    )
                    inst2 = inst + ((letter, out),)
                    if not cs2b:
                        return OracleResult(False, inst2)
                    if len(cs2b) > cfg.nondet_cap:
                        raise OracleCapExceeded(len(cs2b), cfg.nondet_cap)
                    nxt.append((inst2, c1b, cs2b))
        layer = nxt
    return OracleResult(True)


def oracle_reactive(m: Srt, cfg: OracleConfig, labels=None) -> OracleResult:
    """Reactive iff every bounded input has a run; the witness is an input with none."""
    ensure_valid(m)
    table = _table(m)
    letters = _letters(m, cfg, labels)
    layer = {(): {_start(m)}}
    for _ in range(cfg.max_len):
        nxt = {}
        for word, configs in layer.items():
            for letter in letters:
                configs2 = {c2 for c in configs for _, c2 in _successors(m, table, c, letter)}
                w = word + (letter,)
                if not configs2:
                    return OracleResult(False, w)
                if len(configs2) > cfg.nondet_cap:
                    raise OracleCapExceeded(len(configs2), cfg.nondet_cap)
                nxt[w] = configs2
        layer = nxt
    return OracleResult(True)


def _outputs_on(m: Srt, table, word) -> set:
    """Outputs of every complete run of ``m`` over ``word``."""
    runs = {((), _start(m))}
    for letter in word:
        runs = {
            (out + (o,), c2) for out, c in runs for o, c2 in _successors(m, table, c, letter)
        }
        if not runs:
            return set()
    return {out for out, _ in runs}


def oracle_compose(m1: Srt, m2: Srt, cfg: OracleConfig, labels=None) -> frozenset:
    """Bounded instances of the composition: ``m1``'s output word is fed to ``m2`` verbatim."""
    ensure_valid(m2)
    table2 = _table(m2)
    result = set()
    for inst in enumerate_semantics(m1, cfg, labels):
        word = tuple(a for a, _ in inst)
        middle = tuple(b for _, b in inst)
        for out in _outputs_on(m2, table2, middle):
            result.add(tuple(zip(word, out)))
    return frozenset(result)
