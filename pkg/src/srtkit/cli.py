"""The ``srt`` command: run, inspect, combine and check register transducers."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .closure import compose_add_free, intersection, union
from .decide import NO, YES, UnsupportedMachine, check_functionality, check_inclusion, check_reactivity
from .domain import instance_to_json, word_from_json
from .execution import Stream, Stuck, run_word
from .machine import SILENT, Srt, classify, ensure_valid
from .oracle import OracleCapExceeded, OracleConfig, enumerate_semantics
from .trails import build_trail_automaton

EXIT_YES, EXIT_NO, EXIT_STUCK, EXIT_EXHAUSTED = 0, 1, 2, 3
EXIT_USAGE, EXIT_DATAERR = 64, 65


class InputError(Exception):
    """A problem with a user-supplied file; reported without a traceback."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _load_machine(path: str) -> Srt:
    obj = _read_json(path)
    if not isinstance(obj, dict):
        raise InputError(f"{path}: a machine must be a JSON object")
    try:
        return ensure_valid(Srt.from_json(obj))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)


def _fmt_letter(letter, group) -> str:
    label, value = letter
    return f"{label} {json.dumps(group.value_to_json(value), ensure_ascii=False)}"


# -- subcommands --------------------------------------------------------------------------


def cmd_run(args) -> int:
    m = _load_machine(args.machine)
    try:
        word = word_from_json(_read_json(args.input), m.group)
    except ValueError as exc:
        raise InputError(f"{args.input}: {exc}") from exc
    g = m.group

    def pairs(instance):
        if args.hide_silent:
            return [p for p in instance if p[1][0] != SILENT]
        return list(instance)

    if args.all_runs:
        runs = sorted(run_word(m, word), key=lambda r: repr(r.instance))
        report = [
            {"instance": instance_to_json(pairs(r.instance), g), "stuck_at": r.stuck_at}
            for r in runs
        ]
        if args.json:
            print(_dump({"runs": report}))
        else:
            for i, r in enumerate(runs):
                tail = "" if r.complete else f"  (stuck at {r.stuck_at})"
                outs = ", ".join(_fmt_letter(p[1], g) for p in pairs(r.instance))
                print(f"run {i}: {outs}{tail}")
        return EXIT_YES if any(r.complete for r in runs) else EXIT_STUCK

    if not classify(m).deterministic and args.seed is None:
        raise _Usage("nondeterministic machine: pass --seed N or --all-runs")
    stream = Stream(m, word, policy=args.seed)
    outputs = []
    stuck = None
    try:
        for out in stream:
            outputs.append(out)
    except Stuck as exc:
        stuck = exc
    instance = list(zip(word, outputs))
    if args.json:
        print(_dump({
            "instance": instance_to_json(pairs(instance), g),
            "stuck_at": None if stuck is None else stuck.position,
        }))
    else:
        for a, b in pairs(instance):
            print(f"{_fmt_letter(a, g)} -> {_fmt_letter(b, g)}")
        if stuck is not None:
            print(f"stuck at position {stuck.position} reading {_fmt_letter(stuck.letter, g)}",
                  file=sys.stderr)
    return EXIT_STUCK if stuck is not None else EXIT_YES


def cmd_trails(args) -> int:
    m = _load_machine(args.machine)
    ta = build_trail_automaton(m)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(ta.to_dot())
    print(_dump(ta.to_json()))
    return EXIT_YES


_OPS = {"union": union, "intersect": intersection, "compose": compose_add_free}


def cmd_combine(args) -> int:
    a, b = _load_machine(args.a), _load_machine(args.b)
    try:
        result = _OPS[args.op](a, b)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    text = result.dumps()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_YES


def cmd_check(args) -> int:
    machines = [_load_machine(p) for p in args.machines]
    expected = 2 if args.property == "inclusion" else 1
    if len(machines) != expected:
        raise _Usage(f"check {args.property} takes {expected} machine file(s)")
    opts = {"max_states": args.max_states}
    try:
        if args.property == "functional":
            report = check_functionality(machines[0], args.max_bound, **opts)
        elif args.property == "inclusion":
            report = check_inclusion(machines[0], machines[1], args.max_bound, **opts)
        else:
            report = check_reactivity(machines[0], args.max_bound, **opts)
    except (UnsupportedMachine, ValueError) as exc:
        raise InputError(str(exc)) from exc
    if args.json:
        print(_dump(report.to_json()))
    else:
        print(f"verdict: {report.verdict}")
        w = report.witness
        if w is not None:
            g = machines[0].group
            print("input:    " + ", ".join(_fmt_letter(x, g) for x in w.input))
            print("output a: " + ", ".join(_fmt_letter(x, g) for x in w.output_a))
            tail = "  (stuck)" if w.divergence == "stuck" else ""
            print("output b: " + ", ".join(_fmt_letter(x, g) for x in w.output_b) + tail)
        print(f"depth explored: {report.depth_explored}, states visited: {report.states_visited}, "
              f"bound used: {report.bound_used}")
    return {YES: EXIT_YES, NO: EXIT_NO}.get(report.verdict, EXIT_EXHAUSTED)


def _parse_grid(text: str, group):
    text = text.replace("−", "-").strip()
    try:
        if text.startswith("["):
            raw = json.loads(text)
        else:
            raw = [tok.strip() for tok in text.split(",") if tok.strip()]
            if group.kind == "lex":
                raise ValueError("pair-valued grids must be given as a JSON array")
            if group.kind == "Z":
                raw = [int(tok) for tok in raw]
            else:
                raw = [Fraction(tok) for tok in raw]
        return [group.coerce(v) for v in raw]
    except ValueError as exc:
        raise _Usage(f"bad --grid {text!r}: {exc}") from exc


def cmd_oracle(args) -> int:
    m = _load_machine(args.machine)
    grid = _parse_grid(args.grid, m.group)
    try:
        cfg = OracleConfig(args.max_len, tuple(grid), args.nondet_cap)
        instances = enumerate_semantics(m, cfg)
    except OracleCapExceeded as exc:
        print(f"srt: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except ValueError as exc:
        raise _Usage(str(exc)) from exc
    rows = sorted((instance_to_json(i, m.group) for i in instances), key=lambda r: (len(r), _dump(r)))
    print(_dump({"count": len(rows), "instances": rows}))
    return EXIT_YES


def cmd_classify(args) -> int:
    m = _load_machine(args.machine)
    report = classify(m).to_json()
    if args.json:
        print(_dump(report))
    else:
        for key in ("deterministic", "add_free", "uninitialized", "dense"):
            print(f"{key:14} {'yes' if report[key] else 'no'}")
    return EXIT_YES


class _Usage(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="srt", description="Streaming register transducers over linear groups.")
    p.add_argument("--version", action="version", version=f"srt {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("run", help="transform a data word")
    r.add_argument("machine")
    r.add_argument("--input", required=True, help="JSON array of [label, value] pairs")
    r.add_argument("--seed", type=int, help="seed for picking among nondeterministic moves")
    r.add_argument("--all-runs", action="store_true", help="list every maximal run")
    r.add_argument("--hide-silent", action="store_true", help=f"drop outputs labelled {SILENT}")
    r.add_argument("--json", action="store_true")
    r.set_defaults(func=cmd_run)

    t = sub.add_parser("trails", help="print the trail automaton")
    t.add_argument("machine")
    t.add_argument("--dot", metavar="PATH", help="also write GraphViz dot to PATH")
    t.set_defaults(func=cmd_trails)

    c = sub.add_parser("combine", help="union, intersection or composition of two machines")
    c.add_argument("--op", required=True, choices=sorted(_OPS))
    c.add_argument("a")
    c.add_argument("b")
    c.add_argument("-o", "--output", metavar="PATH")
    c.set_defaults(func=cmd_combine)

    k = sub.add_parser("check", help="decide functionality, inclusion or reactivity")
    k.add_argument("property", choices=["functional", "inclusion", "reactive"])
    k.add_argument("machines", nargs="+")
    k.add_argument("--max-bound", type=int, help="cap on the witness length searched")
    k.add_argument("--max-states", type=int, default=200_000, help="cap on search nodes")
    k.add_argument("--json", action="store_true")
    k.set_defaults(func=cmd_check)

    o = sub.add_parser("oracle", help="dump the bounded semantics by brute force")
    o.add_argument("machine")
    o.add_argument("--max-len", type=int, required=True)
    o.add_argument("--grid", required=True, help='comma list such as "-1,0,1/2" or a JSON array')
    o.add_argument("--nondet-cap", type=int, default=100_000)
    o.set_defaults(func=cmd_oracle)

    s = sub.add_parser("classify", help="report the subclasses a machine belongs to")
    s.add_argument("machine")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_classify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _Usage as exc:
        print(f"srt: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"srt: {exc}", file=sys.stderr)
        return EXIT_DATAERR


if __name__ == "__main__":
    sys.exit(main())
