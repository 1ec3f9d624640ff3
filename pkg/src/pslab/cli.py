"""Command-line front end: ``pslab run | check | tightness | frame | search``.

Exit codes: ``run`` returns 1 when more than half of the mass faults;
``check`` and ``tightness`` return 0/1/3 for holds/fails/unknown;
``search`` returns 1 when a counterexample is found; ``frame`` returns 1
when the side condition is violated.  Any parse error returns 2.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import __version__
from .assertions import parse_assertion
from .lang.parser import ParseError, parse_program
from .lang.syntax import pretty
from .semantics import Mode, analyze, trace
from .speccheck import (
    FrameError, SearchSpace, Spec, Verdict, apply_frame, check_partial,
    check_relative_tightness, check_total, search_counterexample,
)
from .specfile import SpecFile, SpecFormatError, load_spec
from .state import LiteralError, parse_random_state, parse_state

SCHEMA = 1
EXIT_CODES = {"holds": 0, "fails": 1, "unknown": 3}
DEFAULT_LIMIT = 10000


class UsageError(Exception):
    pass


def _mode(args, spec_file: SpecFile | None = None) -> Mode:
    if args.bounded is not None:
        return Mode.bounded(args.bounded)
    if args.absorb is not None:
        return Mode.absorb(args.absorb)
    if spec_file is not None and spec_file.mode is not None:
        return spec_file.mode
    return Mode.absorb(DEFAULT_LIMIT, DEFAULT_LIMIT)


def _verdict_json(v: Verdict) -> dict[str, Any]:
    return {
        "outcome": v.outcome.value,
        "reason": v.reason.value if v.reason else None,
        "residual": str(v.residual),
        "where": v.where or None,
        "witness": v.witness,
    }


def _print_verdict(v: Verdict) -> None:
    print(f"verdict: {v}")
    w = v.witness
    for key in ("input", "point", "state", "fault", "terminal", "note", "divergence", "undefined"):
        if key in w:
            print(f"{key}: {w[key]}")
    if "path" in w:
        print("faulting path:")
        for line in w["path"]:
            print(f"  {line}")
    if "independence" in w:
        ind = w["independence"]
        print(f"not independent: {ind['left_footprint']} vs {ind['right_footprint']}")
        _print_tables(ind)
    if "given" in w:
        print(f"conditioned on precondition footprint = {w['given']}")
        _print_tables(w, ("joint (post footprint , input)", "post footprint", "input"))


def _print_tables(d: dict, titles=("joint", "left", "right")) -> None:
    for key, title in zip(("joint", "left", "right"), titles):
        if key not in d:
            continue
        print(f"  {title}:")
        for value, p in d[key]:
            print(f"    {value}: {p}")
    if "cell" in d:
        c = d["cell"]
        print(f"  offending cell ({c['left']}, {c['right']}): joint {c['joint']} != product {c['product']}")


def _emit(args, report: dict[str, Any], printer) -> None:
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        printer()


def _space(args, spec: Spec) -> SearchSpace | None:
    if args.vars is None:
        return None
    variables = tuple(v.strip() for v in args.vars.split(",") if v.strip())
    values = tuple(int(v) for v in args.values.split(",") if v.strip()) if args.values else ()
    return SearchSpace(variables, values, args.denominator, args.max_points, args.partial_states)


# -- subcommands --------------------------------------------------------------

def cmd_run(args) -> int:
    program = parse_program(Path(args.program).read_text(encoding="utf-8"))
    state = parse_state(args.state)
    mode = _mode(args)
    start = time.perf_counter()
    res = analyze(program, state, mode)
    elapsed = (time.perf_counter() - start) * 1000
    report = {
        "schema": SCHEMA,
        "command": "run",
        "program": pretty(program),
        "state": str(state),
        "mode": str(mode),
        "terminal": {str(s): str(p) for s, p in res.terminal.items()},
        "fault": str(res.fault_mass),
        "residual": str(res.residual_mass),
        "exact": res.exact,
        "cap_exceeded": res.cap_exceeded,
        "fault_paths": [w.render() for w in res.fault_witnesses],
        "timing_ms": round(elapsed, 3),
    }
    if args.trace:
        report["trace"] = list(trace(program, state, args.trace))

    def show():
        print(f"program: {pretty(program)}")
        print(f"state: {state}")
        print(f"mode: {mode}")
        print("terminal:")
        for s, p in res.terminal.items():
            print(f"  {s}: {p}")
        print(f"fault: {res.fault_mass}")
        print(f"residual: {res.residual_mass}")
        print(f"exact: {str(res.exact).lower()}")
        if res.cap_exceeded:
            print("note: node cap exceeded, fell back to bounded exploration")
        if res.fault_witnesses:
            print("faulting path:")
            for line in res.fault_witnesses[0].render():
                print(f"  {line}")
        if args.trace:
            print("trace:")
            for line in report["trace"]:
                print(f"  {line}")

    _emit(args, report, show)
    return 1 if res.fault_mass > Fraction(1, 2) else 0


def _load(args) -> tuple[SpecFile, Spec]:
    sf = load_spec(args.spec)
    spec = sf.framed()
    return sf, spec


def _input(args, sf: SpecFile):
    if args.input is not None:
        return parse_random_state(args.input)
    return sf.input


def cmd_check(args) -> int:
    sf, spec = _load(args)
    mode = _mode(args, sf)
    rs = _input(args, sf)
    space = _space(args, spec)
    start = time.perf_counter()
    report: dict[str, Any] = {"schema": SCHEMA, "command": "check", "spec": str(spec),
                              "mode": str(mode), "total": args.total, "unsafe": args.unsafe}
    if rs is not None:
        check = check_total if args.total else check_partial
        verdict = check(spec, rs, mode, safety=not args.unsafe)
        report["verdict"] = _verdict_json(verdict)
        report["timing_ms"] = round((time.perf_counter() - start) * 1000, 3)

        def show():
            print(f"spec: {spec}")
            _print_verdict(verdict)

        _emit(args, report, show)
        return EXIT_CODES[verdict.outcome.value]
    if space is None:
        raise UsageError("check needs an input random state (--input or an input: section) or a search space (--vars)")
    result = search_counterexample(spec, space, mode, total=args.total, safety=not args.unsafe)
    outcome = "fails" if result.found else ("unknown" if result.unknown else "holds")
    report.update({
        "verdict": _verdict_json(result.verdict) if result.verdict else {"outcome": outcome},
        "candidates": result.candidates, "checked": result.checked, "unknown": result.unknown,
        "timing_ms": round((time.perf_counter() - start) * 1000, 3),
    })

    def show():
        print(f"spec: {spec}")
        if result.found:
            print(f"counterexample: {result.witness}")
            _print_verdict(result.verdict)
        elif result.unknown:
            print(f"unknown on {result.unknown}/{result.checked} candidates")
        else:
            print(f"holds on {result.checked}/{result.checked} candidates")
        print(result.summary())

    _emit(args, report, show)
    return EXIT_CODES[outcome]


def cmd_tightness(args) -> int:
    sf, spec = _load(args)
    mode = _mode(args, sf)
    rs = _input(args, sf)
    if rs is None:
        raise UsageError("tightness needs an input random state (--input or an input: section)")
    start = time.perf_counter()
    partial = check_partial(spec, rs, mode, safety=not args.unsafe)
    verdict = check_relative_tightness(spec, rs, mode)
    report = {
        "schema": SCHEMA, "command": "tightness", "spec": str(spec), "mode": str(mode),
        "unsafe": args.unsafe, "partial": _verdict_json(partial),
        "verdict": _verdict_json(verdict),
        "timing_ms": round((time.perf_counter() - start) * 1000, 3),
    }

    def show():
        print(f"spec: {spec}")
        print(f"partial correctness at this input{' (safety dropped)' if args.unsafe else ''}: {partial}")
        _print_verdict(verdict)

    _emit(args, report, show)
    return EXIT_CODES[verdict.outcome.value]


def cmd_frame(args) -> int:
    sf = load_spec(args.spec)
    theta = parse_assertion(args.frame) if args.frame else sf.frame
    if theta is None:
        raise UsageError("frame needs a frame assertion (--frame or a frame: section)")
    report: dict[str, Any] = {"schema": SCHEMA, "command": "frame", "spec": str(sf.spec),
                              "frame": str(theta)}
    try:
        framed = apply_frame(sf.spec, theta)
    except FrameError as exc:
        message = str(exc)
        report.update({"ok": False, "offending": sorted(exc.offending), "error": message})
        _emit(args, report, lambda: print(f"error: {message}"))
        return 1
    report.update({"ok": True, "framed": str(framed)})
    _emit(args, report, lambda: print(framed))
    return 0


def cmd_search(args) -> int:
    sf, spec = _load(args)
    mode = _mode(args, sf)
    space = _space(args, spec)
    if space is None:
        raise UsageError("search needs --vars")
    start = time.perf_counter()
    result = search_counterexample(spec, space, mode, total=args.total, safety=not args.unsafe)
    report = {
        "schema": SCHEMA, "command": "search", "spec": str(spec), "mode": str(mode),
        "witness": str(result.witness) if result.found else None,
        "verdict": _verdict_json(result.verdict) if result.verdict else None,
        "candidates": result.candidates, "checked": result.checked, "unknown": result.unknown,
        "timing_ms": round((time.perf_counter() - start) * 1000, 3),
    }

    def show():
        print(f"spec: {spec}")
        if result.found:
            print(f"witness: {result.witness}")
            _print_verdict(result.verdict)
        print(result.summary())

    _emit(args, report, show)
    return 1 if result.found else 0


# -- argument parsing ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pslab", description="Exact checker for probabilistic separation logic over pwhile.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, mode=True):
        p.add_argument("--json", action="store_true", help="machine-readable report")
        if mode:
            g = p.add_mutually_exclusive_group()
            g.add_argument("--bounded", type=int, metavar="N", help="explore N transition layers")
            g.add_argument("--absorb", type=int, metavar="N", help="solve exactly over at most N configurations")

    def space(p):
        p.add_argument("--vars", help="comma-separated variables of the search space")
        p.add_argument("--values", default="0,1", help="comma-separated integer values (default 0,1)")
        p.add_argument("--denominator", type=int, default=2, help="weight grid 1/N (default 2)")
        p.add_argument("--max-points", type=int, default=2, help="distinct states per candidate (default 2)")
        p.add_argument("--partial-states", action="store_true", help="also enumerate partially defined states")

    p = sub.add_parser("run", help="exact terminal distribution of a program from a state")
    p.add_argument("program")
    p.add_argument("--state", default="{}", help="initial state literal, e.g. '{X:1}'")
    p.add_argument("--trace", type=int, nargs="?", const=50, metavar="N",
                   help="dump transitions of the first N layers (default 50)")
    common(p)
    p.set_defaults(func=cmd_run)

    for name, func, text in (
        ("check", cmd_check, "check a spec at an input random state or over a search space"),
        ("tightness", cmd_tightness, "check the relative-tightness conditional independence"),
        ("search", cmd_search, "search a finite space of random states for a counterexample"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("spec")
        p.add_argument("--input", "--state", dest="input", help="input random-state literal")
        p.add_argument("--unsafe", action="store_true", help="drop the safety guarantee")
        if name != "tightness":
            p.add_argument("--total", action="store_true", help="total instead of partial correctness")
            space(p)
        common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("frame", help="validate the frame side condition and print the framed spec")
    p.add_argument("spec")
    p.add_argument("--frame", help="frame assertion (overrides the spec file's frame: section)")
    common(p, mode=False)
    p.set_defaults(func=cmd_frame)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, LiteralError, SpecFormatError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
