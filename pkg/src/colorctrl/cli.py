"""Command-line front end.

Every subcommand prints one JSON report on stdout (or a short text summary
with ``--human``).  Exit codes: 0 settled positive answer, 2 the sufficient
test failed (or the answer is negative without a counterexample), 3 an
explicit counterexample was found, 1 bad input or exhausted budget.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .colorrule import DEFAULT_SEARCH_BUDGET, is_colorable
from .errors import ColorCtrlError, WitnessNotFound
from .matching import DEFAULT_MATCHING_BUDGET, is_nonsingular
from .oracle import find_singular_assignment, symbolic_determinant
from .pattern import Document, _check_grid, build_barred_with_map, instantiate, read_raw, validate
from .verification import SamplePlan, Status, assess_controllability, refute_fullrank_by_sampling

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2
EXIT_REFUTED = 3


def _digest(raw: bytes) -> str:
    return hashlib.sha256(raw).hexdigest()


def _report(args: argparse.Namespace, raw: bytes, result: dict, seed: int | None = None) -> dict:
    return {
        "tool": "colorctrl",
        "version": __version__,
        "command": args.command,
        "input_sha256": _digest(raw),
        "seed": seed,
        "result": result,
    }


def _load(text: str) -> Document:
    return _check_grid(*read_raw(text))


def _plan(args: argparse.Namespace) -> SamplePlan:
    return SamplePlan(seed=args.seed, trials=args.trials)


def cmd_validate(args, text):
    grid, state_dim = read_raw(text)
    diags = validate(grid)
    if not diags:
        try:
            _check_grid(grid, state_dim)
        except ColorCtrlError as exc:
            diags_json = [{"code": "system-split", "message": str(exc), "cell": None}]
            return {"valid": False, "diagnostics": diags_json}, EXIT_ERROR, None
    result = {"valid": not diags, "diagnostics": [d.to_json() for d in diags]}
    return result, (EXIT_OK if not diags else EXIT_ERROR), None


def cmd_bar(args, text):
    barred = build_barred_with_map(_load(text).system(args.n))
    return barred.to_json(), EXIT_OK, None


def cmd_nonsingular(args, text):
    m = _load(text).matrix
    cert = is_nonsingular(m, budget=args.budget)
    result: dict = {"certificate": cert.to_json()}
    if cert.verdict:
        return result, EXIT_OK, None
    try:
        witness = find_singular_assignment(m, budget=args.trials, seed=args.seed)
    except WitnessNotFound:
        result["singular_assignment"] = None
        return result, EXIT_INCONCLUSIVE, args.seed
    result["singular_assignment"] = witness.to_json()
    result["singular_matrix"] = instantiate(m, witness).to_json()
    return result, EXIT_REFUTED, args.seed


def cmd_det(args, text):
    poly = symbolic_determinant(_load(text).matrix)
    return {"determinant": str(poly), "terms": poly.to_json()}, EXIT_OK, None


def _colorability(args, m):
    res = is_colorable(m, budget=args.budget, greedy=args.greedy)
    return res, res.to_json()


def cmd_colorable(args, text):
    res, out = _colorability(args, _load(text).matrix)
    return out, (EXIT_OK if res.colorable else EXIT_INCONCLUSIVE), None


def cmd_fullrank(args, text):
    m = _load(text).matrix
    res, out = _colorability(args, m)
    result = {"colorability": out}
    if res.colorable:
        return result, EXIT_OK, None
    report = refute_fullrank_by_sampling(m, _plan(args))
    result["sampling"] = report.to_json()
    return result, (EXIT_REFUTED if report.refuted else EXIT_INCONCLUSIVE), args.seed


def cmd_controllable(args, text):
    sys_ = _load(text).system(args.n)
    verdict = assess_controllability(sys_, _plan(args), budget=args.budget, greedy=args.greedy)
    code = {
        Status.SUFFICIENT_CONTROLLABLE: EXIT_OK,
        Status.INCONCLUSIVE: EXIT_INCONCLUSIVE,
        Status.REFUTED_BY_SAMPLE: EXIT_REFUTED,
    }[verdict.status]
    seed = None if verdict.sampling is None else args.seed
    return verdict.to_json(), code, seed


def cmd_sample(args, text):
    m = _load(text).matrix
    out = [
        {"assignment": a.to_json(), "matrix": instantiate(m, a).to_json()}
        for a in _plan(args).assignments(m.colors)
    ]
    return {"realizations": out}, EXIT_OK, args.seed


COMMANDS = {
    "validate": (cmd_validate, "report invariant violations of a pattern document"),
    "bar": (cmd_bar, "print the diagonally rewritten (barred) system"),
    "nonsingular": (cmd_nonsingular, "decide nonsingularity of a square pattern"),
    "det": (cmd_det, "print the symbolic determinant of a square pattern"),
    "colorable": (cmd_colorable, "run the color change rule"),
    "fullrank": (cmd_fullrank, "colorability test plus sampling refutation of full row rank"),
    "controllable": (cmd_controllable, "graph test for strong structural controllability"),
    "sample": (cmd_sample, "emit random exact realizations"),
}


def _human(command: str, result: dict, code: int) -> str:
    label = {EXIT_OK: "yes", EXIT_INCONCLUSIVE: "inconclusive", EXIT_REFUTED: "refuted"}.get(code, "error")
    lines = [f"{command}: {label}"]
    if command == "det":
        lines.append(f"det = {result['determinant']}")
    if "status" in result:
        failed = ", ".join(result["failed_sides"]) or "none"
        lines.append(f"status {result['status']}; failed sides: {failed}")
        sampling = result.get("sampling")
        if sampling:
            cx = sampling["counterexample"]
            found = f"counterexample at trial {cx['trial']}" if cx else "no counterexample"
            lines.append(f"sampling: {sampling['trials_run']} trials, {found}")
    cert = result.get("certificate")
    if cert is not None:
        if cert["verdict"]:
            w = cert["witness"]
            lines.append(f"witness class {{{', '.join(w['spectrum'])}}} signature {w['signature']}")
        else:
            lines.append(f"fails condition {cert['failed_condition']}")
        if result.get("singular_assignment"):
            lines.append(f"singular at {result['singular_assignment']}")
    trace = result.get("trace") or result.get("colorability", {}).get("trace")
    for side in ("original", "barred"):
        if isinstance(result.get(side), dict) and result[side].get("trace"):
            lines.append(f"{side} trace:")
            lines += [f"  {s['X']} -> {s['Y']}" for s in result[side]["trace"]]
    if trace:
        lines += [f"  {s['X']} -> {s['Y']}" for s in trace]
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="colorctrl", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file", help="pattern document ('-' for stdin)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=10000)
        p.add_argument("--budget", type=int, default=None)
        p.add_argument("--greedy", action="store_true", help="fast colorability; positive answers only")
        p.add_argument("--n", type=int, default=None, help="state dimension (overrides the header)")
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="human", action="store_false")
        fmt.add_argument("--human", dest="human", action="store_true")
        p.set_defaults(human=False)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    if args.budget is None:
        args.budget = DEFAULT_MATCHING_BUDGET if args.command == "nonsingular" else DEFAULT_SEARCH_BUDGET
    try:
        raw = sys.stdin.buffer.read() if args.file == "-" else Path(args.file).read_bytes()
        text = raw.decode("utf-8")
        handler = COMMANDS[args.command][0]
        result, code, seed = handler(args, text)
    except (OSError, UnicodeDecodeError, ColorCtrlError) as exc:
        print(f"colorctrl {args.command}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.human:
        print(_human(args.command, result, code))
    else:
        print(json.dumps(_report(args, raw, result, seed), indent=2, sort_keys=True))
    return code


def main() -> None:
    sys.exit(run())
