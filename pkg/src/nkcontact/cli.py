"""``nkcontact`` command line: verify spec files, sweep the δ-family, emit specs.

Exit status is 0 when every requested check passes, 1 when a check fails
(the first failing tag goes to stderr) and 2 for unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .exact import parse_rational, parse_rational_list
from .io import SpecError, emit_standard_spec, load_spec
from .report import (
    SUITES,
    render_sweep_text,
    render_text,
    result_document,
    run_suite,
    sweep_delta,
    sweep_document,
    to_json,
)


def _rational_arg(text: str):
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rational_list_arg(text: str):
    try:
        return parse_rational_list(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nkcontact",
        description="Exact verification of N(k)-contact and *-soliton identities on homogeneous frames.")
    sub = parser.add_subparsers(dest="command", required=True)
    suites = list(SUITES) + ["all"]

    v = sub.add_parser("verify", help="run a suite on a spec file (or a bundled spec name)")
    v.add_argument("spec")
    v.add_argument("--suite", choices=suites, default="all")
    v.add_argument("--p", type=_rational_arg, default=None, help="conformal pressure (overrides the file)")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--timing", action="store_true", help="include elapsed_ms in JSON output")

    s = sub.add_parser("sweep", help="run a suite across the standard δ-family")
    s.add_argument("--delta", type=_rational_list_arg, required=True, help="comma list, e.g. 0,1/2,1,2")
    s.add_argument("--suite", choices=suites, default="all")
    s.add_argument("--p", type=_rational_arg, default=0)
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.add_argument("--timing", action="store_true")

    e = sub.add_parser("example", help="write the standard-family spec for one δ")
    e.add_argument("--delta", type=_rational_arg, required=True)
    e.add_argument("--emit", default="-", help="output path ('-' for stdout)")
    return parser


def _verify(args) -> int:
    try:
        M, S, soliton = load_spec(args.spec, strict=False)
    except (SpecError, OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    res = run_suite(args.suite, M, S, soliton, args.p)
    if args.format == "json":
        sys.stdout.write(to_json(result_document(res, args.timing)))
    else:
        sys.stdout.write(render_text(res))
    if not res.passed:
        print(f"first failure: {res.first_failure()}", file=sys.stderr)
        return 1
    return 0


def _sweep(args) -> int:
    rows = sweep_delta(args.delta, args.suite, args.p)
    if args.format == "json":
        sys.stdout.write(to_json(sweep_document(rows, args.timing)))
    else:
        sys.stdout.write(render_sweep_text(rows))
    for r in rows:
        if r.result is None or not r.result.passed:
            tag = r.error if r.result is None else r.result.first_failure()
            print(f"first failure: delta={r.delta}: {tag}", file=sys.stderr)
            return 1
    return 0


def _example(args) -> int:
    try:
        text = emit_standard_spec(args.delta)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.emit == "-":
        sys.stdout.write(text)
    else:
        Path(args.emit).write_text(text, encoding="utf-8")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return {"verify": _verify, "sweep": _sweep, "example": _example}[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
