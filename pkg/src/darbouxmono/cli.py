"""Command-line interface: ``darbouxmono <command> PROBLEM.toml [options]``.

Commands ``foliation``, ``monomialize``, ``analyze``, ``eliminate`` and ``full``
run the pipeline up to that stage; ``verify-report`` re-checks a saved
machine-readable report. The exit status is 1 exactly when some verification
failed; leaves that are nongeneric or unresolved are reported with a status
and do not change the exit status. Input errors give exit status 2.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .errors import ParseError
from .monomialize import Strategy, StrategyKind
from .problem import evaluate_rational, load_problem, parse_script
from .report import COMMANDS, dumps, render_text, run, verify_report

__all__ = ["main", "build_parser"]


def _nc_point(text: str):
    """``CHART@var=value,var=value`` -> ``(chart, {var: Fraction})``."""
    chart, sep, rest = text.partition("@")
    if not sep or not chart:
        raise argparse.ArgumentTypeError(f"expected CHART@var=value,..., got {text!r}")
    at = {}
    for pair in filter(None, rest.split(",")):
        var, eq, val = pair.partition("=")
        if not eq:
            raise argparse.ArgumentTypeError(f"bad coordinate {pair!r} in {text!r}")
        try:
            at[var.strip()] = evaluate_rational(val.strip())
        except (ValueError, SyntaxError) as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    return chart, at


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="darbouxmono",
        description="Monomialize Darboux first integrals by blow-ups and eliminate the units.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"run the pipeline through the {name} stage")
        p.add_argument("problem", type=Path, help="problem file (TOML)")
        p.add_argument("--jet-order", type=int, default=None, help="truncation order N (default: file or 8)")
        p.add_argument("--max-depth", type=int, default=None, help="maximal blow-up depth")
        p.add_argument("--strategy", choices=[k.value for k in StrategyKind], default=None)
        p.add_argument("--script", type=Path, default=None, help="manual blow-up script file")
        p.add_argument("--nc-point", type=_nc_point, action="append", default=[], metavar="CHART@v=q,...",
                       help="also test normal crossings at this rational point of a chart")
        p.add_argument("--output", type=Path, default=None, help="write the report here instead of stdout")
        p.add_argument("--machine", action="store_true", help="emit the machine-readable JSON report only")
    p = sub.add_parser("verify-report", help="re-check every identity in a saved JSON report")
    p.add_argument("report", type=Path)
    p.add_argument("--output", type=Path, default=None)
    p.add_argument("--machine", action="store_true")
    return parser


def _emit(text: str, output: Path | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text, encoding="utf-8")


def _strategy(args, base: Strategy) -> Strategy:
    strategy = base
    if args.strategy is not None:
        strategy = replace(strategy, kind=StrategyKind(args.strategy))
    if args.script is not None:
        script = parse_script(args.script.read_text(encoding="utf-8"))
        strategy = replace(strategy, script=script)
        if args.strategy is None:
            strategy = replace(strategy, kind=StrategyKind.MANUAL)
    if args.max_depth is not None:
        strategy = replace(strategy, max_depth=args.max_depth)
    return strategy


def _verify(args) -> int:
    report = json.loads(args.report.read_text(encoding="utf-8"))
    results = verify_report(report)
    if args.machine:
        _emit(json.dumps(results, indent=2) + "\n", args.output)
    else:
        lines = [f"{name}: {verdict}" for name, verdict in results.items()]
        failed = [n for n, v in results.items() if v == "failed"]
        lines.append(f"{len(results)} checks, {len(failed)} failed")
        _emit("\n".join(lines) + "\n", args.output)
    return 1 if any(v == "failed" for v in results.values()) else 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify-report":
            return _verify(args)
        if args.jet_order is not None and args.jet_order < 1:
            parser.error("--jet-order must be positive")
        problem = load_problem(args.problem, jet_order=args.jet_order)
        report = run(problem, args.command, strategy=_strategy(args, problem.strategy),
                     nc_points=tuple(args.nc_point))
    except (ParseError, ValueError, KeyError, OSError) as exc:
        print(f"darbouxmono: error: {exc}", file=sys.stderr)
        return 2
    _emit(dumps(report) if args.machine else render_text(report), args.output)
    return 1 if report["summary"]["verification_failed"] else 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
