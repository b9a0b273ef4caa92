"""Command-line front end.

Exit codes: 0 all checks pass, 1 at least one check failed,
2 configuration, model-build or size error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import KreinFockError
from .report import CHECK_GROUPS, ENV_REPORT_DIR, RunConfig, catalog_json, decompose, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _parse_param(text: str):
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected k=v, got {text!r}")
    return key.strip(), value.strip()


def _parse_checks(text: str):
    return tuple(c.strip() for c in text.split(",") if c.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kreinfock",
        description="Verify eta-canonical (anti)commutation relations on truncated Fock spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite and emit a JSON report")
    v.add_argument("--model", required=True, help="built-in model name or path to a JSON model file")
    v.add_argument("--param", action="append", type=_parse_param, default=[], metavar="K=V")
    v.add_argument("--cutoff", type=int, default=None, help="maximum total particle number")
    v.add_argument("--tol", type=float, default=None, help="override every verdict tolerance")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--checks", type=_parse_checks, default=CHECK_GROUPS,
                   help=f"comma-separated subset of: {','.join(CHECK_GROUPS)}")
    v.add_argument("--out", type=Path, default=None,
                   help=f"report path (default: ${ENV_REPORT_DIR}/<model>.json, else stdout)")
    v.add_argument("--timing", action="store_true",
                   help="add wall_time_s to the environment block (the report is then no longer reproducible)")

    d = sub.add_parser("decompose", help="print the fundamental decomposition summary of a model")
    d.add_argument("--model", required=True)
    d.add_argument("--cutoff", type=int, default=None)
    d.add_argument("--param", action="append", type=_parse_param, default=[], metavar="K=V")

    sub.add_parser("list-models", help="print the model catalog as JSON")
    return parser


def _error(exc: Exception) -> int:
    print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
    return EXIT_CONFIG


def _write_report(report, out: Path | None, timing: bool = False):
    text = report.to_json(include_time=timing)
    if out is None and os.environ.get(ENV_REPORT_DIR):
        out = Path(os.environ[ENV_REPORT_DIR]) / f"{report.model}.json"
    if out is None:
        sys.stdout.write(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)
    print(f"{report.model}: {'pass' if report.passed else 'fail'} -> {out}", file=sys.stderr)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list-models":
        sys.stdout.write(catalog_json())
        return EXIT_PASS
    try:
        if args.command == "decompose":
            sys.stdout.write(decompose(args.model, args.cutoff, dict(args.param)).to_json())
            return EXIT_PASS
        config = RunConfig(args.model, dict(args.param), args.cutoff, args.tol, args.seed, args.checks, args.out)
        report = run_suite(config)
    except (KreinFockError, OSError) as exc:
        return _error(exc)
    _write_report(report, args.out, args.timing)
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
