"""Command-line driver for the audit scenarios.

Subcommands map to the audit suites plus `all`, which replays every bundled
scenario.  Exit codes: 0 all checks pass, 1 at least one check failed,
2 usage or configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import SUITE_NAMES, parse_config
from .errors import ConfigError, DivergenceError, NumericalFailureError
from .scenarios import bundled_scenarios, run_scenario

EXIT_PASS = 0
EXIT_CHECK_FAILURE = 1
EXIT_CONFIG_ERROR = 2
EXIT_NUMERICAL_FAILURE = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chronolab",
        description="Audit runner for the clock-extended dynamics laboratory.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUITE_NAMES + ("all",):
        p = sub.add_parser(name, help=f"run the {name} suite"
                           if name != "all" else "run every bundled scenario")
        p.add_argument("--config", type=Path, default=None,
                       help="scenario config file"
                       + (" (optional extra scenario)" if name == "all" else ""))
        p.add_argument("--out", type=Path, default=None,
                       help="directory for reports and plot data")
        p.add_argument("--format", choices=("json", "csv"), default="json",
                       help="emit JSON reports only, or CSV plot data as well")
        p.add_argument("--seed", type=int, default=None,
                       help="override the config seed")
    return parser


def _load_config(path: Path):
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


def _print_report(report):
    for rec in report.records:
        mark = "PASS" if rec.passed else "FAIL"
        threshold = "" if rec.threshold is None else f" {rec.comparator} {rec.threshold:g}"
        note = f"  [{rec.note}]" if rec.note else ""
        print(f"[{mark}] {rec.check_id}: {rec.value:.6g}{threshold}{note}")
    status = "OK" if report.passed else "FAILED"
    print(f"{status}: {report.scenario} "
          f"({sum(r.passed for r in report.records)}/{len(report.records)} checks)")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    formats = ("json",) if args.format == "json" else ("json", "csv")

    try:
        if args.command == "all":
            configs = list(bundled_scenarios())
            if args.config is not None:
                configs.append(_load_config(args.config))
            reports = [
                run_scenario(cfg, out_dir=args.out, formats=formats, seed=args.seed)
                for cfg in configs
            ]
        else:
            if args.config is None:
                parser.error(f"{args.command} requires --config")
            cfg = _load_config(args.config)
            reports = [run_scenario(cfg, suites=(args.command,), out_dir=args.out,
                                    formats=formats, seed=args.seed)]
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except (DivergenceError, NumericalFailureError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL_FAILURE

    for report in reports:
        _print_report(report)
    return EXIT_PASS if all(r.passed for r in reports) else EXIT_CHECK_FAILURE


if __name__ == "__main__":
    sys.exit(main())
