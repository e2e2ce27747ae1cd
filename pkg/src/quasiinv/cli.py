"""Command-line driver.

    qmcli run <config> [--group L] [--m SPEC] [--cap N] [--out PATH]
    qmcli list-checks
    qmcli diff <a.json> <b.json>

Exit codes: 0 all checks PASS; 1 some check FAIL or FINDING; 2 on errors
(bad config, unknown check, unexpected exception).  Relative output paths
resolve against $QMCLI_WORKDIR when set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .checks import list_checks, run
from .reports import (ConfigError, Report, ScenarioConfig, diff_reports,
                      load_config, load_report, parse_config_text)


def _resolve_out(path: str) -> str:
    if os.path.isabs(path):
        return path
    base = os.environ.get("QMCLI_WORKDIR", os.getcwd())
    return os.path.join(base, path)


def _cmd_run(args) -> int:
    try:
        config = load_config(args.config) if args.config else ScenarioConfig()
        if args.group:
            config.group = args.group
        if args.m:
            config.multiplicities = args.m
        if args.cap is not None:
            config.degree_cap = args.cap
        if args.checks:
            config.checks = [c.strip() for c in args.checks.split(",")]
        if args.out:
            config.output = args.out
        report = run(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    for entry in report.results:
        print(f"{entry['verdict']:7s} {entry['check']}: {entry['statement']}")
    if config.output:
        out_path = _resolve_out(config.output)
        os.makedirs(os.path.dirname(out_path) or ".", exist_ok=True)
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
        print(f"report written to {out_path}")
    return report.exit_code()


def _cmd_list_checks(_args) -> int:
    for name, desc in list_checks():
        print(f"{name:24s} {desc}")
    return 0


def _cmd_diff(args) -> int:
    try:
        a = load_report(args.a)
        b = load_report(args.b)
    except (ConfigError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    differences = diff_reports(a, b)
    for d in differences:
        print(f"{d['path']}: {d['a']!r} != {d['b']!r}")
    if not differences:
        print("reports identical (timings ignored)")
    return 0 if not differences else 1


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="qmcli",
        description="exact verification scenarios for quasiinvariant algebras")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario config")
    p_run.add_argument("config", nargs="?", help="path to a config file")
    p_run.add_argument("--group", help="override the group label")
    p_run.add_argument("--m", help="override the multiplicities")
    p_run.add_argument("--cap", type=int, help="override the degree cap")
    p_run.add_argument("--checks", help="comma-separated check ids")
    p_run.add_argument("--out", help="override the report output path")
    p_run.set_defaults(fn=_cmd_run)

    p_list = sub.add_parser("list-checks", help="list registered checks")
    p_list.set_defaults(fn=_cmd_list_checks)

    p_diff = sub.add_parser("diff", help="diff two reports (timings ignored)")
    p_diff.add_argument("a")
    p_diff.add_argument("b")
    p_diff.set_defaults(fn=_cmd_diff)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
