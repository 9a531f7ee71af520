"""``bench`` command line: run a benchmark config, or extract accuracy curves.

Exit codes: 0 success, 2 config error, 3 dataset error, 4 some solver cells failed.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .data import DatasetError
from .experiment import ConfigError, ExperimentReport, emit_curves, emit_report, load_config, run_experiment

log = logging.getLogger("halfelm")

EXIT_OK, EXIT_CONFIG, EXIT_DATASET, EXIT_PARTIAL = 0, 2, 3, 4
FORMATS = ("markdown", "csv", "json")


def _cmd_run(args) -> int:
    try:
        cfg = load_config(args.config)
        if args.trials is not None:
            cfg = replace(cfg, trials=args.trials)
    except (ConfigError, ValueError) as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    out_dir = args.out_dir or cfg.output_dir or Path("results") / cfg.name
    try:
        report = run_experiment(
            cfg, threads=args.threads,
            progress=lambda t: log.info("trial %d/%d done", t + 1, cfg.trials),
        )
    except DatasetError as exc:
        log.error("dataset error: %s", exc)
        return EXIT_DATASET
    formats = (args.format,) if args.format else FORMATS
    for fmt, path in emit_report(report, out_dir, formats).items():
        print(f"{fmt}: {path}")
    if report.failures:
        log.warning("%d solver cell(s) failed; see the report", len(report.failures))
        return EXIT_PARTIAL
    return EXIT_OK


def _cmd_curves(args) -> int:
    try:
        report = ExperimentReport.load(args.report)
    except (OSError, ValueError, TypeError) as exc:
        log.error("cannot read report: %s", exc)
        return EXIT_CONFIG
    out = args.out or Path(args.report).with_name("curves.csv")
    try:
        emit_curves(report, out)
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    print(f"curves: {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bench", description="Regularized ELM benchmark harness")
    ap.add_argument("-v", "--verbose", action="store_true", help="log per-trial progress")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment config")
    run.add_argument("--config", required=True, type=Path)
    run.add_argument("--out-dir", type=Path)
    run.add_argument("--format", choices=FORMATS, help="write only this format (default: all)")
    run.add_argument("--threads", type=int, default=1)
    run.add_argument("--trials", type=int, help="override the configured trial count")
    run.set_defaults(func=_cmd_run)

    curves = sub.add_parser("curves", help="accuracy-vs-nodes CSV from a JSON report")
    curves.add_argument("--report", required=True, type=Path)
    curves.add_argument("--out", type=Path)
    curves.set_defaults(func=_cmd_curves)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
