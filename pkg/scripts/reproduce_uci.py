"""Run the three UCI benchmark configs with all six solvers and print the markdown results tables.

Needs data/uci/*.csv (see prepare_uci.py). With the default 30 trials this
takes tens of minutes on one core; use --trials for a quick look.

    python scripts/reproduce_uci.py --trials 5
"""
from __future__ import annotations

import argparse
import logging
import time
from dataclasses import replace
from pathlib import Path

from halfelm.experiment import emit_report, load_config, report_markdown, run_experiment

ROOT = Path(__file__).resolve().parents[1]
DATASETS = ("austrian", "ionosphere", "balance")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, help="override the 30 configured trials")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", type=Path, default=ROOT / "results")
    ap.add_argument("datasets", nargs="*", default=DATASETS, choices=DATASETS)
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    for name in args.datasets:
        cfg = load_config(ROOT / "configs" / f"{name}.json")
        if args.trials:
            cfg = replace(cfg, trials=args.trials)
        t0 = time.perf_counter()
        report = run_experiment(cfg, threads=args.threads,
                                progress=lambda t: logging.info("%s: trial %d/%d", name, t + 1, cfg.trials))
        emit_report(report, args.out / name)
        print(report_markdown(report))
        print(f"({name}: {time.perf_counter() - t0:.0f}s, results in {args.out / name})\n")


if __name__ == "__main__":
    main()
