"""Accuracy-vs-hidden-nodes sweep for any config: runs it over a node grid and writes curves.csv.

    python scripts/node_sweep.py configs/balance.json --nodes 100 200 400 600 --trials 5
"""
from __future__ import annotations

import argparse
from dataclasses import replace
from pathlib import Path

from halfelm.experiment import emit_curves, emit_report, load_config, run_experiment


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("config", type=Path)
    ap.add_argument("--nodes", type=int, nargs="+", help="node grid (default: the config's node_counts)")
    ap.add_argument("--trials", type=int)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", type=Path, help="output directory (default: results/<name>_sweep)")
    args = ap.parse_args(argv)

    cfg = load_config(args.config)
    if args.nodes:
        cfg = replace(cfg, node_counts=tuple(args.nodes))
    if args.trials:
        cfg = replace(cfg, trials=args.trials)
    if len(cfg.node_counts) < 2:
        ap.error("a sweep needs at least 2 node counts; pass --nodes")
    out = args.out or Path("results") / f"{cfg.name}_sweep"
    report = run_experiment(cfg, threads=args.threads)
    emit_report(report, out)
    emit_curves(report, out / "curves.csv")
    print((out / "curves.csv").read_text(), end="")


if __name__ == "__main__":
    main()
