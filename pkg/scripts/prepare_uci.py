"""Write the three UCI benchmark CSVs used by configs/{austrian,ionosphere,balance}.json.

Australian credit and Ionosphere are read from the raw KEEL copies bundled in
the ``keel_ds`` wheel (pass the wheel or an unpacked ``keel_ds`` directory;
installing the package is not required). Balance Scale is generated: it is the
full 5^4 grid of weight/distance pairs labelled by comparing torques, written
in the UCI file order.

    python scripts/prepare_uci.py --keel path/to/keel_ds-0.2.5-py3-none-any.whl
"""
from __future__ import annotations

import argparse
import csv
import importlib.util
import itertools
import zipfile
from pathlib import Path

RAW = "keel_ds/data/balanced/raw/{}.dat"


def read_keel(source: Path | None, name: str) -> list[list[str]]:
    member = RAW.format(name)
    if source is None:
        spec = importlib.util.find_spec("keel_ds")
        if spec is None or not spec.submodule_search_locations:
            raise SystemExit("keel_ds not found; pass --keel <wheel or directory>")
        source = Path(next(iter(spec.submodule_search_locations))).parent
    if source.suffix in (".whl", ".zip"):
        with zipfile.ZipFile(source) as zf:
            text = zf.read(member).decode("utf-8")
    else:
        text = (source / member).read_text(encoding="utf-8")
    rows = []
    for line in text.splitlines():
        if line.strip() and not line.startswith("@"):
            rows.append([c.strip() for c in line.split(",")])
    return rows


def austrian(source):
    rows = read_keel(source, "australian")
    header = [f"A{i}" for i in range(1, 15)] + ["class"]
    return header, rows


def ionosphere(source):
    # the KEEL copy drops the all-zero second attribute; restore the 34-column layout
    rows = [[r[0], "0"] + r[1:] for r in read_keel(source, "ionosphere")]
    header = [f"a{i:02d}" for i in range(1, 35)] + ["class"]
    return header, rows


def balance(_source):
    rows = []
    for lw, ld, rw, rd in itertools.product(range(1, 6), repeat=4):
        left, right = lw * ld, rw * rd
        label = "L" if left > right else "R" if right > left else "B"
        rows.append([label, lw, ld, rw, rd])
    return ["class", "left_weight", "left_distance", "right_weight", "right_distance"], rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--keel", type=Path, help="keel_ds wheel or directory containing keel_ds/")
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[1] / "data" / "uci")
    args = ap.parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)
    for name, build in [("austrian", austrian), ("ionosphere", ionosphere), ("balance", balance)]:
        header, rows = build(args.keel)
        path = args.out / f"{name}.csv"
        with path.open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
        print(f"{path}: {len(rows)} rows x {len(header) - 1} features")


if __name__ == "__main__":
    main()
