"""Write the curve data behind each negativity figure and print its headline numbers.

    python3 scripts/reproduce_figures.py --out-dir data/
"""

import argparse
import csv
from collections import defaultdict
from pathlib import Path

from entransfer.cli import FIGURES, figure_csv


def headline(path: Path) -> dict[str, tuple[float, float]]:
    """Per curve: (max negativity, time at which it occurs)."""
    best = defaultdict(lambda: (-1.0, 0.0))
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            n, t = float(row["negativity"]), float(row["t"])
            if n > best[row["curve"]][0]:
                best[row["curve"]] = (n, t)
    return dict(best)


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--out-dir", default="data")
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name in FIGURES:
        path = out / f"{name}.csv"
        path.write_text(figure_csv(name), newline="\n")
        for curve, (n, t) in headline(path).items():
            print(f"{name:6s} {curve:16s} max negativity {n:.4f} at t = {t:.4f}")


if __name__ == "__main__":
    main()
