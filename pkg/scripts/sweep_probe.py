"""Sweep D = {0, 1, b} for x^2 - x - 3 and archive the verdict table as CSV.

    python3 scripts/sweep_probe.py [--out tests/golden/sweep_probe.csv] [--jobs 4]

The archived file omits timings so it is reproducible byte for byte.
"""
import argparse
import logging
from fractions import Fraction
from pathlib import Path

from selfaffine.algebra import QuadraticPoly
from selfaffine.cli import write_sweep_csv
from selfaffine.connectivity import frange, sweep, transitions

ROOT = Path(__file__).resolve().parents[1]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=ROOT / "tests" / "golden" / "sweep_probe.csv")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--timing", action="store_true", help="fill the ms column")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    bs = frange(Fraction(6, 5), Fraction(9, 2), Fraction(1, 20))
    rows = sweep(QuadraticPoly(-1, -3), bs, jobs=args.jobs)
    with open(args.out, "w", newline="") as fh:
        write_sweep_csv(rows, fh, with_timing=args.timing)
    logging.info("%d rows -> %s", len(rows), args.out)
    for lo, hi in transitions(rows):
        logging.info("verdict changes between b=%s and b=%s", lo, hi)


if __name__ == "__main__":
    main()
