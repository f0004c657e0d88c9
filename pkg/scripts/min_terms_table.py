"""Recompute the minimal-term table and compare it cell by cell with the reference grid.

    python scripts/min_terms_table.py [--threads 4] [--out table.csv]
"""

import argparse
import sys
import time

from fracvim.analysis import REFERENCE_ALPHAS, REFERENCE_TABLE, REFERENCE_TAUS, table_sweep
from fracvim.cli import table_csv


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--threads", type=int)
    parser.add_argument("--out", help="also write the computed grid as CSV")
    args = parser.parse_args()

    start = time.perf_counter()
    sweep = table_sweep(REFERENCE_ALPHAS, REFERENCE_TAUS, workers=args.threads)
    elapsed = time.perf_counter() - start

    print("tau  " + " ".join(f"{a:>8g}" for a in REFERENCE_ALPHAS))
    offsets = []
    for tau, row in zip(REFERENCE_TAUS, sweep.grid()):
        cells = []
        for n, reference in zip(row, REFERENCE_TABLE[tau]):
            if n is None:
                cells.append(f"{'NA':>8}")
                continue
            offsets.append(n - reference)
            cells.append(f"{n:>4d}({n - reference:+d})")
        print(f"{tau:<4d} " + " ".join(cells))
    within = sum(abs(d) <= 1 for d in offsets)
    print(f"\n{within}/{len(REFERENCE_ALPHAS) * len(REFERENCE_TAUS)} cells within +-1 of the reference value; "
          f"{offsets.count(0)} exact, {offsets.count(-1)} one below, {offsets.count(1)} one above; {elapsed:.2f}s")
    for key, msg in sweep.failures.items():
        print(f"failed {key}: {msg}", file=sys.stderr)

    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(table_csv(REFERENCE_ALPHAS, REFERENCE_TAUS, 3.141592653589793, 0.1, args.threads))
    return 0 if within == len(offsets) == 63 else 1


if __name__ == "__main__":
    sys.exit(main())
