"""Write CSV data for the sinusoidal example: solution profiles, error curves and term counts.

    python scripts/series_data.py --outdir series/

profile_alpha*.csv   c_7 and the exact solution over x at t = 0.1
error_alpha*.csv     relative error E_n against n at (pi, 0.1)
nstar_by_alpha.csv   minimal term count n* against alpha, one column per tau
nstar_by_tau.csv     n* against tau, one column per alpha
nstar_fits.csv       least-squares line of n* on tau for each alpha
"""

import argparse
import math
from dataclasses import replace
from pathlib import Path

from fracvim.analysis import REFERENCE_ALPHAS, REFERENCE_TAUS, linear_fit, table_sweep
from fracvim.cli import csv_text, error_curve_csv, fmt, solve_csv
from fracvim.config import EvalConfig, bundled_config

PROFILE_ALPHAS = (0.2, 0.4, 0.6, 0.8)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--outdir", default="series")
    parser.add_argument("--n-max", type=int, default=15)
    args = parser.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)

    base = bundled_config()
    for a in PROFILE_ALPHAS:
        config = replace(base, alpha=a, eval=EvalConfig(0.0, 2 * math.pi, 129, 0.1, 7))
        (out / f"profile_alpha{a}.csv").write_text(solve_csv(config), encoding="utf-8")
        (out / f"error_alpha{a}.csv").write_text(error_curve_csv(config, args.n_max, math.pi, 0.1), encoding="utf-8")

    sweep = table_sweep(REFERENCE_ALPHAS, REFERENCE_TAUS)
    grid = sweep.grid()
    na = lambda n: "NA" if n is None else str(n)  # noqa: E731

    rows = [[format(a, "g")] + [na(grid[i][j]) for i in range(len(REFERENCE_TAUS))] for j, a in enumerate(REFERENCE_ALPHAS)]
    (out / "nstar_by_alpha.csv").write_text(csv_text(["alpha"] + [f"tau={t}" for t in REFERENCE_TAUS], rows), encoding="utf-8")

    fits = []
    for j in range(len(REFERENCE_ALPHAS)):
        fits.append(linear_fit(REFERENCE_TAUS, [grid[i][j] for i in range(len(REFERENCE_TAUS))]))
    rows = [[str(tau)] + [na(n) for n in grid[i]] for i, tau in enumerate(REFERENCE_TAUS)]
    (out / "nstar_by_tau.csv").write_text(csv_text(["tau"] + [f"alpha={a:g}" for a in REFERENCE_ALPHAS], rows), encoding="utf-8")
    fit_rows = [[format(a, "g"), fmt(s), fmt(b), fmt(r2)] for a, (s, b, r2) in zip(REFERENCE_ALPHAS, fits)]
    (out / "nstar_fits.csv").write_text(csv_text(["alpha", "slope", "intercept", "r2"], fit_rows), encoding="utf-8")
    print(f"wrote {len(list(out.glob('*.csv')))} files to {out}/")


if __name__ == "__main__":
    main()
