"""Command line entry point ``fracvim``.

Exit codes: 0 success, 1 invalid input, 2 computation error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from collections.abc import Sequence
from dataclasses import replace

import numpy as np

from fracvim import __version__
from fracvim.analysis import (
    DEFAULT_T,
    DEFAULT_X,
    REFERENCE_ALPHAS,
    REFERENCE_TAUS,
    error_curve,
    exact_for,
    table_sweep,
)
from fracvim.config import ConfigError, ProblemConfig, load_config
from fracvim.vim import classical_solution, evaluate_solution, truncated_solution

EXIT_OK, EXIT_INVALID, EXIT_COMPUTE, EXIT_IO = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def fmt(value: float) -> str:
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".17g")


def _floats(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("list must be nonempty")
    return values


def csv_text(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _with_overrides(config: ProblemConfig, args: argparse.Namespace) -> ProblemConfig:
    ev = config.eval
    if getattr(args, "n", None) is not None:
        ev = replace(ev, n_terms=args.n)
    if getattr(args, "t", None) is not None:
        ev = replace(ev, t=args.t)
    alpha = config.alpha if args.alpha is None else args.alpha
    if not 0.0 <= alpha < 1.0:
        raise ConfigError("--alpha", f"must satisfy 0 <= alpha < 1, got {alpha}")
    if ev.t < 0:
        raise ConfigError("--t", f"must be nonnegative, got {ev.t}")
    if ev.n_terms < 0:
        raise ConfigError("--n", f"must be nonnegative, got {ev.n_terms}")
    return replace(config, alpha=alpha, eval=ev)


def solve_csv(config: ProblemConfig) -> str:
    """``x, c_n[, c_exact]`` on the configured x grid at the configured time."""
    ev = config.eval
    if ev.x_steps < 2:
        raise ConfigError("eval.x_steps", f"grid needs at least 2 points, got {ev.x_steps}")
    problem = config.to_problem()
    sol = truncated_solution(problem, ev.n_terms)
    xs = np.linspace(ev.x_min, ev.x_max, ev.x_steps)
    exact = exact_for(problem)
    if exact is not None and problem.alpha == 0.0:
        exact = lambda x, t: float(classical_solution(x, t))  # noqa: E731
    header = ["x", f"c_{ev.n_terms}"] + (["c_exact"] if exact is not None else [])
    rows = []
    for x in xs:
        row = [fmt(float(x)), fmt(evaluate_solution(sol, float(x), ev.t))]
        if exact is not None:
            row.append(fmt(exact(float(x), ev.t)))
        rows.append(row)
    return csv_text(header, rows)


def error_curve_csv(config: ProblemConfig, n_max: int, x: float, t: float) -> str:
    """``n, E_n, ln_E_n`` for ``n = 1..n_max``."""
    if n_max < 1:
        raise ConfigError("--n-max", f"must be at least 1, got {n_max}")
    problem = config.to_problem()
    exact = exact_for(problem)
    if exact is None:
        raise ArithmeticError("no closed-form solution is known for this problem")
    curve = error_curve(problem, range(1, n_max + 1), x, t, exact)
    rows = [[str(n), fmt(e), fmt(math.log(e)) if e > 0 else "-inf"] for n, e in curve]
    return csv_text(["n", "E_n", "ln_E_n"], rows)


def table_csv(alphas: Sequence[float], taus: Sequence[float], x: float, t: float, workers: int | None = None) -> str:
    """Grid of minimal term counts; header row holds alpha, first column tau."""
    result = table_sweep(alphas, taus, x, t, workers=workers)
    rows = []
    for tau, cells in zip(result.taus, result.grid()):
        rows.append([format(tau, "g")] + ["NA" if n is None else str(n) for n in cells])
    return csv_text(["tau"] + [format(a, "g") for a in result.alphas], rows)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fracvim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="truncated series on an x grid")
    p.add_argument("config")
    p.add_argument("--n", type=int, help="number of corrections (overrides eval.n_terms)")
    p.add_argument("--alpha", type=float)
    p.add_argument("--t", type=float)
    p.add_argument("--out")

    p = sub.add_parser("error-curve", help="relative error against n")
    p.add_argument("config")
    p.add_argument("--n-max", type=int, default=15)
    p.add_argument("--alpha", type=float)
    p.add_argument("--t", type=float, help="evaluation time (overrides eval.t)")
    p.add_argument("--x-point", type=float, default=DEFAULT_X)
    p.add_argument("--out")

    p = sub.add_parser("table", help="minimal term counts over (alpha, tau)")
    p.add_argument("--alphas", type=_floats, default=list(REFERENCE_ALPHAS))
    p.add_argument("--taus", type=_floats, default=[float(v) for v in REFERENCE_TAUS])
    p.add_argument("--t", type=float, default=DEFAULT_T)
    p.add_argument("--x-point", type=float, default=DEFAULT_X)
    p.add_argument("--threads", type=int, help="worker threads (default: FRACVIM_THREADS or 1)")
    p.add_argument("--out")

    sub.add_parser("version", help="print the package version")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "version":
            text = f"fracvim {__version__}\n"
        elif args.command == "solve":
            text = solve_csv(_with_overrides(load_config(args.config), args))
        elif args.command == "error-curve":
            config = _with_overrides(load_config(args.config), args)
            text = error_curve_csv(config, args.n_max, args.x_point, config.eval.t)
        else:
            text = table_csv(args.alphas, args.taus, args.x_point, args.t, args.threads)
        _emit(text, getattr(args, "out", None))
    except ConfigError as exc:
        print(f"fracvim: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"fracvim: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ArithmeticError, ValueError) as exc:
        print(f"fracvim: computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
