"""Relative truncation error of the series, minimal-term search and decay rates."""

from __future__ import annotations

import math
import os
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from fracvim.fracops import FracOrder
from fracvim.specfun import ConvergenceError
from fracvim.vim import (
    ProblemSpec,
    evaluate_solution,
    evaluate_terms,
    exact_sinusoidal,
    is_sinusoidal,
    iter_corrections,
    sinusoidal_problem,
    truncated_solution,
)

__all__ = [
    "DegeneratePointError",
    "ErrorRecord",
    "SweepResult",
    "REFERENCE_ALPHAS",
    "REFERENCE_TAUS",
    "REFERENCE_TABLE",
    "exact_for",
    "relative_error",
    "error_curve",
    "min_terms",
    "table_sweep",
    "convergence_rate",
    "linear_fit",
]

DEFAULT_X = math.pi
DEFAULT_T = 0.1
MAX_TERMS = 200
DEGENERATE_BELOW = 1e-14
TAIL_EPS = 1e-17
TAIL_CAP = 20_000

REFERENCE_ALPHAS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
REFERENCE_TAUS = (5, 10, 15, 20, 25, 30, 35)
# reference minimal term counts, rows tau, columns alpha
REFERENCE_TABLE = {
    5: (3, 3, 3, 4, 4, 5, 7, 10, 20),
    10: (4, 5, 5, 6, 7, 9, 12, 17, 34),
    15: (6, 6, 7, 8, 10, 12, 16, 24, 47),
    20: (7, 8, 9, 10, 12, 15, 20, 30, 60),
    25: (8, 9, 11, 12, 15, 18, 24, 36, 72),
    30: (10, 11, 12, 14, 17, 21, 28, 42, 83),
    35: (11, 12, 14, 16, 19, 24, 31, 47, 93),
}


class DegeneratePointError(ValueError):
    """The exact solution vanishes at the point, so the relative error is undefined."""


@dataclass(frozen=True)
class ErrorRecord:
    alpha: float
    tau: float
    n: int
    error: float

    def __post_init__(self) -> None:
        if self.n < 0 or not self.error >= 0:
            raise ValueError(f"invalid record n={self.n}, error={self.error}")


def exact_for(problem: ProblemSpec) -> Callable[[float, float], float] | None:
    """Closed-form solution when one is known (the sinusoidal problem, any alpha)."""
    if is_sinusoidal(problem):
        alpha = problem.alpha
        return lambda x, t: float(exact_sinusoidal(alpha, x, t))
    return None


class _TermValues:
    """Lazily evaluated corrections ``e_1(x, t), e_2(x, t), ...`` at one point."""

    def __init__(self, problem: ProblemSpec, x: float, t: float) -> None:
        self._it = iter_corrections(problem)
        self._x, self._t = x, t
        self.values: list[float] = []

    def __getitem__(self, j: int) -> float:
        while len(self.values) <= j:
            self.values.append(math.fsum(evaluate_terms(next(self._it), self._x, self._t)))
        return self.values[j]

    def tail(self, n: int) -> float:
        """``sum_{j >= n} e_{j+1}(x, t)``, i.e. ``c_inf - c_n``.

        Summed until two consecutive terms fall below ``1e-17`` of the
        running tail, so the result keeps full relative accuracy however
        small the tail is.
        """
        parts: list[float] = []
        running = 0.0
        small = 0
        for j in range(n, n + TAIL_CAP):
            v = self[j]
            parts.append(v)
            running += v
            if abs(v) <= TAIL_EPS * abs(running) or (v == 0.0 and running == 0.0):
                small += 1
                if small == 2:
                    return math.fsum(parts)
            else:
                small = 0
        raise ConvergenceError(f"series tail from n={n} did not converge in {TAIL_CAP} terms")


def _exact_value(problem: ProblemSpec, exact, x: float, t: float, values: _TermValues) -> float:
    if exact is None:
        exact = exact_for(problem)
    if exact is not None:
        return float(exact(x, t))
    # no closed form: fall back to the converged series itself
    return math.fsum([float(problem.initial(x)), values.tail(0)])


def relative_error(
    problem: ProblemSpec,
    n: int,
    x: float = DEFAULT_X,
    t: float = DEFAULT_T,
    exact: Callable[[float, float], float] | None = None,
    method: str = "tail",
) -> float:
    """``|c - c_n| / |c|`` at ``(x, t)``.

    ``method="tail"`` takes the numerator as the summed remainder of the
    series, which stays accurate far below double-precision resolution of
    ``c`` itself.  ``method="direct"`` subtracts the evaluated ``c_n`` from
    the closed form and bottoms out near ``1e-16``.
    """
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    values = _TermValues(problem, x, t)
    c = _exact_value(problem, exact, x, t, values)
    if abs(c) < DEGENERATE_BELOW:
        raise DegeneratePointError(f"|c({x}, {t})| = {abs(c):.3g} is too small for a relative error")
    if method == "tail":
        diff = values.tail(n)
    elif method == "direct":
        diff = c - evaluate_solution(truncated_solution(problem, n), x, t)
    else:
        raise ValueError(f"unknown method {method!r}")
    return abs(diff) / abs(c)


def error_curve(
    problem: ProblemSpec,
    n_values: Iterable[int],
    x: float = DEFAULT_X,
    t: float = DEFAULT_T,
    exact: Callable[[float, float], float] | None = None,
) -> list[tuple[int, float]]:
    """``[(n, E_n), ...]`` sharing one evaluation of the correction terms."""
    values = _TermValues(problem, x, t)
    c = _exact_value(problem, exact, x, t, values)
    if abs(c) < DEGENERATE_BELOW:
        raise DegeneratePointError(f"|c({x}, {t})| = {abs(c):.3g} is too small for a relative error")
    return [(n, abs(values.tail(n)) / abs(c)) for n in n_values]


def min_terms(
    order: FracOrder | float,
    tau: float,
    x: float = DEFAULT_X,
    t: float = DEFAULT_T,
    cap: int = MAX_TERMS,
) -> int:
    """Smallest ``n >= 1`` with ``E_n(x, t) <= exp(-tau)`` for the sinusoidal problem.

    Raises :class:`ConvergenceError` if no ``n <= cap`` qualifies.
    """
    return _search(order, tau, x, t, cap).n


def _search(order, tau, x, t, cap) -> ErrorRecord:
    alpha = order.alpha if isinstance(order, FracOrder) else float(order)
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"min_terms needs 0 < alpha < 1, got {alpha}")
    problem = sinusoidal_problem(alpha)
    values = _TermValues(problem, x, t)
    c = _exact_value(problem, None, x, t, values)
    if abs(c) < DEGENERATE_BELOW:
        raise DegeneratePointError(f"|c({x}, {t})| = {abs(c):.3g} is too small for a relative error")
    target = math.exp(-tau)
    for n in range(1, cap + 1):
        err = abs(values.tail(n)) / abs(c)
        if err <= target:
            return ErrorRecord(alpha, tau, n, err)
    raise ConvergenceError(f"E_n > exp(-{tau}) for all n <= {cap} at alpha={alpha}")


@dataclass
class SweepResult:
    alphas: tuple[float, ...]
    taus: tuple[float, ...]
    records: dict[tuple[float, float], ErrorRecord] = field(default_factory=dict)
    failures: dict[tuple[float, float], str] = field(default_factory=dict)

    def cell(self, alpha: float, tau: float) -> int | None:
        rec = self.records.get((alpha, tau))
        return None if rec is None else rec.n

    def grid(self) -> list[list[int | None]]:
        """Rows indexed by tau, columns by alpha."""
        return [[self.cell(a, tau) for a in self.alphas] for tau in self.taus]


def _worker_count(workers: int | None) -> int:
    if workers is not None:
        return max(1, workers)
    env = os.environ.get("FRACVIM_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def table_sweep(
    alphas: Sequence[float],
    taus: Sequence[float],
    x: float = DEFAULT_X,
    t: float = DEFAULT_T,
    workers: int | None = None,
) -> SweepResult:
    """:func:`min_terms` over every ``(alpha, tau)`` pair.

    A failing cell is recorded in ``failures`` and the sweep carries on.
    Cells are independent; with ``workers > 1`` (or ``FRACVIM_THREADS``)
    they run on a thread pool and are merged by key.
    """
    if not alphas or not taus:
        raise ValueError("alphas and taus must be nonempty")
    result = SweepResult(tuple(alphas), tuple(taus))
    keys = [(a, tau) for tau in taus for a in alphas]

    def run(key):
        a, tau = key
        try:
            return key, _search(a, tau, x, t, MAX_TERMS), None
        except (ArithmeticError, ValueError) as exc:
            return key, None, f"{type(exc).__name__}: {exc}"

    n_workers = _worker_count(workers)
    if n_workers == 1:
        outcomes = [run(k) for k in keys]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            outcomes = list(pool.map(run, keys))
    for key, rec, err in sorted(outcomes, key=lambda o: keys.index(o[0])):
        if rec is not None:
            result.records[key] = rec
        else:
            result.failures[key] = err
    return result


def linear_fit(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float, float]:
    """Least-squares line ``y = slope*x + intercept``; returns ``(slope, intercept, r_squared)``."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.size < 2:
        raise ValueError("need at least two points")
    slope, intercept = np.polyfit(x, y, 1)
    ss_res = float(np.sum((y - (slope * x + intercept)) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return float(slope), float(intercept), min(1.0, max(0.0, r2))


def convergence_rate(errors: Sequence[tuple[int, float]]) -> tuple[float, float]:
    """Slope and R^2 of ``ln E_n`` regressed on ``n``."""
    if len(errors) < 3:
        raise ValueError(f"need at least 3 (n, E_n) points, got {len(errors)}")
    if any(e <= 0 for _, e in errors):
        raise ValueError("errors must be positive to take logarithms")
    slope, _, r2 = linear_fit([n for n, _ in errors], [math.log(e) for _, e in errors])
    return slope, r2
