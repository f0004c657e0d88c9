"""Variational iteration series for ``c_t = D^a[(A c)] + q(x, t)``, ``c(x, 0) = f(x)``.

With the Lagrange multiplier fixed at ``-1`` the iteration reads

    c_{n+1} = f + J_t D^a [A c_n] + J_t q,       c_0 = f,

where ``J_t`` integrates from 0 to t.  Writing ``q = sum_k q_k(x) t^k / k!``,
each correction ``e_{j+1} = c_{j+1} - c_j`` has the closed form

    e_{j+1} = (A^{j+1} f) t^{(j+1)b} / Gamma(1 + (j+1)b)
              + sum_k (A^j q_k) t^{k+1+jb} / Gamma(2 + k + jb),     b = 1 - a,

so a truncated solution is a finite sum of spatial functions times real
powers of t.  Throughout, ``c_n`` denotes ``f`` plus the first ``n``
corrections.
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from fracvim.fracops import FracOrder, TimePowerTerm, as_order, power_rule_derivative, time_derivative
from fracvim.spatial import LinearOperator, SpatialAtom, SpatialFunction, apply_operator, apply_operator_n
from fracvim.specfun import GAMMA_MAX, MLParams, gamma, log_gamma, mittag_leffler

__all__ = [
    "SourceSeries",
    "ProblemSpec",
    "SolutionSeries",
    "sinusoidal_problem",
    "is_sinusoidal",
    "correction_term",
    "iter_corrections",
    "truncated_solution",
    "evaluate_solution",
    "evaluate_terms",
    "exact_sinusoidal",
    "classical_solution",
    "residual",
    "fractional_operator_image",
    "LAGRANGE_MULTIPLIER",
]

# stationarity of the correction functional gives 1 + lambda = 0, lambda' = 0
LAGRANGE_MULTIPLIER = -1.0

Expansion = list[tuple[SpatialFunction, float]]


@dataclass(frozen=True)
class SourceSeries:
    """Time-Taylor coefficients of the source, ``q(x, t) = sum_k q_k(x) t^k / k!``.

    ``truncation_order`` records where an infinite Taylor series was cut by
    the caller; it is None when the given series is exact.
    """

    entries: Mapping[int, SpatialFunction] = field(default_factory=dict)
    truncation_order: int | None = None

    def __post_init__(self) -> None:
        clean = {}
        for k, qk in self.entries.items():
            if int(k) != k or k < 0:
                raise ValueError(f"source index k must be a nonnegative integer, got {k}")
            if not qk.is_zero():
                clean[int(k)] = qk
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    @classmethod
    def time_independent(cls, g: SpatialFunction) -> SourceSeries:
        """``q(x, t) = g(x)``: only ``q_0`` is nonzero."""
        return cls({0: g})

    @classmethod
    def separable(cls, g: SpatialFunction, taylor: Sequence[float]) -> SourceSeries:
        """``q(x, t) = g(x) h(t)`` given ``taylor[k] = h^(k)(0)`` for ``k < len(taylor)``.

        The Taylor list is taken as a truncation of ``h``; its length is kept
        as ``truncation_order``.
        """
        return cls({k: hk * g for k, hk in enumerate(taylor) if hk != 0.0}, len(taylor))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SourceSeries):
            return NotImplemented
        return self.entries == other.entries and self.truncation_order == other.truncation_order

    def __hash__(self) -> int:
        return hash((tuple(self.entries.items()), self.truncation_order))


@dataclass(frozen=True)
class ProblemSpec:
    order: FracOrder
    op: LinearOperator
    initial: SpatialFunction
    source: SourceSeries = field(default_factory=SourceSeries)

    def __post_init__(self) -> None:
        object.__setattr__(self, "order", as_order(self.order))

    @property
    def alpha(self) -> float:
        return self.order.alpha


def sinusoidal_problem(alpha: float) -> ProblemSpec:
    """``c_t = D^a[c_xx] + t sin x`` with ``c(x, 0) = cos x``."""
    return ProblemSpec(
        FracOrder(alpha),
        LinearOperator.derivative(2),
        SpatialFunction.cos(),
        SourceSeries({1: SpatialFunction.sin()}),
    )


def is_sinusoidal(problem: ProblemSpec) -> bool:
    ref = sinusoidal_problem(problem.alpha)
    return (
        problem.op == ref.op
        and problem.initial == ref.initial
        and problem.source.entries == ref.source.entries
    )


def _inv_gamma(x: float) -> float:
    if x < GAMMA_MAX - 1:
        return 1.0 / gamma(x)
    return math.exp(-log_gamma(x))


def _correction(problem: ProblemSpec, n: int, af: SpatialFunction, aq: Mapping[int, SpatialFunction]) -> Expansion:
    b = problem.order.beta
    lam = (n + 1) * b
    out = [(af * _inv_gamma(1.0 + lam), lam)]
    for k, g in aq.items():
        out.append((g * _inv_gamma(2.0 + k + n * b), (k + 1) + n * b))
    return out


def correction_term(problem: ProblemSpec, n: int) -> Expansion:
    """``e_{n+1}`` as ``[(spatial, exponent), ...]``.

    The first entry is the initial-data part, kept even when it vanishes;
    one entry follows per source coefficient ``q_k``.
    """
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    af = apply_operator_n(problem.op, problem.initial, n + 1)
    aq = {k: apply_operator_n(problem.op, g, n) for k, g in problem.source.entries.items()}
    return _correction(problem, n, af, aq)


def iter_corrections(problem: ProblemSpec) -> Iterator[Expansion]:
    """Yield ``e_1, e_2, ...`` without recomputing ``A^n`` from scratch."""
    af = apply_operator(problem.op, problem.initial)
    aq = dict(problem.source.entries)
    n = 0
    while True:
        yield _correction(problem, n, af, aq)
        af = apply_operator(problem.op, af)
        aq = {k: apply_operator(problem.op, g) for k, g in aq.items()}
        n += 1


@dataclass(frozen=True)
class SolutionSeries:
    """``c_n(x, t) = base(x) + sum_j spatial_j(x) * t**exponent_j``.

    ``corrections[j]`` is ``e_{j+1}``; :attr:`terms` flattens them.
    """

    base: SpatialFunction
    corrections: tuple[tuple[tuple[SpatialFunction, float], ...], ...]
    alpha: float

    @property
    def n(self) -> int:
        return len(self.corrections)

    @property
    def terms(self) -> Expansion:
        return [term for e in self.corrections for term in e]

    def __call__(self, x, t):
        return evaluate_solution(self, x, t)


def truncated_solution(problem: ProblemSpec, n: int) -> SolutionSeries:
    """``c_n``: the initial data plus the first ``n`` corrections (``c_0 = f``)."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    corrections = []
    it = iter_corrections(problem)
    for _ in range(n):
        corrections.append(tuple(next(it)))
    return SolutionSeries(problem.initial, tuple(corrections), problem.alpha)


def evaluate_terms(terms: Sequence[tuple[SpatialFunction, float]], x: float, t: float) -> list[float]:
    """Every atom-times-power contribution of an expansion at a scalar point."""
    out = []
    for g, lam in terms:
        tp = t**lam
        out.extend(float(a(x)) * tp for a in g.atoms)
    return out


def evaluate_solution(sol: SolutionSeries, x, t: float):
    """Value of ``c_n`` at ``(x, t)``; ``x`` may be an array.  ``t**0`` is 1 at ``t = 0``."""
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    if np.ndim(x) == 0:
        parts = [float(a(float(x))) for a in sol.base.atoms]
        parts += evaluate_terms(sol.terms, float(x), t)
        return math.fsum(parts)
    x = np.asarray(x, dtype=float)
    return np.array([evaluate_solution(sol, xi, t) for xi in x.ravel()]).reshape(x.shape)


def exact_sinusoidal(order: FracOrder | float, x, t: float):
    """Closed form for the sinusoidal problem,
    ``E_b(-t^b) cos x + t^2 E_{b,3}(-t^b) sin x`` with ``b = 1 - a``."""
    b = as_order(order).beta
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    z = -(t**b)
    e1 = mittag_leffler(MLParams(b, 1.0), z)
    e3 = mittag_leffler(MLParams(b, 3.0), z)
    return e1 * np.cos(x) + t * t * e3 * np.sin(x)


def classical_solution(x, t: float):
    """``alpha = 0`` solution ``e^-t cos x + (e^-t + t - 1) sin x``."""
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    return math.exp(-t) * np.cos(x) + (math.expm1(-t) + t) * np.sin(x)


def _collect(pieces: Sequence[tuple[SpatialFunction, float]], rtol: float = 1e-13) -> Expansion:
    """Merge terms with equal exponents and drop coefficients that cancel to rounding.

    Exponents closer than ``1e-12`` are treated as equal, since ``j*b - 1``
    and ``(j-1)*b - a`` differ only by rounding.
    """
    flat = sorted(
        ((lam, a) for g, lam in pieces for a in g.atoms), key=lambda item: item[0]
    )
    groups: list[tuple[float, list[SpatialAtom]]] = []
    for lam, atom in flat:
        if groups and abs(lam - groups[-1][0]) <= 1e-12 * max(1.0, abs(lam)):
            groups[-1][1].append(atom)
        else:
            groups.append((lam, [atom]))
    out: Expansion = []
    for lam, atoms in groups:
        total: dict[tuple[str, float], float] = {}
        scale: dict[tuple[str, float], float] = {}
        for a in atoms:
            total[a.key] = total.get(a.key, 0.0) + a.coeff
            scale[a.key] = max(scale.get(a.key, 0.0), abs(a.coeff))
        kept = [
            SpatialAtom(kind, k, c)
            for (kind, k), c in total.items()
            if abs(c) > rtol * scale[(kind, k)]
        ]
        g = SpatialFunction(kept)
        if not g.is_zero():
            out.append((g, lam))
    return out


def fractional_operator_image(problem: ProblemSpec, terms: Sequence[tuple[SpatialFunction, float]]) -> Expansion:
    """``D^a[A u]`` for ``u = sum g_j t^lam_j``, by the power rule term by term."""
    out: Expansion = []
    for g, lam in terms:
        ag = apply_operator(problem.op, g)
        if ag.is_zero():
            continue
        d = power_rule_derivative(problem.order, TimePowerTerm(1.0, lam))
        out.append((ag * d.coeff, d.exponent))
    return _collect(out, rtol=0.0)


def residual(problem: ProblemSpec, n: int) -> Expansion:
    """Symbolic residual ``d/dt c_n - D^a[A c_n] - q`` of ``c_n``.

    Computed by direct substitution of the truncated series into the
    equation.  The source enters through its Taylor coefficients, so for a
    truncated source series this is the residual against that truncation.
    """
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    sol = truncated_solution(problem, n)
    pieces: Expansion = []
    for g, lam in sol.terms:
        d = time_derivative(TimePowerTerm(1.0, lam))
        if d is not None:
            pieces.append((g * d.coeff, d.exponent))
    everything = [(sol.base, 0.0)] + sol.terms
    pieces += [(-1.0 * g, lam) for g, lam in fractional_operator_image(problem, everything)]
    for k, qk in problem.source.entries.items():
        pieces.append((qk * (-1.0 / math.factorial(k)), float(k)))
    return _collect(pieces)
