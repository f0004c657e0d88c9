"""Fractional power rules on ``t**lam`` terms, plus quadrature oracles.

The series engine works entirely with the power rule

    D^a t^lam = Gamma(1 + lam) / Gamma(1 + lam - a) * t^(lam - a)

applied to every exponent ``lam >= 0``, including ``lam = 0``.  That is the
Riemann-Liouville form: it sends a constant to ``t^-a / Gamma(1 - a)``
instead of zero.  The Caputo derivative proper, which kills constants, is
only available through :func:`caputo_numeric`, a direct quadrature of the
integral definition used to validate the rule on non-constant monomials.
"""

from __future__ import annotations

import math
import warnings
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from fracvim.specfun import gamma, gamma_ratio

__all__ = [
    "FracOrder",
    "TimePowerTerm",
    "power_rule_derivative",
    "jt_power_rule",
    "jt_power_rule_n",
    "time_derivative",
    "caputo_numeric",
    "rl_integral_numeric",
]

QUAD_PANELS = 20_000
SINGULAR_WARN_ALPHA = 0.95


@dataclass(frozen=True)
class FracOrder:
    """Fractional order ``alpha`` in ``[0, 1)``; ``alpha = 0`` is the classical limit."""

    alpha: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.alpha < 1.0):
            raise ValueError(f"fractional order must satisfy 0 <= alpha < 1, got {self.alpha}")

    @property
    def beta(self) -> float:
        """Exponent gained per ``J_t D^alpha`` application, ``1 - alpha``."""
        return 1.0 - self.alpha


def as_order(order: FracOrder | float) -> FracOrder:
    return order if isinstance(order, FracOrder) else FracOrder(float(order))


@dataclass(frozen=True)
class TimePowerTerm:
    """``coeff * t**exponent``.

    Exponents produced by the series recursion are nonnegative; a single
    fractional derivative may push one below zero (``t**-alpha``), so the
    constructor only demands ``exponent > -1`` to keep the term integrable.
    """

    coeff: float
    exponent: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.coeff):
            raise ValueError(f"coefficient must be finite, got {self.coeff}")
        if not self.exponent > -1.0:
            raise ValueError(f"exponent must exceed -1, got {self.exponent}")

    def __call__(self, t):
        return self.coeff * np.power(t, self.exponent)


def power_rule_derivative(order: FracOrder | float, term: TimePowerTerm) -> TimePowerTerm:
    order = as_order(order)
    a, lam = order.alpha, term.exponent
    if a == 0.0:
        return term
    if lam < 0:
        raise ValueError("power rule is applied to nonnegative exponents only")
    return TimePowerTerm(term.coeff * gamma_ratio(1.0 + lam, 1.0 + lam - a), lam - a)


def jt_power_rule(order: FracOrder | float, term: TimePowerTerm) -> TimePowerTerm:
    """``J_t D^alpha`` on one term: fractional derivative then integration from 0 to t."""
    order = as_order(order)
    lam = term.exponent
    if lam < 0:
        raise ValueError("power rule is applied to nonnegative exponents only")
    if order.alpha == 0.0:
        return TimePowerTerm(term.coeff / (lam + 1.0), lam + 1.0)
    return TimePowerTerm(
        term.coeff * gamma_ratio(1.0 + lam, lam + order.beta + 1.0), lam + order.beta
    )


def jt_power_rule_n(order: FracOrder | float, term: TimePowerTerm, n: int) -> TimePowerTerm:
    """Closed form of ``n`` successive :func:`jt_power_rule` applications."""
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    order = as_order(order)
    lam = term.exponent
    if lam < 0:
        raise ValueError("power rule is applied to nonnegative exponents only")
    shift = n * order.beta
    return TimePowerTerm(term.coeff * gamma_ratio(1.0 + lam, 1.0 + lam + shift), lam + shift)


def time_derivative(term: TimePowerTerm) -> TimePowerTerm | None:
    """Ordinary ``d/dt``; returns None for a constant."""
    if term.exponent == 0.0:
        return None
    return TimePowerTerm(term.coeff * term.exponent, term.exponent - 1.0)


def _sample(f: Callable, tau: np.ndarray) -> np.ndarray:
    return np.broadcast_to(np.asarray(f(tau), dtype=float), tau.shape)


def _derivative(f: Callable, tau: np.ndarray, h: float) -> np.ndarray:
    # central differences, second-order one-sided where tau - h would leave [0, t]
    out = (_sample(f, tau + h) - _sample(f, tau - np.minimum(h, tau))) / (
        h + np.minimum(h, tau)
    )
    near = tau < h
    if np.any(near):
        tn = tau[near]
        out[near] = (
            -3.0 * _sample(f, tn) + 4.0 * _sample(f, tn + h) - _sample(f, tn + 2.0 * h)
        ) / (2.0 * h)
    return out


def _check_quadrature(alpha: float, t: float) -> None:
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"quadrature oracles need 0 < alpha < 1, got {alpha}")
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    if alpha >= SINGULAR_WARN_ALPHA:
        warnings.warn(
            f"alpha={alpha} is close to 1; endpoint-singular quadrature loses accuracy",
            RuntimeWarning,
            stacklevel=3,
        )


def caputo_numeric(
    f: Callable, order: FracOrder | float, t: float, panels: int = QUAD_PANELS
) -> float:
    """Caputo derivative of ``f`` at ``t`` by direct quadrature, ``0 < alpha < 1``.

    Evaluates ``1/Gamma(1-a) * int_0^t f'(s) (t - s)^-a ds`` on a mesh graded
    towards ``s = t`` as ``t - s = t * u**p`` with ``p = 2 / (1 - a)``.  With
    that grading the integrand in ``u`` is smooth, so the composite
    trapezoid rule converges at second order despite the kernel
    singularity.  ``f`` must accept numpy arrays and be defined on
    ``[0, t + h]``; ``f'`` is taken by finite differences with step
    ``h = 1e-6 * max(1, t)``.
    """
    a = as_order(order).alpha
    t = float(t)
    _check_quadrature(a, t)
    p = 2.0 / (1.0 - a)
    u = np.linspace(0.0, 1.0, panels + 1)
    tau = t - t * u**p
    tau[-1] = 0.0
    h = 1e-6 * max(1.0, t)
    # (t - s)^-a ds = t^(1-a) p u^(p(1-a) - 1) du = t^(1-a) p u du
    integrand = _derivative(f, tau, h) * p * u
    integral = t ** (1.0 - a) * np.trapezoid(integrand, u)
    return float(integral / gamma(1.0 - a))


def rl_integral_numeric(
    f: Callable, order: FracOrder | float, t: float, panels: int = QUAD_PANELS
) -> float:
    """Riemann-Liouville fractional integral ``I^a f(t)`` by graded-mesh quadrature.

    Same substitution as :func:`caputo_numeric` with ``p = 2 / a``, which
    removes the ``(t - s)^(a-1)`` singularity.
    """
    a = as_order(order).alpha
    t = float(t)
    _check_quadrature(a, t)
    p = 2.0 / a
    u = np.linspace(0.0, 1.0, panels + 1)
    tau = t - t * u**p
    tau[-1] = 0.0
    integrand = _sample(f, tau) * p * u
    return float(t**a * np.trapezoid(integrand, u) / gamma(a))
