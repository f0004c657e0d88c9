"""Gamma and Mittag-Leffler functions for real arguments.

The Mittag-Leffler function is summed directly from its power series,

.. math::

    E_{\\nu,\\mu}(z) = \\sum_{k \\ge 0} \\frac{z^k}{\\Gamma(\\nu k + \\mu)},

with an extended-precision fallback under cancellation, and for strongly
negative arguments by numerical inversion of its Laplace transform.
Arguments are limited to ``|z| <= 100``; no attempt is made at the
large-|z| asymptotic regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

__all__ = [
    "ConvergenceError",
    "MLParams",
    "gamma",
    "log_gamma",
    "gamma_ratio",
    "mittag_leffler",
    "mittag_leffler_terms",
]

GAMMA_MAX = 171.0
ML_MAX_ABS_Z = 100.0
ML_EPS = 1e-16
ML_MAX_TERMS = 10_000
# double sum is redone in extended precision when the largest term exceeds the result by this
ML_CANCELLATION = 10.0
# terms above exp(700) overflow double
ML_LOG_OVERFLOW = 700.0
# for z < 0, terms above this (in log10) make series summation hopeless; invert the Laplace transform instead
ML_LOG10_INVERT = 15.0

# Lanczos coefficients, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS_P = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


class ConvergenceError(ArithmeticError):
    """A series failed to meet its stopping rule within the term cap."""


@dataclass(frozen=True)
class MLParams:
    nu: float
    mu: float = 1.0

    def __post_init__(self) -> None:
        if not (self.nu > 0 and math.isfinite(self.nu)):
            raise ValueError(f"nu must be positive and finite, got {self.nu}")
        if not (self.mu > 0 and math.isfinite(self.mu)):
            raise ValueError(f"mu must be positive and finite, got {self.mu}")


def _lanczos(x: float) -> float:
    # valid for x >= 1; the power is split in two so t**(x - 0.5) cannot overflow
    z = x - 1.0
    s = _LANCZOS_P[0]
    for i in range(1, len(_LANCZOS_P)):
        s += _LANCZOS_P[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    half = t ** (0.5 * (z + 0.5))
    return _SQRT_2PI * half * math.exp(-t) * half * s


def gamma(x: float) -> float:
    """Gamma function for ``0 < x < 171`` via the Lanczos approximation.

    Arguments below 1 are lifted with ``Gamma(x) = Gamma(x + 1) / x`` rather
    than the reflection formula, since negative arguments are out of domain.
    """
    x = float(x)
    if not (0.0 < x < GAMMA_MAX):
        raise ValueError(f"gamma requires 0 < x < {GAMMA_MAX:g}, got {x!r}; use log_gamma")
    if x == math.floor(x) and x <= 23:
        return float(math.factorial(int(x) - 1))
    if x < 1.0:
        return _lanczos(x + 1.0) / x
    if x < 10.0:
        return _lanczos(x)
    # large powers in the Lanczos form cost ~1e-13; recur up from [9, 10) instead
    m = int(x - 9.0)
    base = x - m
    acc = _lanczos(base)
    for i in range(m):
        acc *= base + i
    return acc


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for ``x > 0``."""
    x = float(x)
    if not (x > 0.0) or math.isinf(x):
        raise ValueError(f"log_gamma requires finite x > 0, got {x!r}")
    return math.lgamma(x)


def gamma_ratio(a: float, b: float) -> float:
    """``Gamma(a) / Gamma(b)``, through logarithms once either argument is large."""
    if a < 100.0 and b < 100.0:
        return gamma(a) / gamma(b)
    return math.exp(log_gamma(a) - log_gamma(b))


def _ml_term(params: MLParams, z: float, k: int) -> float:
    if k == 0:
        return 1.0 / gamma(params.mu) if params.mu < GAMMA_MAX else math.exp(-log_gamma(params.mu))
    if z == 0.0:
        return 0.0
    sign = -1.0 if (z < 0.0 and k % 2 == 1) else 1.0
    return sign * math.exp(k * math.log(abs(z)) - log_gamma(params.nu * k + params.mu))


def mittag_leffler_terms(params: MLParams, z: float, start: int = 0) -> list[float]:
    """Series terms ``z**k / Gamma(nu*k + mu)`` for ``k >= start`` until converged.

    Summation stops once two consecutive terms satisfy
    ``|term| <= eps * max(1, |partial sum|)``, with ``eps = 1e-16``.  With
    ``start > 0`` this gives the tail of the series, and the partial sum in
    the stopping rule is the running tail sum.
    """
    z = float(z)
    if abs(z) > ML_MAX_ABS_Z or not math.isfinite(z):
        raise ValueError(f"mittag_leffler supports |z| <= {ML_MAX_ABS_Z:g}, got {z!r}")
    if start < 0:
        raise ValueError("start must be nonnegative")
    terms: list[float] = []
    running = 0.0
    small = 0
    for k in range(start, start + ML_MAX_TERMS):
        try:
            term = _ml_term(params, z, k)
        except OverflowError:
            term = math.inf
        if not math.isfinite(term):
            raise ConvergenceError(
                f"Mittag-Leffler term {k} overflows for nu={params.nu}, mu={params.mu}, z={z}"
            )
        terms.append(term)
        running += term
        # a tail starts out smaller than 1, so measure it against itself
        scale = max(1.0, abs(running)) if start == 0 else abs(running)
        if abs(term) <= ML_EPS * scale:
            small += 1
            if small == 2:
                return terms
        else:
            small = 0
    raise ConvergenceError(
        f"Mittag-Leffler series for nu={params.nu}, mu={params.mu}, z={z} "
        f"did not converge within {ML_MAX_TERMS} terms"
    )


def _ml_extended_sum(params: MLParams, z: float, digits: int):
    with mpmath.workdps(digits):
        zz = mpmath.mpf(z)
        nu, mu = mpmath.mpf(params.nu), mpmath.mpf(params.mu)
        eps = mpmath.mpf(10) ** (-20)
        total = mpmath.mpf(0)
        power = mpmath.mpf(1)
        peak = mpmath.mpf(0)
        small = 0
        for k in range(ML_MAX_TERMS):
            term = power * mpmath.rgamma(nu * k + mu)
            total += term
            power *= zz
            peak = max(peak, abs(term))
            # past the peak, stop relative to the sum itself
            if abs(term) < peak and abs(term) <= eps * abs(total):
                small += 1
                if small == 2:
                    return total, peak
            else:
                small = 0
    raise ConvergenceError(f"extended-precision Mittag-Leffler sum failed for z={z}")


def _ml_extended(params: MLParams, z: float, log10_peak: float) -> float:
    digits = 25 + max(0, int(log10_peak))
    for _ in range(3):
        total, peak_mp = _ml_extended_sum(params, z, digits)
        lost = int(mpmath.log10(peak_mp / max(abs(total), mpmath.mpf(10) ** (-digits))))
        if lost + 22 <= digits:
            return float(total)
        digits = lost + 30
    return float(total)


def _ml_laplace(params: MLParams, z: float) -> float:
    # E_{nu,mu}(-x) is the inverse Laplace transform of s^(nu-mu) / (s^nu + x) at t = 1
    with mpmath.workdps(30):
        nu, mu, x = mpmath.mpf(params.nu), mpmath.mpf(params.mu), mpmath.mpf(-z)
        value = mpmath.invertlaplace(lambda s: s ** (nu - mu) / (s**nu + x), 1, method="talbot")
    return float(value)


def _log_peak(params: MLParams, z: float) -> float:
    # log of the largest |z|**k / Gamma(nu*k + mu); the log-terms are concave in k
    if z == 0.0:
        return -log_gamma(params.mu)
    lz = math.log(abs(z))
    best = -math.inf
    for k in range(ML_MAX_TERMS):
        v = k * lz - log_gamma(params.nu * k + params.mu)
        if v < best and k * params.nu > 2.0:
            break
        best = max(best, v)
    return best


def mittag_leffler(params: MLParams, z: float) -> float:
    """Two-parameter Mittag-Leffler function ``E_{nu,mu}(z)`` for real ``|z| <= 100``.

    For negative ``z`` the alternating series can have terms many orders of
    magnitude above its sum.  When more than about one digit would be lost
    the sum is redone with mpmath at a working precision sized to the
    largest term; beyond ``1e15`` (and ``nu <= 1``) the value comes from a
    Talbot inversion of its Laplace transform instead.  Raises
    :class:`ConvergenceError` when the value itself is not representable.

    >>> mittag_leffler(MLParams(1.0), 0.0)
    1.0
    """
    z = float(z)
    if abs(z) > ML_MAX_ABS_Z or not math.isfinite(z):
        raise ValueError(f"mittag_leffler supports |z| <= {ML_MAX_ABS_Z:g}, got {z!r}")
    log_peak = _log_peak(params, z)
    log10_peak = log_peak / math.log(10.0)
    if z > 0.0 and log_peak > ML_LOG_OVERFLOW:
        # every term is positive, so the sum is at least the peak
        raise ConvergenceError(f"E_{{{params.nu},{params.mu}}}({z}) overflows double precision")
    if z < 0.0 and log10_peak > ML_LOG10_INVERT:
        if params.nu <= 1.0:
            return _ml_laplace(params, z)
        return _ml_extended(params, z, log10_peak)
    terms = mittag_leffler_terms(params, z)
    try:
        total = math.fsum(terms)
    except OverflowError:
        raise ConvergenceError(f"Mittag-Leffler sum overflows for nu={params.nu}, z={z}") from None
    peak = max(abs(t) for t in terms)
    if peak > ML_CANCELLATION * max(abs(total), 1e-300):
        return _ml_extended(params, z, math.log10(peak))
    return total
