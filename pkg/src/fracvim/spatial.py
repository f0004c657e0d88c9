"""Derivative-closed spatial functions and constant-coefficient differential operators.

A :class:`SpatialFunction` is a finite sum of atoms ``c*sin(kx)``,
``c*cos(kx)``, ``c*exp(kx)`` and ``c*x**m``.  That family is closed under
``d/dx``, so any operator ``A = sum_j a_j d^j/dx^j`` maps it into itself and
``A^n f`` stays an exact finite expansion for every ``n``.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ATOM_KINDS",
    "SpatialAtom",
    "SpatialFunction",
    "LinearOperator",
    "differentiate",
    "apply_operator",
    "apply_operator_n",
    "evaluate",
]

ATOM_KINDS = ("sine", "cosine", "exponential", "monomial")
DROP_BELOW = 1e-300


@dataclass(frozen=True)
class SpatialAtom:
    """One term ``coeff * phi(x)``.

    ``k`` is the wavenumber for sine/cosine/exponential atoms and the power
    for monomials.
    """

    kind: str
    k: float
    coeff: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in ATOM_KINDS:
            raise ValueError(f"unknown atom kind {self.kind!r}; expected one of {ATOM_KINDS}")
        if not math.isfinite(self.coeff):
            raise ValueError(f"atom coefficient must be finite, got {self.coeff}")
        if not math.isfinite(self.k):
            raise ValueError(f"atom parameter must be finite, got {self.k}")
        if self.kind == "monomial" and (self.k < 0 or self.k != int(self.k)):
            raise ValueError(f"monomial power must be a nonnegative integer, got {self.k}")

    @property
    def key(self) -> tuple[str, float]:
        return (self.kind, self.k)

    def derivative(self) -> SpatialAtom | None:
        k, c = self.k, self.coeff
        if self.kind == "sine":
            return SpatialAtom("cosine", k, k * c)
        if self.kind == "cosine":
            return SpatialAtom("sine", k, -k * c)
        if self.kind == "exponential":
            return SpatialAtom("exponential", k, k * c)
        if k == 0:
            return None
        return SpatialAtom("monomial", k - 1, k * c)

    def __call__(self, x):
        if self.kind == "sine":
            return self.coeff * np.sin(self.k * x)
        if self.kind == "cosine":
            return self.coeff * np.cos(self.k * x)
        if self.kind == "exponential":
            return self.coeff * np.exp(self.k * x)
        return self.coeff * np.power(x, int(self.k))


def _normalize(atom: SpatialAtom) -> SpatialAtom | None:
    # fold degenerate wavenumbers onto a unique representative
    kind, k, c = atom.kind, atom.k, atom.coeff
    if kind == "sine":
        if k == 0:
            return None
        if k < 0:
            return SpatialAtom("sine", -k, -c)
    elif kind == "cosine":
        if k == 0:
            return SpatialAtom("monomial", 0, c)
        if k < 0:
            return SpatialAtom("cosine", -k, c)
    elif kind == "exponential" and k == 0:
        return SpatialAtom("monomial", 0, c)
    return atom


class SpatialFunction:
    """Immutable canonical sum of :class:`SpatialAtom`.

    Canonical form keeps at most one atom per ``(kind, k)`` and drops atoms
    with ``|coeff| < 1e-300``.
    """

    __slots__ = ("_atoms",)

    def __init__(self, atoms: Iterable[SpatialAtom] = ()) -> None:
        acc: dict[tuple[str, float], float] = {}
        for atom in atoms:
            norm = _normalize(atom)
            if norm is None:
                continue
            acc[norm.key] = acc.get(norm.key, 0.0) + norm.coeff
        self._atoms = tuple(
            SpatialAtom(kind, k, c)
            for (kind, k), c in sorted(acc.items(), key=lambda item: (ATOM_KINDS.index(item[0][0]), item[0][1]))
            if abs(c) >= DROP_BELOW
        )

    @classmethod
    def sin(cls, k: float = 1.0, coeff: float = 1.0) -> SpatialFunction:
        return cls([SpatialAtom("sine", k, coeff)])

    @classmethod
    def cos(cls, k: float = 1.0, coeff: float = 1.0) -> SpatialFunction:
        return cls([SpatialAtom("cosine", k, coeff)])

    @classmethod
    def exp(cls, k: float = 1.0, coeff: float = 1.0) -> SpatialFunction:
        return cls([SpatialAtom("exponential", k, coeff)])

    @classmethod
    def monomial(cls, m: int, coeff: float = 1.0) -> SpatialFunction:
        return cls([SpatialAtom("monomial", m, coeff)])

    @classmethod
    def constant(cls, value: float) -> SpatialFunction:
        return cls.monomial(0, value)

    @property
    def atoms(self) -> tuple[SpatialAtom, ...]:
        return self._atoms

    @property
    def kinds(self) -> set[str]:
        return {a.kind for a in self._atoms}

    def is_zero(self) -> bool:
        return not self._atoms

    def coefficients(self) -> dict[tuple[str, float], float]:
        return {a.key: a.coeff for a in self._atoms}

    def __add__(self, other: SpatialFunction) -> SpatialFunction:
        if not isinstance(other, SpatialFunction):
            return NotImplemented
        return SpatialFunction(self._atoms + other._atoms)

    def __sub__(self, other: SpatialFunction) -> SpatialFunction:
        if not isinstance(other, SpatialFunction):
            return NotImplemented
        return self + (-1.0) * other

    def __neg__(self) -> SpatialFunction:
        return (-1.0) * self

    def __mul__(self, scalar: float) -> SpatialFunction:
        if not isinstance(scalar, (int, float)):
            return NotImplemented
        return SpatialFunction(SpatialAtom(a.kind, a.k, a.coeff * scalar) for a in self._atoms)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SpatialFunction):
            return NotImplemented
        return self._atoms == other._atoms

    def __hash__(self) -> int:
        return hash(self._atoms)

    def __call__(self, x):
        return evaluate(self, x)

    def __repr__(self) -> str:
        if not self._atoms:
            return "SpatialFunction(0)"
        parts = []
        for a in self._atoms:
            if a.kind == "monomial":
                parts.append(f"{a.coeff:g}*x^{int(a.k)}")
            else:
                name = {"sine": "sin", "cosine": "cos", "exponential": "exp"}[a.kind]
                parts.append(f"{a.coeff:g}*{name}({a.k:g}x)")
        return f"SpatialFunction({' + '.join(parts)})"


class LinearOperator:
    """``A = sum_j coeff_j * d^j/dx^j`` with constant coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, float] | Iterable[tuple[int, float]] = ()) -> None:
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, float] = {}
        for order, coeff in items:
            if int(order) != order or order < 0:
                raise ValueError(f"derivative order must be a nonnegative integer, got {order}")
            if not math.isfinite(coeff):
                raise ValueError(f"operator coefficient must be finite, got {coeff}")
            acc[int(order)] = acc.get(int(order), 0.0) + float(coeff)
        self._terms = tuple(sorted((o, c) for o, c in acc.items() if c != 0.0))

    @classmethod
    def derivative(cls, order: int, coeff: float = 1.0) -> LinearOperator:
        return cls({order: coeff})

    @property
    def terms(self) -> tuple[tuple[int, float], ...]:
        return self._terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearOperator):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __call__(self, g: SpatialFunction) -> SpatialFunction:
        return apply_operator(self, g)

    def __repr__(self) -> str:
        return f"LinearOperator({dict(self._terms)})"


def differentiate(g: SpatialFunction) -> SpatialFunction:
    return SpatialFunction(d for d in (a.derivative() for a in g.atoms) if d is not None)


def apply_operator(op: LinearOperator, g: SpatialFunction) -> SpatialFunction:
    atoms: list[SpatialAtom] = []
    deriv, level = g, 0
    for order, coeff in op.terms:
        while level < order:
            deriv = differentiate(deriv)
            level += 1
        atoms.extend(SpatialAtom(a.kind, a.k, a.coeff * coeff) for a in deriv.atoms)
    return SpatialFunction(atoms)


def apply_operator_n(op: LinearOperator, g: SpatialFunction, n: int) -> SpatialFunction:
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    for _ in range(n):
        g = apply_operator(op, g)
    return g


def evaluate(g: SpatialFunction, x):
    """Pointwise value at scalar or array ``x``."""
    if np.ndim(x) == 0:
        return math.fsum(float(a(float(x))) for a in g.atoms)
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for a in g.atoms:
        out = out + a(x)
    return out
