import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracvim.spatial import (
    ATOM_KINDS,
    LinearOperator,
    SpatialAtom,
    SpatialFunction,
    apply_operator,
    apply_operator_n,
    differentiate,
    evaluate,
)

D2 = LinearOperator.derivative(2)

coeffs = st.integers(min_value=-8, max_value=8).map(float)
wavenumbers = st.sampled_from([-2.0, -1.0, 0.5, 1.0, 2.0, 3.0])


@st.composite
def atoms(draw, bounded=False):
    kinds = ["sine", "cosine"] if bounded else list(ATOM_KINDS)
    kind = draw(st.sampled_from(kinds))
    if kind == "monomial":
        return SpatialAtom(kind, draw(st.integers(0, 5)), draw(coeffs))
    k = draw(st.sampled_from([-0.5, 0.5, 1.0])) if kind == "exponential" else draw(wavenumbers)
    return SpatialAtom(kind, k, draw(coeffs))


functions = st.lists(atoms(), max_size=5).map(SpatialFunction)
bounded_functions = st.lists(atoms(bounded=True), max_size=5).map(SpatialFunction)
operators = st.dictionaries(st.integers(0, 4), coeffs, max_size=3).map(LinearOperator)


def test_differentiate_examples():
    assert differentiate(SpatialFunction.cos()) == -SpatialFunction.sin()
    assert differentiate(SpatialFunction.sin()) == SpatialFunction.cos()
    assert differentiate(SpatialFunction.monomial(2, 3.0)) == SpatialFunction.monomial(1, 6.0)
    assert differentiate(SpatialFunction.exp(2.0, 1.5)) == SpatialFunction.exp(2.0, 3.0)
    assert differentiate(SpatialFunction.constant(4.0)).is_zero()


def test_apply_operator_examples():
    assert apply_operator(D2, SpatialFunction.cos()) == -SpatialFunction.cos()
    assert apply_operator(D2, SpatialFunction.sin()) == -SpatialFunction.sin()
    assert apply_operator(LinearOperator(), SpatialFunction.cos() + SpatialFunction.exp()).is_zero()


def test_apply_operator_n_examples():
    assert apply_operator_n(D2, SpatialFunction.cos(), 3) == -SpatialFunction.cos()
    assert apply_operator_n(D2, SpatialFunction.sin(), 2) == SpatialFunction.sin()
    g = SpatialFunction.cos(2.0) + SpatialFunction.monomial(3)
    assert apply_operator_n(LinearOperator({1: 2.0, 0: -1.0}), g, 0) == g


@pytest.mark.parametrize("n", range(0, 12))
def test_case_study_powers(n):
    # A^n cos x = (-1)^n cos x, A^n sin x = (-1)^n sin x
    assert apply_operator_n(D2, SpatialFunction.cos(), n) == (-1.0) ** n * SpatialFunction.cos()
    assert apply_operator_n(D2, SpatialFunction.sin(), n) == (-1.0) ** n * SpatialFunction.sin()


def test_high_powers_stay_small():
    g = SpatialFunction.cos() + SpatialFunction.sin(2.0) + SpatialFunction.monomial(4)
    out = apply_operator_n(LinearOperator({2: 1.0, 0: 0.5}), g, 100)
    assert len(out.atoms) <= len(g.atoms) + 4


def test_evaluate_examples():
    assert evaluate(SpatialFunction.cos(), math.pi) == -1.0
    assert abs(evaluate(SpatialFunction.sin(), math.pi)) <= 1e-15
    assert evaluate(SpatialFunction.cos() + 2.0 * SpatialFunction.sin(), 0.0) == 1.0
    xs = np.linspace(0, 1, 5)
    np.testing.assert_allclose(evaluate(SpatialFunction.monomial(2), xs), xs**2)


def test_canonical_form():
    g = SpatialFunction([
        SpatialAtom("sine", 1.0, 2.0),
        SpatialAtom("sine", -1.0, 2.0),  # sin(-x) = -sin x
        SpatialAtom("cosine", -3.0, 1.0),
        SpatialAtom("cosine", 0.0, 2.0),
        SpatialAtom("exponential", 0.0, 1.0),
        SpatialAtom("monomial", 0, 1e-310),
    ])
    assert g.coefficients() == {("cosine", 3.0): 1.0, ("monomial", 0): 3.0}


def test_atom_validation():
    with pytest.raises(ValueError):
        SpatialAtom("monomial", -1)
    with pytest.raises(ValueError):
        SpatialAtom("monomial", 1.5)
    with pytest.raises(ValueError):
        SpatialAtom("tangent", 1.0)
    with pytest.raises(ValueError):
        LinearOperator({-1: 1.0})


@given(operators, functions, functions, coeffs, coeffs)
def test_linearity(op, g, h, a, b):
    lhs = apply_operator(op, a * g + b * h)
    rhs = a * apply_operator(op, g) + b * apply_operator(op, h)
    assert lhs == rhs


@settings(max_examples=50)
@given(operators, functions, st.integers(0, 4), st.integers(0, 4))
def test_semigroup(op, g, m, n):
    assert apply_operator_n(op, g, m + n) == apply_operator_n(op, apply_operator_n(op, g, n), m)


@given(operators, functions, st.integers(0, 6))
def test_closure(op, g, n):
    assert apply_operator_n(op, g, n).kinds <= set(ATOM_KINDS)


@given(bounded_functions, st.floats(min_value=-6.0, max_value=6.0))
def test_derivative_matches_finite_difference(g, x):
    h = 1e-5
    fd = (evaluate(g, x + h) - evaluate(g, x - h)) / (2 * h)
    assert abs(evaluate(differentiate(g), x) - fd) <= 1e-6


@given(functions, st.floats(min_value=-2.0, max_value=2.0))
def test_evaluate_is_linear_in_atoms(g, x):
    total = sum(evaluate(SpatialFunction([a]), x) for a in g.atoms)
    assert evaluate(g, x) == pytest.approx(total, rel=1e-12, abs=1e-12)
