"""Operator algebra: composition, normal ordering, application, symbols."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quasiinv.operators import (NonPolynomialResult, RationalFunction,
                                RationalOp, SymbolNotPolynomial, op_apply,
                                op_commutator, op_compose, symbol)
from quasiinv.polynomials import Polynomial

X = Polynomial.variable(1, 0)
D = RationalOp.partial(1, 0)
D2 = RationalOp.partial(1, 0, 2)
SIGN_FLIP = ((Fraction(-1),),)


def rank1_hamiltonian(m) -> RationalOp:
    coeff = RationalFunction.from_poly(
        Polynomial.constant(1, -2 * Fraction(m))).div_form((1,))
    return D2 + RationalOp.coefficient_term(coeff, (1,))


def test_heisenberg_relations():
    xop = RationalOp.mul_by(X)
    assert op_commutator(D, xop) == RationalOp.identity(1)
    assert op_commutator(D2, xop) == D.scale(2)


def test_compose_orders_differ():
    xop = RationalOp.mul_by(X)
    left = op_compose(D, xop)
    right = op_compose(xop, D)
    assert left != right
    assert left - right == RationalOp.identity(1)


def test_apply_rank1_hamiltonian():
    h = rank1_hamiltonian(1)
    assert h.apply(X ** 3).is_zero()
    assert h.apply(X ** 2) == Polynomial.constant(1, -2)
    with pytest.raises(NonPolynomialResult):
        h.apply(X)


def test_commutator_with_x_squared():
    # [H(m), x^2] = 4 x d + (2 - 4m), verified against sympy on x^0..x^5
    for m in (0, 1, 2, Fraction(1, 2)):
        h = rank1_hamiltonian(m)
        expected = (RationalOp.mul_by(X.scale(4)).compose(D)
                    + RationalOp.mul_by(Polynomial.constant(1, 2 - 4 * Fraction(m))))
        assert op_commutator(h, RationalOp.mul_by(X ** 2)) == expected


def test_self_commutator_vanishes():
    h = rank1_hamiltonian(1)
    assert op_commutator(h, h).is_zero()


def test_group_part_chain_rule():
    s = RationalOp.group_element(SIGN_FLIP)
    assert op_compose(s, D) == op_compose(D, s).neg()
    # s o f = (s.f) o s
    sf = op_compose(s, RationalOp.mul_by(X))
    assert sf == op_compose(RationalOp.mul_by(-X), s)
    # s o s = identity
    assert op_compose(s, s) == RationalOp.identity(1)


def test_dunkl_like_combination_applies_to_polynomials():
    # (1 - s)/x is polynomial-valued although each term alone is not
    inv_x = RationalFunction.from_poly(Polynomial.constant(1, 1)).div_form((1,))
    op = RationalOp(1, {((0,), None): inv_x,
                        ((0,), SIGN_FLIP): inv_x.neg()})
    assert op.apply(X ** 2).is_zero()
    assert op.apply(X ** 3) == X ** 2 * 2


def test_symbol_top_order():
    h = rank1_hamiltonian(3)
    assert symbol(h) == Polynomial(2, {(0, 2): Fraction(1)})
    q = X ** 2 + X
    assert symbol(RationalOp.mul_by(q)) == Polynomial(
        2, {(2, 0): Fraction(1), (1, 0): Fraction(1)})


def test_symbol_rejects_uncleared_denominator():
    bad = RationalOp.coefficient_term(
        RationalFunction.from_poly(Polynomial.constant(1, 1)).div_form((1,)),
        (2,))
    with pytest.raises(SymbolNotPolynomial):
        symbol(bad)


def test_symbol_rejects_group_parts():
    s = RationalOp.group_element(SIGN_FLIP)
    with pytest.raises(SymbolNotPolynomial):
        symbol(s)


def test_homogeneity():
    h = rank1_hamiltonian(1)
    assert h.homogeneity() == -2
    assert RationalOp.mul_by(X ** 3).homogeneity() == 3
    assert (RationalOp.mul_by(X) + D).homogeneity() is None


def test_rational_function_canonical_form():
    # x^2 / x reduces to x
    rf = RationalFunction.from_poly(X ** 2).div_form((1,))
    assert rf.is_polynomial()
    assert rf.poly() == X
    # sums over distinct denominators consolidate: 1/x - 1/x = 0
    a = RationalFunction.from_poly(Polynomial.constant(1, 1)).div_form((1,))
    assert a.add(a.neg()).is_zero()


def test_rational_function_two_var_cancellation():
    x = Polynomial.variable(2, 0)
    y = Polynomial.variable(2, 1)
    # 1/x + 1/y - (x+y)/(xy) = 0 although no pair of terms cancels
    one = Polynomial.constant(2, 1)
    fx = RationalFunction.from_poly(one).div_form((1, 0))
    fy = RationalFunction.from_poly(one).div_form((0, 1))
    fxy = RationalFunction.from_poly(x + y).div_form((1, 0)).div_form((0, 1))
    assert fx.add(fy).sub(fxy).is_zero()


def test_derivative_quotient_rule():
    # d/dx (x^2 / (x+y)) = (x^2 + 2xy) / (x+y)^2
    x = Polynomial.variable(2, 0)
    y = Polynomial.variable(2, 1)
    rf = RationalFunction.from_poly(x * x).div_form((1, 1))
    der = rf.derivative(0)
    expected_num = x * x + x * y * 2
    assert der.num == expected_num
    assert der.den == (((1, 1), 2),)


OPS = [
    D,
    RationalOp.mul_by(X),
    RationalOp.mul_by(X ** 2),
    RationalOp.group_element(SIGN_FLIP),
    rank1_hamiltonian(1),
    RationalOp.coefficient_term(
        RationalFunction.from_poly(Polynomial.constant(1, 1)).div_form((1,)),
        (1,)),
]


@given(st.integers(0, len(OPS) - 1), st.integers(0, len(OPS) - 1),
       st.integers(0, len(OPS) - 1))
@settings(max_examples=50, deadline=None)
def test_composition_associative(i, j, k):
    a, b, c = OPS[i], OPS[j], OPS[k]
    assert op_compose(op_compose(a, b), c) == op_compose(a, op_compose(b, c))


@given(st.integers(0, len(OPS) - 1), st.integers(0, len(OPS) - 1),
       st.integers(0, 5))
@settings(max_examples=60, deadline=None)
def test_apply_respects_composition(i, j, deg):
    a, b = OPS[i], OPS[j]
    f = Polynomial.monomial((deg,))
    try:
        inner = op_apply(b, f)
        rhs = op_apply(a, inner)
    except NonPolynomialResult:
        return
    assert op_apply(op_compose(a, b), f) == rhs
