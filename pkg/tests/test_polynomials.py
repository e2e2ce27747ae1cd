"""Polynomial arithmetic and exact division by linear forms."""

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from quasiinv.polynomials import (NotDivisible, Polynomial, exact_divide,
                                  monomials_of_degree, primitive_covector)


def poly2(terms):
    return Polynomial(2, {e: Fraction(c) for e, c in terms.items()})


X = Polynomial.variable(2, 0)
Y = Polynomial.variable(2, 1)


def test_zero_coefficients_dropped():
    p = poly2({(1, 0): 1, (0, 1): 0})
    assert (0, 1) not in p.terms
    assert p.degree() == 1


def test_arithmetic_basics():
    p = X ** 3 * Y + X ** 2 * Y ** 2
    q = p - p
    assert q.is_zero()
    assert (X + Y) * (X - Y) == X ** 2 - Y ** 2
    assert (X + Y) ** 2 == X ** 2 + 2 * X * Y + Y ** 2


def test_exact_divide_monomials():
    p = X ** 3 * Y + X ** 2 * Y ** 2
    assert exact_divide(p, (1, 0)) == X ** 2 * Y + X * Y ** 2


def test_exact_divide_failure_carries_witness():
    p = X ** 2 + Polynomial.constant(2, 1)
    with pytest.raises(NotDivisible) as err:
        exact_divide(p, (1, 0))
    assert err.value.remainder == Polynomial.constant(2, 1)


def test_triple_division_of_reflection_difference():
    # (x^3 - s.x^3) / x^3 = 2 for the sign flip s
    p = Polynomial.monomial((3,), 2)
    for _ in range(3):
        p = exact_divide(p, (1,))
    assert p == Polynomial.constant(1, 2)


def test_divide_by_general_linear_form():
    form = (1, 1)
    p = (X + Y) ** 3 * (X - Y)
    q = exact_divide(p, form)
    assert q * Polynomial.linear_form(form) == p


def test_remainder_chain_reconstructs():
    p = (X + Y) ** 2 * X + (X + Y) * Y ** 2 + Polynomial.constant(2, 5)
    rems, quo = p.remainder_chain((1, 1), 3)
    form = Polynomial.linear_form((1, 1))
    rebuilt = quo * form ** 3
    for i, r in enumerate(rems):
        rebuilt = rebuilt + r * form ** i
    assert rebuilt == p


def test_monomials_of_degree_order_and_count():
    monos = monomials_of_degree(3, 4)
    assert len(monos) == 15
    assert monos[0] == (4, 0, 0)
    assert monos[-1] == (0, 0, 4)
    assert len(set(monos)) == len(monos)


def test_primitive_covector():
    prim, scalar = primitive_covector((Fraction(-2, 3), Fraction(4, 3)))
    assert prim == (1, -2)
    assert scalar == Fraction(-2, 3)


def test_substitute_is_ring_hom():
    images = [X + Y, X - Y]
    p = X ** 2 * Y
    q = X + 2 * Y
    assert (p * q).substitute(images) == p.substitute(images) * q.substitute(images)
    assert (p + q).substitute(images) == p.substitute(images) + q.substitute(images)


small_coeff = st.integers(min_value=-4, max_value=4)
small_exp = st.tuples(st.integers(0, 3), st.integers(0, 3))


@st.composite
def polys(draw, max_terms=4):
    n = draw(st.integers(1, max_terms))
    terms = {}
    for _ in range(n):
        terms[draw(small_exp)] = Fraction(draw(small_coeff))
    return Polynomial(2, terms)


@given(polys(), polys(), polys())
@settings(max_examples=60, deadline=None)
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)


@given(polys(), st.sampled_from([(1, 0), (0, 1), (1, 1), (2, -1), (1, -3)]))
@settings(max_examples=60, deadline=None)
def test_exact_divide_roundtrip(p, form):
    product = p * Polynomial.linear_form(form)
    assert exact_divide(product, form) == p


@given(polys(), polys())
@settings(max_examples=40, deadline=None)
def test_product_against_sympy(a, b):
    x, y = sp.symbols("x y")

    def to_sympy(p):
        return sum(sp.Rational(c) * x ** e[0] * y ** e[1]
                   for e, c in p.terms.items())

    ours = to_sympy(a * b)
    theirs = sp.expand(to_sympy(a) * to_sympy(b))
    assert sp.simplify(ours - theirs) == 0
