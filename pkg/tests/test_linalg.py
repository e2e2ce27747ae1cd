"""Exact elimination: echelon forms, nullspaces, determinants."""

from fractions import Fraction

import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from quasiinv.linalg import (det_polynomial, det_rational, invert_matrix,
                             nullspace, rank, rref)
from quasiinv.polynomials import Polynomial


def test_rref_canonical():
    rows = [{0: Fraction(2), 1: Fraction(4)},
            {0: Fraction(1), 1: Fraction(2), 2: Fraction(1)}]
    reduced, pivots = rref(rows, 3)
    assert pivots == [0, 2]
    assert reduced[0] == {0: Fraction(1), 1: Fraction(2)}
    assert reduced[1] == {2: Fraction(1)}


def test_nullspace_echelonized():
    # single relation c0 + c1 + c2 = 0
    rows = [{0: Fraction(1), 1: Fraction(1), 2: Fraction(1)}]
    basis = nullspace(rows, 3)
    assert len(basis) == 2
    # canonical echelon: leading entries at distinct columns, pivots 1
    leads = [min(v) for v in basis]
    assert len(set(leads)) == 2
    for vec in basis:
        assert sum(vec.values()) == 0


def test_nullspace_of_full_rank_is_empty():
    rows = [{0: Fraction(1)}, {1: Fraction(3)}]
    assert nullspace(rows, 2) == []


def test_rank():
    rows = [{0: Fraction(1), 1: Fraction(2)},
            {0: Fraction(2), 1: Fraction(4)},
            {1: Fraction(1)}]
    assert rank(rows, 2) == 2


mat_entries = st.integers(min_value=-5, max_value=5)


@st.composite
def square_matrices(draw, n=4):
    size = draw(st.integers(1, n))
    return [[Fraction(draw(mat_entries)) for _ in range(size)]
            for _ in range(size)]


@given(square_matrices())
@settings(max_examples=60, deadline=None)
def test_det_against_sympy(matrix):
    ours = det_rational(matrix)
    theirs = sp.Matrix([[sp.Rational(v) for v in row] for row in matrix]).det()
    assert sp.Rational(ours) == theirs


@given(square_matrices(3))
@settings(max_examples=40, deadline=None)
def test_inverse_roundtrip(matrix):
    if not det_rational(matrix):
        return
    inv = invert_matrix(matrix)
    n = len(matrix)
    prod = [[sum(matrix[i][k] * inv[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)]
    assert prod == [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def test_polynomial_determinant_vandermonde():
    # det [[1, 1], [k^3, -k^3]] = -2 k^3 (the rank-1 evaluation matrix)
    one = Polynomial.constant(1, 1)
    k3 = Polynomial.monomial((3,))
    det = det_polynomial([[one, one], [k3, -k3]])
    assert det == Polynomial.monomial((3,), -2)


def test_polynomial_determinant_vs_expansion():
    x = Polynomial.variable(2, 0)
    y = Polynomial.variable(2, 1)
    one = Polynomial.constant(2, 1)
    m = [[x, y, one], [y, x, x], [one, x, y]]
    # cofactor expansion oracle
    def det3(m):
        a, b, c = m[0]
        d, e, f = m[1]
        g, h, i = m[2]
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    assert det_polynomial(m) == det3(m)
