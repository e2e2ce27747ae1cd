"""Series bookkeeping: expansion, closed forms, symmetry test."""

from fractions import Fraction

from quasiinv.series import (PoincareData, TPoly, TRational,
                             geometric_denominator)


def test_tpoly_arithmetic():
    p = TPoly([1, -1, 1])
    q = TPoly([1, -1])
    assert (p * q).coeffs == [Fraction(c) for c in (1, -2, 2, -1)]
    assert p.reverse() == p
    assert p.is_palindromic()


def test_series_expansion_geometric():
    r = TRational(TPoly([1]), TPoly([1, -1]))
    assert r.series(5) == [Fraction(1)] * 6


def test_series_expansion_paper_form():
    num = TPoly([1, -1, 1])
    r = TRational(num * num, TPoly([1, -2, 1]))
    assert [int(c) for c in r.series(8)] == [1, 0, 2, 2, 3, 4, 5, 6, 7]


def test_geometric_denominator():
    assert geometric_denominator([2, 2]) == TPoly([1, 0, -2, 0, 1])


def test_stanley_symmetry_positive():
    num = TPoly([1, -1, 1])
    h = TRational(num * num, TPoly([1, -2, 1]))
    ok, l = h.stanley_symmetry(2)
    assert ok and l == 2


def test_stanley_symmetry_negative():
    h = TRational(TPoly([1, -2, 2]), TPoly([1, -2, 1]))
    ok, l = h.stanley_symmetry(2)
    assert not ok and l is None


def test_stanley_polynomial_case():
    # palindromic polynomial of degree 3: h(t) = t^3 h(1/t) with n even
    h = TRational(TPoly([1, 0, 0, 1]), TPoly([1]))
    ok, l = h.stanley_symmetry(0)
    assert ok and l == 3


def test_poincare_closed_form_check():
    data = PoincareData([1, 1, 1], TRational(TPoly([1]), TPoly([1, -1])))
    assert data.check_closed_form()
    bad = PoincareData([1, 2, 1], TRational(TPoly([1]), TPoly([1, -1])))
    assert not bad.check_closed_form()
