"""Hamiltonians, Dunkl operators, quantum integrals, eigenfunction
truncations, and the rank-1 shift operator."""

import math
from fractions import Fraction

import pytest

from quasiinv.cmsystem import (SingularGram, ZeroSymbol, b6_explicit_integrals,
                               dunkl, dunkl_frame, hamiltonian, integral_apply,
                               integral_berest, integral_from_invariant,
                               kernel_series_rank1, pairing_value,
                               psi_from_shift, psi_truncation, shift_rank1,
                               symbol_target, verify_intertwiner)
from quasiinv.coxeter import (MultiplicityFunction, build_group,
                              invariant_generators)
from quasiinv.operators import RationalFunction, RationalOp
from quasiinv.polynomials import Polynomial
from quasiinv.quasi import poincare_series, qm_slice

A1 = build_group("A1")
M1 = MultiplicityFunction.constant(A1, 1)
X = Polynomial.variable(1, 0)


def test_hamiltonian_rank1_explicit():
    h = hamiltonian(A1, M1)
    expected = (RationalOp.partial(1, 0, 2)
                + RationalOp.coefficient_term(
                    RationalFunction.from_poly(
                        Polynomial.constant(1, -2)).div_form((1,)), (1,)))
    assert h.op == expected


def test_hamiltonian_m0_is_laplacian():
    for label in ("B2", "(Z/2)^3"):
        g = build_group(label)
        m0 = MultiplicityFunction.constant(g, 0)
        h = hamiltonian(g, m0)
        lap = RationalOp.zero(g.dim)
        for i in range(g.dim):
            lap = lap + RationalOp.partial(g.dim, i, 2)
        assert h.op == lap


def test_hamiltonian_b2_term_by_term():
    # Delta - 2ms(d1/x1 + d2/x2) - 2ml((d1-d2)/(x1-x2) + (d1+d2)/(x1+x2))
    g = build_group("B2")
    m = MultiplicityFunction.from_mapping(g, {"short": 1, "long": 2})
    n = 2
    expected = RationalOp.zero(n)
    for i in range(n):
        expected = expected + RationalOp.partial(n, i, 2)
    one = Polynomial.constant(n, 1)

    def drift(coeff_vec, form, mu):
        out = RationalOp.zero(n)
        for i, v in enumerate(coeff_vec):
            if v:
                rf = RationalFunction.from_poly(
                    one.scale(-2 * mu * v)).div_form(form)
                out = out + RationalOp.coefficient_term(rf, tuple(
                    1 if t == i else 0 for t in range(n)))
        return out

    expected = expected + drift((1, 0), (1, 0), 1) + drift((0, 1), (0, 1), 1)
    expected = expected + drift((1, -1), (1, -1), 2) + drift((1, 1), (1, 1), 2)
    assert hamiltonian(g, m).op == expected


def test_hamiltonian_homogeneity_and_symbol():
    for label, mval in (("A2", 1), ("G2", 2)):
        g = build_group(label)
        h = hamiltonian(g, MultiplicityFunction.constant(g, mval))
        assert h.op.homogeneity() == -2
        quad = Polynomial(g.dim, {
            tuple(2 if t == i else 0 for t in range(g.dim)): g.gram[i][i]
            for i in range(g.dim)})
        # symbol equals the dual quadratic form
        sym = h.op.symbol()
        n = g.dim
        expected = Polynomial(2 * n, {})
        for i in range(n):
            for j in range(n):
                if g.gram_inv[i][j]:
                    e = [0] * (2 * n)
                    e[n + i] += 1
                    e[n + j] += 1
                    expected = expected + Polynomial.monomial(
                        tuple(e), g.gram_inv[i][j])
        assert sym == expected


def test_dunkl_rank1_values():
    for mval in (1, 2):
        m = MultiplicityFunction.constant(A1, mval)
        t = dunkl(A1, m, (1,))
        assert t.apply(X ** 2) == X.scale(2)
        assert t.apply(X) == Polynomial.constant(1, 1 - 2 * mval)
        assert t.apply(Polynomial.constant(1, 1)).is_zero()


def test_dunkl_operators_commute():
    g = build_group("B2")
    m = MultiplicityFunction.from_mapping(g, {"short": 1, "long": 2})
    t1, t2 = dunkl_frame(g, m)
    assert t1.commutator(t2).is_zero()


def test_dunkl_preserves_polynomials():
    g = build_group("A2")
    m = MultiplicityFunction.constant(g, 1)
    t1, t2 = dunkl_frame(g, m)
    for mono in [(1, 0), (0, 1), (2, 1), (3, 0)]:
        t1.apply(Polynomial.monomial(mono))
        t2.apply(Polynomial.monomial(mono))


def test_integral_from_invariant_rank1_is_hamiltonian():
    li = integral_from_invariant(A1, M1, X ** 2)
    assert li.op == hamiltonian(A1, M1).op
    assert li.construction == "dunkl-restricted"


def test_integral_m0_is_constant_coefficient():
    g = build_group("(Z/2)^2")
    m0 = MultiplicityFunction.constant(g, 0)
    p = invariant_generators(g).generators[0]   # x^2
    li = integral_from_invariant(g, m0, p)
    assert li.op == RationalOp.partial(2, 0, 2)


def test_b6_explicit_blocks_match_dunkl_construction():
    group, m, integrals = b6_explicit_integrals()
    inv = invariant_generators(group)
    for j in (0, 1):
        li = integral_from_invariant(group, m, inv.generators[j])
        assert li.op == integrals[j].op if hasattr(integrals[j], "op") \
            else li.op == integrals[j]


def test_b6_block_integrals_annihilate_witnesses():
    group, m, integrals = b6_explicit_integrals()
    u = Polynomial.monomial((3, 0, 0, 0, 0, 0))
    p1 = invariant_generators(group).generators[0]
    v = u * p1
    for L in integrals:
        assert L.apply(u).is_zero()
        assert L.apply(v).is_zero()


def test_berest_constant_is_never_hardcoded_but_matches_closed_form():
    # solved constant must equal 1/(2^r r!) for the homogeneity convention
    for g, mval, p in [
        (A1, 1, X ** 2),
        (A1, 2, X ** 2),
        (build_group("(Z/2)^2"), 1, None),
        (build_group("B2"), 1, None),
    ]:
        m = MultiplicityFunction.constant(g, mval)
        if p is None:
            p = invariant_generators(g).generators[0]
        r = p.degree()
        li = integral_berest(g, m, p)
        hop = hamiltonian(g, m).op
        ad = RationalOp.mul_by(p)
        for _ in range(r):
            ad = hop.commutator(ad)
        assert ad.scale(Fraction(1, 2 ** r * math.factorial(r))) == li.op


def test_berest_identity_for_constants():
    li = integral_berest(A1, M1, Polynomial.constant(1, 1))
    assert li.op == RationalOp.identity(1)


def test_berest_equals_dunkl_route():
    for label, mvals in (("A2", (1,)), ("B2", (1, 2)), ("(Z/2)^2", (2, 1))):
        g = build_group(label)
        m = MultiplicityFunction(g, mvals)
        for p in invariant_generators(g).generators:
            assert integral_berest(g, m, p).op == \
                integral_from_invariant(g, m, p).op


def test_berest_on_noninvariant_quasiinvariant():
    li = integral_berest(A1, M1, X ** 3)
    assert li.op.symbol() == Polynomial(2, {(0, 3): Fraction(1)})
    assert li.op.homogeneity() == -3
    assert li.apply(X ** 3) == Polynomial.constant(1, -3)


def test_berest_rejects_non_quasiinvariant():
    with pytest.raises(ValueError):
        integral_berest(A1, M1, X)


def test_integral_apply_agrees_with_operator_route():
    g = build_group("(Z/2)^2")
    m = MultiplicityFunction.constant(g, 1)
    for j in (2, 3, 4):
        for q in qm_slice(g, m, j):
            lop = integral_berest(g, m, q)
            for j2 in (j, j + 1):
                for f in qm_slice(g, m, j2):
                    assert integral_apply(g, m, q, f) == lop.apply(f)


def test_pairing_anchor_values():
    assert pairing_value(A1, M1, X ** 2, X ** 2) == Fraction(-2)
    assert pairing_value(A1, M1, X ** 3, X ** 3) == Fraction(-3)
    one = Polynomial.constant(1, 1)
    assert pairing_value(A1, M1, one, one) == Fraction(1)
    # degree mismatch pairs to zero
    assert pairing_value(A1, M1, X ** 2, one) == 0
    assert pairing_value(A1, M1, one, X ** 2) == 0


def test_psi_truncation_rank1():
    psi = psi_truncation(A1, M1, 4)
    assert psi.components[0] == ((Fraction(1),),)
    assert 1 not in psi.components
    assert psi.components[2] == ((Fraction(-1, 2),),)
    assert psi.components[3] == ((Fraction(-1, 3),),)


def test_psi_truncation_m0_exponential():
    m0 = MultiplicityFunction.constant(A1, 0)
    psi = psi_truncation(A1, m0, 5)
    for j in range(6):
        assert psi.components[j] == ((Fraction(1, math.factorial(j)),),)


def test_psi_components_symmetric():
    g = build_group("(Z/2)^2")
    m = MultiplicityFunction.constant(g, 1)
    psi = psi_truncation(g, m, 4)
    for j, comp in psi.components.items():
        size = len(comp)
        for a in range(size):
            for b in range(size):
                assert comp[a][b] == comp[b][a]
        assert j in psi.bases and len(psi.bases[j]) == size
    # absent exactly when the slice is empty
    assert 1 not in psi.components and not qm_slice(g, m, 1)


def test_shift_operator_examples():
    x = Polynomial.variable(1, 0)
    s10 = shift_rank1(1, 0)
    assert s10.op == (RationalOp.mul_by(x).compose(RationalOp.partial(1, 0))
                      - RationalOp.identity(1))
    s20 = shift_rank1(2, 0)
    factor_hi = (RationalOp.mul_by(x).compose(RationalOp.partial(1, 0))
                 - RationalOp.mul_by(Polynomial.constant(1, 3)))
    assert s20.op == factor_hi.compose(s10.op)
    assert shift_rank1(0, 5).op == RationalOp.identity(1)


def test_intertwiner_matrix():
    for m in range(0, 4):
        for mu in (0, 1, Fraction(1, 2)):
            assert verify_intertwiner(m, mu)


def test_psi_from_shift_matches_truncation():
    for mval in (1, 2):
        m = MultiplicityFunction.constant(A1, mval)
        assert psi_from_shift(mval, 6).equals(psi_truncation(A1, m, 6))


def test_psi_from_shift_m1_components():
    psi = psi_from_shift(1, 3)
    assert psi.components[0] == ((Fraction(1),),)
    assert psi.components[2] == ((Fraction(-1, 2),),)
    assert psi.components[3] == ((Fraction(-1, 3),),)
    assert 1 not in psi.components


def test_kernel_series():
    assert kernel_series_rank1(1, 6).coefficients == [0, 1, 0, 0, 0, 0, 0]
    assert kernel_series_rank1(2, 6).coefficients == [0, 1, 0, 1, 0, 0, 0]
    assert kernel_series_rank1(0, 4).coefficients == [0] * 5


def test_kernel_plus_quasi_is_full_series():
    for mval in (0, 1, 2, 3):
        m = MultiplicityFunction.constant(A1, mval)
        ker = kernel_series_rank1(mval, 12)
        qs = poincare_series(A1, m, 12)
        assert all(k + q == 1 for k, q in zip(ker.coefficients, qs.coefficients))


def test_quantum_integrals_commute_rank2():
    for label, mvals in (("A2", (2,)), ("B2", (1, 1))):
        g = build_group(label)
        m = MultiplicityFunction(g, mvals)
        ops = [integral_from_invariant(g, m, p).op
               for p in invariant_generators(g).generators]
        assert ops[0].commutator(ops[1]).is_zero()


def test_symbol_target_uses_form_identification():
    g = build_group("A2")
    p = invariant_generators(g).generators[0]
    target = symbol_target(g, p)
    # no x-dependence; pure symbol polynomial
    for e in target.terms:
        assert all(v == 0 for v in e[:g.dim])
