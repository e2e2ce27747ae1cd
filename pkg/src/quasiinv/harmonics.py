"""Discriminants, the bilinear pairing, harmonic polynomials, graded
complements, duality, and the determinant identity.

The pairing (p, q) = (L_q p)(0) and the map q -> L_q(delta) are evaluated
through the application-only ad-power route from `cmsystem`, so scenarios
with large vanishing degree stay tractable.  Root covectors are primitive
integers; pairing values and the determinant constant are concrete
rationals relative to that scaling (statements the source material makes
only up to scalar are checked as such).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cmsystem import integral_apply, pairing_value
from .coxeter import (CoxeterGroup, InvariantSet, MultiplicityFunction,
                      invariant_generators)
from .linalg import (det_polynomial, det_rational, nullspace,
                     polynomials_to_rows, rank, rref, vectors_to_polynomials)
from .polynomials import Polynomial, grlex_key, monomials_of_degree
from .quasi import (GradedBasis, is_quasiinvariant, qm_slice, slice_contains)
from .series import PoincareData, TPoly, TRational, geometric_denominator


class DimensionMismatch(ArithmeticError):
    pass


class CodimMismatch(ArithmeticError):
    pass


class CapExceeded(ValueError):
    pass


# -- discriminants ----------------------------------------------------------


@dataclass(frozen=True)
class Discriminant:
    delta_m: Polynomial
    delta_2m1: Polynomial
    d: int


def discriminants(group: CoxeterGroup, m: MultiplicityFunction) -> Discriminant:
    """Products of the reflection forms to the powers m_s and 2 m_s + 1."""
    dm = Polynomial.constant(group.dim, 1)
    d2m1 = Polynomial.constant(group.dim, 1)
    for s in group.reflections:
        form = s.form_polynomial()
        ms = m.of_reflection(s)
        if ms:
            dm = dm * form ** ms
        d2m1 = d2m1 * form ** (2 * ms + 1)
    disc = Discriminant(dm, d2m1, m.vanishing_order_degree())
    if d2m1.degree() != disc.d:
        raise ArithmeticError("discriminant degree bookkeeping is off")
    return disc


# -- pairing ---------------------------------------------------------------


@dataclass
class PairingTable:
    """Gram matrices of (p, q) = (L_q p)(0) on the slice bases per degree."""

    group: CoxeterGroup
    m: MultiplicityFunction
    gram: dict[int, tuple[tuple[Fraction, ...], ...]]

    def invertible_through(self, cap: int) -> bool:
        for j in range(cap + 1):
            g = self.gram.get(j)
            if g and not det_rational(g):
                return False
        return True


def pairing(group: CoxeterGroup, m: MultiplicityFunction,
            p: Polynomial, q: Polynomial, check: bool = True) -> Fraction:
    """(p, q) = (L_q p)(0) for quasiinvariant p, q."""
    if check:
        for candidate in (p, q):
            if not is_quasiinvariant(candidate, group, m):
                raise ValueError("pairing arguments must be quasiinvariant")
    return pairing_value(group, m, p, q)


def pairing_table(group: CoxeterGroup, m: MultiplicityFunction,
                  cap: int) -> PairingTable:
    gram: dict[int, tuple[tuple[Fraction, ...], ...]] = {}
    for j in range(cap + 1):
        basis = qm_slice(group, m, j)
        if not basis:
            continue
        gram[j] = tuple(
            tuple(pairing_value(group, m, qa, qb) for qb in basis)
            for qa in basis)
    return PairingTable(group, m, gram)


def bracket(group: CoxeterGroup, m: MultiplicityFunction,
            disc: Discriminant, p: Polynomial, q: Polynomial) -> Fraction:
    """<p, q> = (L_{pq} delta)(0), the degree-d form induced on the quotient."""
    pq = p * q
    if pq.is_zero():
        return Fraction(0)
    return integral_apply(group, m, pq, disc.delta_2m1).constant_term()


def adjointness_check(group: CoxeterGroup, m: MultiplicityFunction,
                      samples: Sequence[tuple[Polynomial, Polynomial, Polynomial]]) -> bool:
    """(L_q p1, p2) = (q p2, p1) on the given homogeneous triples."""
    for q, p1, p2 in samples:
        lhs = pairing_value(group, m, integral_apply(group, m, q, p1), p2)
        rhs = pairing_value(group, m, q * p2, p1)
        if lhs != rhs:
            return False
    return True


# -- harmonic space ----------------------------------------------------------


@dataclass
class HarmonicSpace:
    basis: GradedBasis
    dims: PoincareData
    dimension_anomaly: bool = False

    def elements(self) -> list[Polynomial]:
        out = []
        for j in sorted(self.basis.slices):
            out.extend(self.basis.slices[j])
        return out


def _echelonize(polys: Sequence[Polynomial], nvars: int, degree: int) -> list[Polynomial]:
    if not polys:
        return []
    monos = monomials_of_degree(nvars, degree)
    index = {e: i for i, e in enumerate(monos)}
    rows = polynomials_to_rows(polys, index)
    reduced, _ = rref(rows, len(monos))
    return vectors_to_polynomials(reduced, monos, nvars)


def _kernel_within(group: CoxeterGroup, m: MultiplicityFunction,
                   basis: Sequence[Polynomial],
                   invariants: Sequence[Polynomial]) -> list[Polynomial]:
    """Joint kernel of the invariant integrals on the span of a slice basis."""
    if not basis:
        return []
    j = basis[0].degree()
    rows: list[dict[int, Fraction]] = []
    constraints: list[dict[int, Fraction]] = []
    for p in invariants:
        target = j - p.degree()
        images = [integral_apply(group, m, p, f) for f in basis]
        support = sorted({e for img in images for e in img.terms},
                         key=grlex_key, reverse=True)
        for e in support:
            row = {col: img.terms[e] for col, img in enumerate(images)
                   if e in img.terms}
            if row:
                constraints.append(row)
    combos = nullspace(constraints, len(basis))
    out = []
    for vec in combos:
        p = Polynomial.zero(group.dim)
        for col, c in vec.items():
            p = p + basis[col].scale(c)
        out.append(p)
    return _echelonize(out, group.dim, j)


def harmonic_space(group: CoxeterGroup, m: MultiplicityFunction,
                   cap: int | None = None) -> HarmonicSpace:
    """Joint kernels of the basic integrals inside each quasiinvariant
    slice, through the vanishing degree d (extended to the cap if the total
    dimension misses the group order)."""
    inv = invariant_generators(group)
    d = m.vanishing_order_degree()
    limit = d if cap is None else max(d, cap)
    slices: dict[int, list[Polynomial]] = {}
    total = 0
    for j in range(d + 1):
        kern = _kernel_within(group, m, qm_slice(group, m, j), inv.generators)
        if kern:
            slices[j] = kern
            total += len(kern)
    anomaly = total != group.order
    if anomaly and limit > d:
        for j in range(d + 1, limit + 1):
            kern = _kernel_within(group, m, qm_slice(group, m, j), inv.generators)
            if kern:
                slices[j] = kern
                total += len(kern)
    coeffs = [len(slices.get(j, [])) for j in range(max(slices, default=0) + 1)]
    dims = PoincareData(coeffs, label=f"H[{group.name}; {m.describe()}]")
    return HarmonicSpace(GradedBasis(slices), dims,
                         dimension_anomaly=total != group.order)


# -- graded complement -------------------------------------------------------


@dataclass
class ComplementT:
    basis: GradedBasis
    ideal_slices: GradedBasis
    quasi_dims: list[int]

    def elements(self) -> list[Polynomial]:
        out = []
        for j in sorted(self.basis.slices):
            out.extend(self.basis.slices[j])
        return out

    def degrees(self) -> list[int]:
        return [t.degree() for t in self.elements()]


def ideal_slice(group: CoxeterGroup, m: MultiplicityFunction,
                inv: InvariantSet, j: int) -> list[Polynomial]:
    """Degree-j piece of the ideal generated by the positive-degree
    invariants inside the quasiinvariant ring."""
    products: list[Polynomial] = []
    for p in inv.generators:
        lower = qm_slice(group, m, j - p.degree())
        products.extend(p * b for b in lower)
    return _echelonize(products, group.dim, j)


def complement_T(group: CoxeterGroup, m: MultiplicityFunction,
                 cap: int | None = None) -> ComplementT:
    """Canonical graded complement: per degree, the echelon rows of the
    slice whose leading monomials avoid the ideal's leading monomials."""
    inv = invariant_generators(group)
    d = m.vanishing_order_degree()
    limit = d if cap is None else cap
    t_slices: dict[int, list[Polynomial]] = {}
    i_slices: dict[int, list[Polynomial]] = {}
    quasi_dims: list[int] = []
    for j in range(limit + 1):
        q_basis = qm_slice(group, m, j)
        quasi_dims.append(len(q_basis))
        ideal = ideal_slice(group, m, inv, j)
        if ideal:
            i_slices[j] = ideal
        ideal_leads = {p.leading_monomial() for p in ideal}
        t_part = [p for p in q_basis if p.leading_monomial() not in ideal_leads]
        if len(t_part) + len(ideal) != len(q_basis):
            raise CodimMismatch(
                f"degree {j}: complement {len(t_part)} + ideal {len(ideal)} "
                f"!= slice {len(q_basis)}")
        if t_part:
            t_slices[j] = t_part
    return ComplementT(GradedBasis(t_slices), GradedBasis(i_slices), quasi_dims)


def complement_poincare(t: ComplementT) -> TPoly:
    coeffs: list[Fraction] = []
    for j in sorted(t.basis.slices):
        while len(coeffs) <= j:
            coeffs.append(Fraction(0))
        coeffs[j] = Fraction(len(t.basis.slices[j]))
    return TPoly(coeffs)


# -- structural checks --------------------------------------------------------


def freeness_check(group: CoxeterGroup, m: MultiplicityFunction,
                   cap: int | None = None) -> dict:
    """Per-degree check that invariant multiples of the complement basis
    are independent and span, plus the series identity."""
    inv = invariant_generators(group)
    d = m.vanishing_order_degree()
    limit = (d + max(inv.degrees)) if cap is None else cap
    t = complement_T(group, m, limit)
    codim = t.basis.total_dimension()
    report = {
        "codim": codim,
        "group_order": group.order,
        "codim_matches_order": codim == group.order,
        "per_degree_ok": True,
        "series_identity_ok": True,
        "failures": [],
    }
    power_cache: dict[tuple[int, ...], Polynomial] = {}

    def invariant_monomial(exp: tuple[int, ...]) -> Polynomial:
        if exp in power_cache:
            return power_cache[exp]
        p = Polynomial.constant(group.dim, 1)
        for gen, k in zip(inv.generators, exp):
            if k:
                p = p * gen ** k
        power_cache[exp] = p
        return p

    def invariant_exponents(degree: int) -> list[tuple[int, ...]]:
        out = []

        def rec(i: int, remaining: int, prefix: list[int]):
            if i == len(inv.degrees):
                if remaining == 0:
                    out.append(tuple(prefix))
                return
            step = inv.degrees[i]
            for k in range(remaining // step + 1):
                rec(i + 1, remaining - k * step, prefix + [k])

        rec(0, degree, [])
        return out

    for j in range(limit + 1):
        dim_q = len(qm_slice(group, m, j))
        products: list[Polynomial] = []
        for tj in sorted(t.basis.slices):
            rem = j - tj
            if rem < 0:
                continue
            for exp in invariant_exponents(rem):
                base = invariant_monomial(exp)
                for te in t.basis.slices[tj]:
                    products.append(base * te)
        if len(products) != dim_q:
            report["per_degree_ok"] = False
            report["failures"].append(
                {"degree": j, "products": len(products), "slice_dim": dim_q})
            continue
        if products:
            monos = monomials_of_degree(group.dim, j)
            index = {e: i for i, e in enumerate(monos)}
            rk = rank(polynomials_to_rows(products, index), len(monos))
            if rk != dim_q:
                report["per_degree_ok"] = False
                report["failures"].append(
                    {"degree": j, "rank": rk, "slice_dim": dim_q})
    # Series identity: P_Q * prod(1 - t^{d_i}) = P_T through the cap.
    pq = TPoly([len(qm_slice(group, m, j)) for j in range(limit + 1)])
    pt = complement_poincare(t)
    product = pq * geometric_denominator(inv.degrees)
    truncated = TPoly(list(product.coeffs[:limit + 1]))
    report["series_identity_ok"] = truncated == pt
    report["complement_degrees"] = t.degrees()
    report["ok"] = (report["codim_matches_order"] and report["per_degree_ok"]
                    and report["series_identity_ok"])
    return report


def pi_m(group: CoxeterGroup, m: MultiplicityFunction, q: Polynomial,
         disc: Discriminant | None = None, check_harmonic: bool = False) -> Polynomial:
    """The projection q -> L_q(delta) onto the harmonic space."""
    if disc is None:
        disc = discriminants(group, m)
    image = integral_apply(group, m, q, disc.delta_2m1)
    if check_harmonic and not image.is_zero():
        for p in invariant_generators(group).generators:
            if not integral_apply(group, m, p, image).is_zero():
                raise ArithmeticError("projection image is not harmonic")
    return image


def duality_check(group: CoxeterGroup, m: MultiplicityFunction) -> dict:
    """Quotient dimensions, top-degree line, full-rank bracket blocks, and
    the rational-function symmetry of the quotient series."""
    inv = invariant_generators(group)
    d = m.vanishing_order_degree()
    t = complement_T(group, m, d + max(inv.degrees))
    disc = discriminants(group, m)
    r_dims = [len(t.basis.slices.get(j, [])) for j in range(d + 1)]
    report = {
        "d": d,
        "r_dims": r_dims,
        "top_dim_one": r_dims[d] == 1 if d < len(r_dims) else False,
        "palindromic_dims": all(r_dims[j] == r_dims[d - j]
                                for j in range(d + 1)),
        "blocks_full_rank": True,
        "block_failures": [],
    }
    for j in range(d // 2 + 1):
        left = t.basis.slices.get(j, [])
        right = t.basis.slices.get(d - j, [])
        if not left and not right:
            continue
        if len(left) != len(right):
            report["blocks_full_rank"] = False
            report["block_failures"].append({"degree": j, "reason": "dims differ"})
            continue
        matrix = [[bracket(group, m, disc, a, b) for b in right] for a in left]
        if not matrix or not det_rational(matrix):
            report["blocks_full_rank"] = False
            report["block_failures"].append({"degree": j, "reason": "singular block"})
    pt = complement_poincare(t)
    closed = TRational(pt, TPoly([1]))
    sym, l = closed.stanley_symmetry(0)
    report["quotient_series_palindromic"] = pt.is_palindromic() and pt.degree() == d
    # Stanley symmetry for the full ring: P_T / prod(1 - t^{d_i}).
    full = TRational(pt, geometric_denominator(inv.degrees))
    ok, l_full = full.stanley_symmetry(group.dim)
    report["stanley_ok"] = ok
    report["stanley_exponent"] = l_full
    report["ok"] = (report["top_dim_one"] and report["palindromic_dims"]
                    and report["blocks_full_rank"]
                    and report["quotient_series_palindromic"]
                    and report["stanley_ok"])
    return report


def harmonic_report(group: CoxeterGroup, m: MultiplicityFunction) -> dict:
    """dim H = |W|, orthogonality of the ideal against harmonics, and
    membership of 1 and the discriminant."""
    inv = invariant_generators(group)
    disc = discriminants(group, m)
    h = harmonic_space(group, m)
    d = m.vanishing_order_degree()
    report = {
        "total_dim": h.basis.total_dimension(),
        "group_order": group.order,
        "dim_matches_order": h.basis.total_dimension() == group.order,
        "h_dims": h.dims.coefficients,
        "contains_one": bool(h.basis.slices.get(0)),
        "contains_discriminant": False,
        "orthogonal_to_ideal": True,
        "orthogonality_failures": [],
    }
    top = h.basis.slices.get(d, [])
    report["contains_discriminant"] = slice_contains(top, disc.delta_2m1)
    for j, h_basis in sorted(h.basis.slices.items()):
        ideal = ideal_slice(group, m, inv, j)
        for f in ideal:
            for hp in h_basis:
                if pairing_value(group, m, f, hp):
                    report["orthogonal_to_ideal"] = False
                    report["orthogonality_failures"].append({"degree": j})
    report["ok"] = (report["dim_matches_order"] and report["contains_one"]
                    and report["contains_discriminant"]
                    and report["orthogonal_to_ideal"])
    return report


def det_A(group: CoxeterGroup, m: MultiplicityFunction,
          t: ComplementT | None = None, order_cap: int = 8) -> dict:
    """Determinant of the evaluation matrix [t_i(g k)] against the power
    of the discriminant, with the proportionality constant reported."""
    if group.order > order_cap:
        raise CapExceeded(
            f"group order {group.order} exceeds determinant cap {order_cap}")
    if t is None:
        t = complement_T(group, m)
    basis = t.elements()
    elements = group.elements
    n = group.dim
    matrix = []
    for ti in basis:
        row = []
        for g in elements:
            images = [Polynomial.linear_form(g[r]) for r in range(n)]
            row.append(ti.substitute(images))
        matrix.append(row)
    det = det_polynomial(matrix)
    disc = discriminants(group, m)
    if group.order % 2:
        raise ArithmeticError("group order must be even for the half power")
    target = disc.delta_2m1 ** (group.order // 2)
    report = {"det_degree": det.degree(), "constant": None, "ok": False}
    if det.is_zero() or target.is_zero():
        return report
    lead = det.leading_monomial()
    tlead = target.leading_monomial()
    if lead == tlead:
        c = det.terms[lead] / target.terms[tlead]
        if det == target.scale(c) and c:
            report["constant"] = c
            report["ok"] = True
    report["degree_sum_identity"] = (
        sum(t.degrees()) == group.order * disc.d // 2)
    return report


def linindep_check(group: CoxeterGroup, m: MultiplicityFunction) -> dict:
    """Images of the complement basis under the projection are a basis of
    the harmonic space; the kernel of the projection is the ideal."""
    disc = discriminants(group, m)
    t = complement_T(group, m)
    h = harmonic_space(group, m)
    inv = invariant_generators(group)
    images = [pi_m(group, m, ti, disc) for ti in t.elements()]
    nonzero = [p for p in images if not p.is_zero()]
    report = {
        "image_count": len(images),
        "all_nonzero": len(nonzero) == len(images),
        "independent": False,
        "spans_harmonics": False,
        "kernel_is_ideal": True,
        "kernel_failures": [],
    }
    by_degree: dict[int, list[Polynomial]] = {}
    for p in nonzero:
        by_degree.setdefault(p.degree(), []).append(p)
    total_rank = 0
    for j, polys in by_degree.items():
        monos = monomials_of_degree(group.dim, j)
        index = {e: i for i, e in enumerate(monos)}
        total_rank += rank(polynomials_to_rows(polys, index), len(monos))
    report["independent"] = total_rank == len(images)
    h_all = h.elements()
    report["spans_harmonics"] = (total_rank == h.basis.total_dimension()
                                 and all(slice_contains(
                                     h.basis.slices.get(p.degree(), []), p)
                                     for p in nonzero))
    # Kernel check per degree: ideal slices map to zero, and the rank of
    # the projection on each slice equals slice dim minus ideal dim.
    d = m.vanishing_order_degree()
    for j in range(d + 1):
        basis = qm_slice(group, m, j)
        if not basis:
            continue
        ideal = ideal_slice(group, m, inv, j)
        for f in ideal:
            if not pi_m(group, m, f, disc).is_zero():
                report["kernel_is_ideal"] = False
                report["kernel_failures"].append({"degree": j, "reason": "ideal not killed"})
                break
        slice_images = [pi_m(group, m, b, disc) for b in basis]
        nz = [p for p in slice_images if not p.is_zero()]
        rk = 0
        if nz:
            target_deg = nz[0].degree()
            monos = monomials_of_degree(group.dim, target_deg)
            index = {e: i for i, e in enumerate(monos)}
            rk = rank(polynomials_to_rows(nz, index), len(monos))
        if rk != len(basis) - len(ideal):
            report["kernel_is_ideal"] = False
            report["kernel_failures"].append(
                {"degree": j, "rank": rk, "expected": len(basis) - len(ideal)})
    report["ok"] = (report["all_nonzero"] and report["independent"]
                    and report["spans_harmonics"] and report["kernel_is_ideal"])
    return report


def fv_conjecture_checks(group: CoxeterGroup, m: MultiplicityFunction,
                         cap: int | None = None) -> dict:
    """Three verdicts: injectivity of the projection on harmonics, whether
    invariant multiples of harmonics span the quasiinvariants, and
    nondegeneracy of the degree-d form on harmonics."""
    inv = invariant_generators(group)
    disc = discriminants(group, m)
    d = m.vanishing_order_degree()
    limit = (d + max(inv.degrees)) if cap is None else cap
    h = harmonic_space(group, m)
    h_elems = h.elements()
    report = {"d": d, "harmonic_dim": h.basis.total_dimension()}

    # (a) injectivity of pi on H
    images = [pi_m(group, m, hp, disc) for hp in h_elems]
    by_degree: dict[int, list[Polynomial]] = {}
    for p in images:
        if not p.is_zero():
            by_degree.setdefault(p.degree(), []).append(p)
    total_rank = 0
    for j, polys in by_degree.items():
        monos = monomials_of_degree(group.dim, j)
        index = {e: i for i, e in enumerate(monos)}
        total_rank += rank(polynomials_to_rows(polys, index), len(monos))
    report["projection_injective_on_harmonics"] = total_rank == len(h_elems)

    # (b) invariants . H spans Q per degree
    spans = True
    span_failures = []
    power_cache: dict[tuple[int, ...], Polynomial] = {}

    def inv_monomial(exp):
        if exp not in power_cache:
            p = Polynomial.constant(group.dim, 1)
            for gen, k in zip(inv.generators, exp):
                if k:
                    p = p * gen ** k
            power_cache[exp] = p
        return power_cache[exp]

    def inv_exponents(degree):
        out = []

        def rec(i, remaining, prefix):
            if i == len(inv.degrees):
                if remaining == 0:
                    out.append(tuple(prefix))
                return
            step = inv.degrees[i]
            for k in range(remaining // step + 1):
                rec(i + 1, remaining - k * step, prefix + [k])

        rec(0, degree, [])
        return out

    for j in range(limit + 1):
        dim_q = len(qm_slice(group, m, j))
        if not dim_q:
            continue
        products = []
        for hj, hs in sorted(h.basis.slices.items()):
            rem = j - hj
            if rem < 0:
                continue
            for exp in inv_exponents(rem):
                base = inv_monomial(exp)
                for hp in hs:
                    products.append(base * hp)
        monos = monomials_of_degree(group.dim, j)
        index = {e: i for i, e in enumerate(monos)}
        rk = rank(polynomials_to_rows(products, index), len(monos)) if products else 0
        if rk != dim_q:
            spans = False
            span_failures.append({"degree": j, "rank": rk, "slice_dim": dim_q})
    report["harmonics_generate"] = spans
    report["generation_failures"] = span_failures

    # (c) nondegeneracy of <,> restricted to H
    nh = len(h_elems)
    matrix = [[bracket(group, m, disc, a, b) for b in h_elems] for a in h_elems]
    report["bracket_nondegenerate_on_harmonics"] = bool(det_rational(matrix)) if nh else True
    report["ok"] = (report["projection_injective_on_harmonics"]
                    and report["harmonics_generate"]
                    and report["bracket_nondegenerate_on_harmonics"])
    return report
