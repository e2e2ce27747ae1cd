"""Quasiinvariant slices, their Poincare series, and hyperplane
arrangements.

A polynomial q is quasiinvariant for a reflection s with weight m_s when
q - s.q is divisible by the 2m_s+1 power of the linear form of s.  Degree
slices are computed as nullspaces of the linear system that forces the
first 2m_s+1 coefficients of the form-adic expansion of q - s.q to vanish;
membership testing performs the successive exact divisions directly, so
the two routes stay independent.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .coxeter import (CoxeterGroup, MultiplicityFunction, Reflection,
                      identity_matrix, orthogonal_reflection)
from .linalg import nullspace, polynomials_to_rows, vectors_to_polynomials
from .polynomials import (NotDivisible, Polynomial, grlex_key,
                          monomials_of_degree, primitive_covector)
from .series import PoincareData, TPoly, TRational, geometric_denominator

Matrix = tuple[tuple[Fraction, ...], ...]


@dataclass
class QuasiInvarianceResult:
    ok: bool
    witness: Reflection | None = None
    remainder: Polynomial | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class GradedBasis:
    """Echelonized homogeneous bases per degree (graded-lex pivots)."""

    slices: dict[int, list[Polynomial]]

    def dimension(self, j: int) -> int:
        return len(self.slices.get(j, []))

    def dimensions(self, cap: int) -> list[int]:
        return [self.dimension(j) for j in range(cap + 1)]

    def total_dimension(self) -> int:
        return sum(len(v) for v in self.slices.values())


def is_quasiinvariant(q: Polynomial, group: CoxeterGroup,
                      m: MultiplicityFunction) -> QuasiInvarianceResult:
    """Divisibility test of q - s.q by alpha_s^(2 m_s + 1), all reflections."""
    for s in group.reflections:
        diff = q - group.act(s.matrix, q)
        if diff.is_zero():
            continue
        needed = 2 * m.of_reflection(s) + 1
        current = diff
        for _ in range(needed):
            try:
                current = current.divide_by_linear_form(s.alpha)
            except NotDivisible as exc:
                return QuasiInvarianceResult(False, s, exc.remainder)
    return QuasiInvarianceResult(True)


class _SliceEngine:
    """Shared machinery for group and arrangement slice computations."""

    def __init__(self, nvars: int,
                 conditions: list[tuple[tuple[int, ...], Matrix, int]]):
        # conditions: (alpha, reflection matrix, required vanishing order)
        self.nvars = nvars
        self.conditions = [(a, mtx, k) for a, mtx, k in conditions if k > 1]
        self._mono_cache: dict = {}
        self._slice_cache: dict[int, list[Polynomial]] = {}

    def _act_monomial(self, mtx: Matrix, exp: tuple[int, ...]) -> Polynomial:
        key = (mtx, exp)
        cached = self._mono_cache.get(key)
        if cached is None:
            rows = [Polynomial.linear_form(mtx[i]) for i in range(self.nvars)]
            cached = Polynomial.monomial(exp).substitute(rows)
            self._mono_cache[key] = cached
        return cached

    def slice(self, j: int) -> list[Polynomial]:
        if j in self._slice_cache:
            return self._slice_cache[j]
        monos = monomials_of_degree(self.nvars, j)   # grlex descending
        col_of = {e: i for i, e in enumerate(monos)}
        rows: list[dict[int, Fraction]] = []
        for alpha, mtx, order in self.conditions:
            # remainder chains of x^a - s.x^a under division by alpha
            per_step: list[dict[tuple[int, ...], dict[int, Fraction]]] = [
                {} for _ in range(order - 1)]
            for col, exp in enumerate(monos):
                image = self._act_monomial(mtx, exp)
                diff = Polynomial.monomial(exp) - image
                if diff.is_zero():
                    continue
                remainders, _ = diff.remainder_chain(alpha, order - 1)
                for step, rem in enumerate(remainders):
                    bucket = per_step[step]
                    for mono_e, c in rem.terms.items():
                        bucket.setdefault(mono_e, {})[col] = \
                            bucket.get(mono_e, {}).get(col, Fraction(0)) + c
            for bucket in per_step:
                for mono_e in sorted(bucket, key=grlex_key, reverse=True):
                    row = {c: v for c, v in bucket[mono_e].items() if v}
                    if row:
                        rows.append(row)
        vectors = nullspace(rows, len(monos))
        basis = vectors_to_polynomials(vectors, monos, self.nvars)
        self._slice_cache[j] = basis
        return basis


def _group_engine(group: CoxeterGroup, m: MultiplicityFunction) -> _SliceEngine:
    cache = getattr(group, "_slice_engines", None)
    if cache is None:
        cache = {}
        setattr(group, "_slice_engines", cache)
    key = m.values
    if key not in cache:
        conditions = [(s.alpha, s.matrix, 2 * m.of_reflection(s) + 1)
                      for s in group.reflections]
        cache[key] = _SliceEngine(group.dim, conditions)
    return cache[key]


def qm_slice(group: CoxeterGroup, m: MultiplicityFunction, j: int) -> list[Polynomial]:
    """Echelonized basis of the degree-j quasiinvariants."""
    if j < 0:
        return []
    return _group_engine(group, m).slice(j)


def qm_graded_basis(group: CoxeterGroup, m: MultiplicityFunction,
                    cap: int) -> GradedBasis:
    return GradedBasis({j: qm_slice(group, m, j) for j in range(cap + 1)})


def poincare_series(group: CoxeterGroup, m: MultiplicityFunction, cap: int,
                    closed_form: TRational | None = None) -> PoincareData:
    coeffs = [len(qm_slice(group, m, j)) for j in range(cap + 1)]
    data = PoincareData(coeffs, closed_form,
                        label=f"Q[{group.name}; {m.describe()}]")
    if closed_form is not None and not data.check_closed_form():
        raise ValueError("closed form disagrees with computed dimensions")
    return data


# -- arrangements ----------------------------------------------------------


@dataclass
class Arrangement:
    """Hyperplanes with multiplicities; reflections are orthogonal for the
    standard form (there is no group here, only the mirrors)."""

    nvars: int
    hyperplanes: list[tuple[tuple[int, ...], int, Matrix]]

    @classmethod
    def from_covectors(cls, covectors: Sequence[Sequence],
                       multiplicities: Sequence[int]) -> "Arrangement":
        if len(covectors) != len(multiplicities):
            raise ValueError("one multiplicity per hyperplane")
        nvars = len(covectors[0])
        gram = identity_matrix(nvars)
        seen: list[tuple[int, ...]] = []
        planes = []
        for cov, mult in zip(covectors, multiplicities):
            prim, _ = primitive_covector(cov)
            if prim in seen:
                raise ValueError(f"repeated hyperplane {prim}")
            seen.append(prim)
            if mult < 0:
                raise ValueError("multiplicities must be nonnegative")
            planes.append((prim, int(mult), orthogonal_reflection(prim, gram)))
        return cls(nvars, planes)

    def engine(self) -> _SliceEngine:
        if not hasattr(self, "_engine"):
            conditions = [(a, mtx, 2 * mult + 1)
                          for a, mult, mtx in self.hyperplanes]
            self._engine = _SliceEngine(self.nvars, conditions)
        return self._engine


def arrangement_slice(arrangement: Arrangement, j: int) -> list[Polynomial]:
    if j < 0:
        return []
    return arrangement.engine().slice(j)


def arrangement_poincare(arrangement: Arrangement, cap: int,
                         closed_form: TRational | None = None) -> PoincareData:
    coeffs = [len(arrangement_slice(arrangement, j)) for j in range(cap + 1)]
    data = PoincareData(coeffs, closed_form, label="Q[arrangement]")
    if closed_form is not None and not data.check_closed_form():
        raise ValueError("closed form disagrees with computed dimensions")
    return data


def slice_contains(slice_basis: Sequence[Polynomial], q: Polynomial) -> bool:
    """Membership of a homogeneous q in the span of an echelon basis."""
    rem = q
    for b in slice_basis:
        if rem.is_zero():
            return True
        lead = b.leading_monomial()
        c = rem.coefficient(lead)
        if c:
            rem = rem - b.scale(c / b.leading_coefficient())
    return rem.is_zero()
