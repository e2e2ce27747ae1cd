"""Exact linear algebra over the rationals.

Rows are sparse dicts {column: Fraction}.  Elimination is fraction-free:
rows are scaled to coprime integers and combined by cross-multiplication,
with a gcd reduction after every step, so intermediate entries never grow
denominators.  Column order is supplied by the caller (graded-lex order of
monomials in practice), which makes pivots, echelon bases, and nullspace
bases deterministic.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .polynomials import NotDivisible, Polynomial

SparseRow = dict[int, Fraction]


def _integerize(row: SparseRow) -> dict[int, int]:
    if not row:
        return {}
    lcm = 1
    for v in row.values():
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    ints = {j: int(v * lcm) for j, v in row.items()}
    g = 0
    for v in ints.values():
        g = math.gcd(g, abs(v))
    return {j: v // g for j, v in ints.items()}


def rref(rows: Sequence[SparseRow], ncols: int) -> tuple[list[SparseRow], list[int]]:
    """Reduced row echelon form with columns processed in order 0..ncols-1.

    Returns (rows, pivot_columns); rows are normalized (pivot entry 1) and
    fully reduced, so the result is the canonical RREF of the row space.
    """
    work = [_integerize(dict(r)) for r in rows if r]
    pivots: list[int] = []
    done: list[dict[int, int]] = []
    for col in range(ncols):
        pr = None
        for idx, r in enumerate(work):
            if r.get(col):
                pr = idx
                break
        if pr is None:
            continue
        piv = work.pop(pr)
        pv = piv[col]
        reduced = []
        for r in work:
            rv = r.get(col)
            if rv:
                new = {}
                for j in set(piv) | set(r):
                    val = pv * r.get(j, 0) - rv * piv.get(j, 0)
                    if val:
                        new[j] = val
                g = 0
                for v in new.values():
                    g = math.gcd(g, abs(v))
                r = {j: v // g for j, v in new.items()} if g else {}
            if r:
                reduced.append(r)
        work = reduced
        pivots.append(col)
        done.append(piv)
    # Back-substitute for the reduced form, then normalize pivots to 1.
    result: list[SparseRow] = [dict() for _ in done]
    for i in range(len(done) - 1, -1, -1):
        row = {j: Fraction(v) for j, v in done[i].items()}
        pv = row[pivots[i]]
        row = {j: v / pv for j, v in row.items()}
        for k in range(i + 1, len(done)):
            f = row.get(pivots[k])
            if f:
                for j, v in result[k].items():
                    s = row.get(j, Fraction(0)) - f * v
                    if s:
                        row[j] = s
                    else:
                        row.pop(j, None)
        result[i] = row
    return result, pivots


def nullspace(rows: Sequence[SparseRow], ncols: int) -> list[SparseRow]:
    """Canonical basis of {c : M c = 0}, echelonized against the column order."""
    reduced, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    free = [j for j in range(ncols) if j not in pivot_set]
    basis: list[SparseRow] = []
    for f in free:
        vec: SparseRow = {f: Fraction(1)}
        for row, p in zip(reduced, pivots):
            v = row.get(f)
            if v:
                vec[p] = -v
        basis.append(vec)
    if not basis:
        return []
    echelon, _ = rref(basis, ncols)
    return echelon


def rank(rows: Sequence[SparseRow], ncols: int) -> int:
    _, pivots = rref(rows, ncols)
    return len(pivots)


def det_rational(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant of a dense rational matrix by fraction-free elimination."""
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    m = [[Fraction(v) for v in row] for row in matrix]
    sign = 1
    denom = Fraction(1)
    prev = Fraction(1)
    for k in range(n - 1):
        if not m[k][k]:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return Fraction(0)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev
            m[i][k] = Fraction(0)
        prev = m[k][k]
    return sign * m[n - 1][n - 1] / denom


def invert_matrix(matrix: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Inverse of a dense rational matrix; raises ValueError if singular."""
    n = len(matrix)
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((i for i in range(col, n) if aug[i][col]), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for i in range(n):
            if i != col and aug[i][col]:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
    return [row[n:] for row in aug]


def _poly_exact_quotient(num: Polynomial, den: Polynomial) -> Polynomial:
    """Exact multivariate quotient (graded-lex leading-term division).

    Requires den | num; this is the division step of the Bareiss scheme,
    where divisibility is guaranteed.
    """
    if den.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    quotient = Polynomial.zero(num.nvars)
    rem = num
    den_lead = den.leading_monomial()
    den_c = den.leading_coefficient()
    while not rem.is_zero():
        lead = rem.leading_monomial()
        diff = tuple(a - b for a, b in zip(lead, den_lead))
        if any(d < 0 for d in diff):
            raise NotDivisible(rem)
        t = Polynomial.monomial(diff, rem.terms[lead] / den_c)
        quotient = quotient + t
        rem = rem - t * den
    return quotient


def det_polynomial(matrix: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Determinant of a matrix of polynomials via Bareiss elimination."""
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    nvars = matrix[0][0].nvars
    m = [list(row) for row in matrix]
    sign = 1
    prev = Polynomial.constant(nvars, 1)
    for k in range(n - 1):
        if m[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not m[i][k].is_zero()), None)
            if swap is None:
                return Polynomial.zero(nvars)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = _poly_exact_quotient(num, prev)
            m[i][k] = Polynomial.zero(nvars)
        prev = m[k][k]
    result = m[n - 1][n - 1]
    return result if sign > 0 else -result


def vectors_to_polynomials(vectors: Sequence[SparseRow], monomials: Sequence[tuple[int, ...]],
                           nvars: int) -> list[Polynomial]:
    return [Polynomial(nvars, {monomials[j]: c for j, c in vec.items()}) for vec in vectors]


def polynomials_to_rows(polys: Sequence[Polynomial], monomial_index: dict[tuple[int, ...], int]) -> list[SparseRow]:
    rows = []
    for p in polys:
        rows.append({monomial_index[e]: c for e, c in p.terms.items()})
    return rows
