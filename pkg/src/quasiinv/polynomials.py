"""Sparse multivariate polynomials over exact rationals.

Terms are stored as a map from exponent tuples to nonzero Fraction
coefficients.  All arithmetic is exact; nothing here ever touches a float.
Monomials are ordered graded-lexicographically (total degree first, then
lex on exponents), which fixes leading monomials, echelon pivots, and the
canonical text rendering.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

Exponent = tuple[int, ...]
Rat = Fraction


class NotDivisible(ArithmeticError):
    """Exact division failed; carries the nonzero remainder as witness."""

    def __init__(self, remainder: "Polynomial"):
        super().__init__(f"not divisible, remainder {remainder}")
        self.remainder = remainder


def grlex_key(exp: Exponent) -> tuple[int, Exponent]:
    return (sum(exp), exp)


def monomials_of_degree(nvars: int, degree: int) -> list[Exponent]:
    """All exponent tuples of the given total degree, graded-lex descending."""
    if nvars == 0:
        return [()] if degree == 0 else []
    out: list[Exponent] = []

    def rec(prefix: list[int], remaining: int, pos: int) -> None:
        if pos == nvars - 1:
            out.append(tuple(prefix + [remaining]))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + [e], remaining - e, pos + 1)

    rec([], degree, 0)
    return out


class Polynomial:
    """Immutable sparse polynomial with Fraction coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, Rat] | None = None):
        self.nvars = nvars
        clean: dict[Exponent, Rat] = {}
        if terms:
            for exp, c in terms.items():
                if c:
                    clean[exp] = c if isinstance(c, Fraction) else Fraction(c)
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, c) -> "Polynomial":
        c = Fraction(c)
        return cls(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Polynomial":
        exp = [0] * nvars
        exp[i] = 1
        return cls(nvars, {tuple(exp): Fraction(1)})

    @classmethod
    def monomial(cls, exp: Exponent, c=1) -> "Polynomial":
        return cls(len(exp), {tuple(exp): Fraction(c)})

    @classmethod
    def linear_form(cls, coeffs: Sequence[Rat]) -> "Polynomial":
        n = len(coeffs)
        return cls(n, {tuple(0 if j != i else 1 for j in range(n)): Fraction(c)
                       for i, c in enumerate(coeffs) if c})

    # -- basic queries ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Max total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def leading_monomial(self) -> Exponent:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=grlex_key)

    def leading_coefficient(self) -> Rat:
        return self.terms[self.leading_monomial()]

    def coefficient(self, exp: Exponent) -> Rat:
        return self.terms.get(tuple(exp), Fraction(0))

    def constant_term(self) -> Rat:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def homogeneous_component(self, degree: int) -> "Polynomial":
        return Polynomial(self.nvars,
                          {e: c for e, c in self.terms.items() if sum(e) == degree})

    def homogeneous_components(self) -> dict[int, "Polynomial"]:
        by_deg: dict[int, dict[Exponent, Rat]] = {}
        for e, c in self.terms.items():
            by_deg.setdefault(sum(e), {})[e] = c
        return {d: Polynomial(self.nvars, t) for d, t in sorted(by_deg.items())}

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return Polynomial(self.nvars, terms)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self.scale(other)
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        if len(self.terms) > len(other.terms):
            self, other = other, self
        terms: dict[Exponent, Rat] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        return Polynomial(self.nvars, terms)

    def __rmul__(self, other) -> "Polynomial":
        return self.scale(other)

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial.zero(self.nvars)
        if c == 1:
            return self
        return Polynomial(self.nvars, {e: c * v for e, v in self.terms.items()})

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        return (isinstance(other, Polynomial) and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- calculus and substitution -------------------------------------

    def derivative(self, i: int) -> "Polynomial":
        terms: dict[Exponent, Rat] = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                terms[tuple(e2)] = c * e[i]
        return Polynomial(self.nvars, terms)

    def directional_derivative(self, vec: Sequence[Rat]) -> "Polynomial":
        out = Polynomial.zero(self.nvars)
        for i, v in enumerate(vec):
            if v:
                out = out + self.derivative(i).scale(v)
        return out

    def evaluate(self, point: Sequence[Rat]) -> Rat:
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v *= Fraction(x) ** k
            total += v
        return total

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute images[i] for variable i (ring homomorphism)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        nv = images[0].nvars if images else 0
        cache: dict[tuple[int, int], Polynomial] = {}

        def power(i: int, k: int) -> Polynomial:
            key = (i, k)
            if key not in cache:
                cache[key] = images[i] ** k
            return cache[key]

        out = Polynomial.zero(nv)
        for e, c in self.terms.items():
            term = Polynomial.constant(nv, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    # -- exact division -------------------------------------------------

    def divide_by_linear_form(self, form: Sequence[Rat]) -> "Polynomial":
        """Exact quotient by a nonzero linear form; raises NotDivisible."""
        coeffs = [Fraction(c) for c in form]
        if not any(coeffs):
            raise ValueError("zero linear form")
        # Solved variable: largest |coefficient|, ties to the lowest index.
        k = max(range(len(coeffs)), key=lambda i: (abs(coeffs[i]), -i))
        a = coeffs[k]
        quotient: dict[Exponent, Rat] = {}
        rem = dict(self.terms)
        while True:
            top = None
            for e in rem:
                if e[k] > 0 and (top is None or (e[k], grlex_key(e)) > (top[k], grlex_key(top))):
                    top = e
            if top is None:
                break
            c = rem[top] / a
            qe = list(top)
            qe[k] -= 1
            qe = tuple(qe)
            quotient[qe] = quotient.get(qe, Fraction(0)) + c
            # subtract c * x^qe * form
            for i, fi in enumerate(coeffs):
                if fi:
                    e2 = list(qe)
                    e2[i] += 1
                    e2 = tuple(e2)
                    s = rem.get(e2, Fraction(0)) - c * fi
                    if s:
                        rem[e2] = s
                    else:
                        rem.pop(e2, None)
        if rem:
            raise NotDivisible(Polynomial(self.nvars, rem))
        return Polynomial(self.nvars, quotient)

    def remainder_chain(self, form: Sequence[Rat], steps: int) -> tuple[list["Polynomial"], "Polynomial"]:
        """Iterated division by a linear form without raising.

        Returns (remainders r_0..r_{steps-1}, final quotient): self =
        sum_i r_i * form^i + quotient * form^steps where each r_i is free
        of the solved variable.  The r_i are the coefficients of the
        form-adic expansion used by the quasiinvariance linear system.
        """
        coeffs = [Fraction(c) for c in form]
        k = max(range(len(coeffs)), key=lambda i: (abs(coeffs[i]), -i))
        a = coeffs[k]
        remainders: list[Polynomial] = []
        current = self
        for _ in range(steps):
            quotient: dict[Exponent, Rat] = {}
            rem = dict(current.terms)
            while True:
                top = None
                for e in rem:
                    if e[k] > 0 and (top is None or (e[k], grlex_key(e)) > (top[k], grlex_key(top))):
                        top = e
                if top is None:
                    break
                c = rem[top] / a
                qe = list(top)
                qe[k] -= 1
                qe = tuple(qe)
                quotient[qe] = quotient.get(qe, Fraction(0)) + c
                for i, fi in enumerate(coeffs):
                    if fi:
                        e2 = list(qe)
                        e2[i] += 1
                        e2 = tuple(e2)
                        s = rem.get(e2, Fraction(0)) - c * fi
                        if s:
                            rem[e2] = s
                        else:
                            rem.pop(e2, None)
            remainders.append(Polynomial(self.nvars, rem))
            current = Polynomial(self.nvars, quotient)
        return remainders, current

    # -- rendering ------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Exponent, Rat]]:
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def render(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = default_names(self.nvars)
        pieces = []
        for exp, c in self.sorted_terms():
            mono = "*".join(
                f"{names[i]}^{k}" if k > 1 else names[i]
                for i, k in enumerate(exp) if k)
            if mono:
                coeff = "" if c == 1 else ("-" if c == -1 else f"{c}*")
                s = coeff + mono
            else:
                s = str(c)
            if pieces and not s.startswith("-"):
                pieces.append("+ " + s)
            elif pieces:
                pieces.append("- " + s[1:])
            else:
                pieces.append(s)
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"Polynomial({self.render()})"


def default_names(nvars: int) -> list[str]:
    if nvars == 1:
        return ["x"]
    return [f"x{i + 1}" for i in range(nvars)]


def exact_divide(p: Polynomial, form: Sequence[Rat]) -> Polynomial:
    """Exact quotient of p by a nonzero linear form (raises NotDivisible)."""
    return p.divide_by_linear_form(form)


def primitive_covector(coeffs: Sequence[Rat]) -> tuple[Exponent, Fraction] | tuple[tuple, Fraction]:
    """Scale a rational covector to primitive integers, first nonzero > 0.

    Returns (primitive tuple, scalar) with coeffs = scalar * primitive.
    """
    fracs = [Fraction(c) for c in coeffs]
    nz = [c for c in fracs if c]
    if not nz:
        raise ValueError("zero covector")
    den_lcm = 1
    for c in fracs:
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    ints = [int(c * den_lcm) for c in fracs]
    g = 0
    for v in ints:
        g = math.gcd(g, abs(v))
    ints = [v // g for v in ints]
    first = next(v for v in ints if v)
    if first < 0:
        ints = [-v for v in ints]
    prim = tuple(ints)
    scalar = next(c / p for c, p in zip(fracs, prim) if p)
    return prim, scalar


def poly_from_string_terms(nvars: int, entries: Iterable[tuple[Exponent, Rat]]) -> Polynomial:
    return Polynomial(nvars, dict(entries))
