"""Poincare series bookkeeping: dense univariate polynomials over Q,
rational functions in t, exact Taylor expansion, and the palindromy /
Gorenstein symmetry test h(t) = (-1)^n t^l h(1/t)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence


def _trim(coeffs: list[Fraction]) -> list[Fraction]:
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs


class TPoly:
    """Dense univariate polynomial in t with Fraction coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence) -> None:
        self.coeffs = _trim([Fraction(c) for c in coeffs])

    @classmethod
    def one(cls) -> "TPoly":
        return cls([1])

    @classmethod
    def monomial(cls, k: int, c=1) -> "TPoly":
        return cls([0] * k + [c])

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        return isinstance(other, TPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def __add__(self, other: "TPoly") -> "TPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + [Fraction(0)] * (n - len(self.coeffs))
        b = other.coeffs + [Fraction(0)] * (n - len(other.coeffs))
        return TPoly([x + y for x, y in zip(a, b)])

    def __neg__(self) -> "TPoly":
        return TPoly([-c for c in self.coeffs])

    def __sub__(self, other: "TPoly") -> "TPoly":
        return self + (-other)

    def __mul__(self, other: "TPoly") -> "TPoly":
        if self.is_zero() or other.is_zero():
            return TPoly([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] += a * b
        return TPoly(out)

    def coefficient(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def reverse(self) -> "TPoly":
        """t^deg * p(1/t)."""
        return TPoly(list(reversed(self.coeffs)))

    def is_palindromic(self) -> bool:
        return not self.is_zero() and self.coeffs == list(reversed(self.coeffs))

    def render(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                mono = "t" if k == 1 else f"t^{k}"
                parts.append(mono if c == 1 else ("-" + mono if c == -1 else f"{c}*{mono}"))
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"TPoly({self.render()})"


@dataclass(frozen=True)
class TRational:
    """Quotient of TPolys; equality is tested by cross-multiplication."""

    numerator: TPoly
    denominator: TPoly

    def __post_init__(self):
        if self.denominator.is_zero():
            raise ZeroDivisionError("zero denominator")

    def equals(self, other: "TRational") -> bool:
        return self.numerator * other.denominator == other.numerator * self.denominator

    def series(self, cap: int) -> list[Fraction]:
        """Taylor coefficients 0..cap (denominator must be a unit at t=0)."""
        d0 = self.denominator.coefficient(0)
        if not d0:
            raise ZeroDivisionError("denominator vanishes at t=0")
        out: list[Fraction] = []
        for k in range(cap + 1):
            acc = self.numerator.coefficient(k)
            for j in range(1, k + 1):
                acc -= self.denominator.coefficient(j) * out[k - j]
            out.append(acc / d0)
        return out

    def times(self, other: "TRational") -> "TRational":
        return TRational(self.numerator * other.numerator,
                         self.denominator * other.denominator)

    def minus(self, other: "TRational") -> "TRational":
        num = (self.numerator * other.denominator
               - other.numerator * self.denominator)
        return TRational(num, self.denominator * other.denominator)

    def plus(self, other: "TRational") -> "TRational":
        num = (self.numerator * other.denominator
               + other.numerator * self.denominator)
        return TRational(num, self.denominator * other.denominator)

    def stanley_symmetry(self, n: int) -> tuple[bool, int | None]:
        """Does h(t) = (-1)^n t^l h(1/t) hold exactly for some integer l?

        With h = p/q, h(1/t) = t^(deg q - deg p) * rev(p)/rev(q), so the
        identity holds iff p*rev(q) and rev(p)*q agree up to (-1)^n t^l.
        """
        p, q = self.numerator, self.denominator
        lhs = p * q.reverse()
        rhs = p.reverse() * q
        if lhs.is_zero() or rhs.is_zero():
            return (lhs.is_zero() and rhs.is_zero(), None)
        # lhs must equal (-1)^n t^shift rhs for some shift in Z.
        lead_l = next(i for i, c in enumerate(lhs.coeffs) if c)
        lead_r = next(i for i, c in enumerate(rhs.coeffs) if c)
        shift = lead_l - lead_r
        sign = 1 if n % 2 == 0 else -1
        shifted = TPoly([0] * max(shift, 0) + [sign * c for c in rhs.coeffs])
        target = TPoly([0] * max(-shift, 0) + list(lhs.coeffs))
        if shifted == target:
            l = shift - (q.degree() - p.degree())
            return True, l
        return False, None

    def render(self) -> str:
        return f"({self.numerator.render()}) / ({self.denominator.render()})"


def geometric_denominator(degrees: Sequence[int]) -> TPoly:
    """prod_i (1 - t^d_i)."""
    out = TPoly.one()
    for d in degrees:
        out = out * (TPoly.one() - TPoly.monomial(d))
    return out


@dataclass
class PoincareData:
    """Per-degree dimensions with an optional exact closed form."""

    coefficients: list[int]
    closed_form: TRational | None = None
    label: str = ""

    def check_closed_form(self) -> bool:
        if self.closed_form is None:
            return True
        cap = len(self.coefficients) - 1
        series = self.closed_form.series(cap)
        return all(Fraction(c) == s for c, s in zip(self.coefficients, series))

    def coefficient(self, k: int) -> int:
        return self.coefficients[k] if 0 <= k < len(self.coefficients) else 0

    def to_dict(self) -> dict:
        out: dict = {"coefficients": list(self.coefficients)}
        if self.label:
            out["label"] = self.label
        if self.closed_form is not None:
            out["closed_form"] = self.closed_form.render()
        return out
