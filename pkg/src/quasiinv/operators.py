"""Differential operators with rational coefficients and group parts.

An operator is a sum of normal-ordered terms

    coefficient(x) * d^beta * w

where the coefficient is a polynomial divided by a product of powers of
linear forms (kept factored, never expanded), beta is a derivative
multi-index, and w is an optional group element acting by substitution.
Composition uses the commutation rules

    d o f = f o d + f',      w o d_i = sum_k w[k][i] d_k o w,
    w o f = (w.f) o w,

together with the quotient rule for the factored denominators.  Terms with
the same (beta, w) are merged into a single reduced coefficient, which
makes the normal form canonical: equal operators have equal term maps.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .polynomials import (NotDivisible, Polynomial, default_names, grlex_key,
                          primitive_covector)

Matrix = tuple[tuple[Fraction, ...], ...]
Beta = tuple[int, ...]
DenKey = tuple[tuple[tuple[int, ...], int], ...]   # sorted ((form, exponent), ...)


class NonPolynomialResult(ArithmeticError):
    """An operator application left an uncleared denominator."""

    def __init__(self, residue: "RationalFunction"):
        super().__init__(f"result is not a polynomial: {residue.render()}")
        self.residue = residue


class SymbolNotPolynomial(ArithmeticError):
    pass


_inverse_cache: dict[Matrix, Matrix] = {}
_subs_cache: dict[tuple[Matrix, tuple[int, ...]], Polynomial] = {}
_form_move_cache: dict[tuple[Matrix, tuple[int, ...]], tuple] = {}


def _matrix_inverse(w: Matrix) -> Matrix:
    cached = _inverse_cache.get(w)
    if cached is None:
        from .linalg import invert_matrix
        cached = tuple(tuple(v for v in row) for row in invert_matrix(w))
        _inverse_cache[w] = cached
    return cached


def _substituted_monomial(w: Matrix, exp: tuple[int, ...]) -> Polynomial:
    """Image of x^exp under x -> w^-1 x, cached across calls."""
    key = (w, exp)
    cached = _subs_cache.get(key)
    if cached is not None:
        return cached
    n = len(exp)
    if not any(exp):
        result = Polynomial.constant(n, 1)
    else:
        i = next(t for t in range(n) if exp[t])
        rest = tuple(v - (1 if t == i else 0) for t, v in enumerate(exp))
        w_inv = _matrix_inverse(w)
        result = _substituted_monomial(w, rest) * Polynomial.linear_form(w_inv[i])
    _subs_cache[key] = result
    return result


def substitute_by_group(w: Matrix, f: Polynomial) -> Polynomial:
    """(w . f)(x) = f(w^-1 x), with monomial-level caching."""
    out = Polynomial.zero(f.nvars)
    for exp, c in f.terms.items():
        out = out + _substituted_monomial(w, exp).scale(c)
    return out


def _moved_form(w: Matrix, form: tuple[int, ...]) -> tuple:
    """(primitive covector, scalar) for the form alpha o w^-1."""
    key = (w, form)
    cached = _form_move_cache.get(key)
    if cached is None:
        w_inv = _matrix_inverse(w)
        moved = tuple(sum(Fraction(form[i]) * w_inv[i][j]
                          for i in range(len(form)))
                      for j in range(len(form)))
        cached = primitive_covector(moved)
        _form_move_cache[key] = cached
    return cached


_PRECHECK_MOD = (1 << 61) - 1
_pow_cache: dict[tuple[int, int], int] = {}
_invmod_cache: dict[int, int] = {}
_hyperplane_points: dict[tuple[tuple[int, ...], int], tuple[int, ...]] = {}


def _pow_mod(x: int, k: int) -> int:
    key = (x, k)
    v = _pow_cache.get(key)
    if v is None:
        v = pow(x, k, _PRECHECK_MOD)
        _pow_cache[key] = v
    return v


def _inv_mod(d: int) -> int:
    v = _invmod_cache.get(d)
    if v is None:
        v = pow(d, _PRECHECK_MOD - 2, _PRECHECK_MOD)
        _invmod_cache[d] = v
    return v


def _eval_mod(p: Polynomial, point: Sequence[int]) -> int:
    mod = _PRECHECK_MOD
    total = 0
    for e, c in p.terms.items():
        den = c.denominator % mod
        if den == 0:
            return 0  # cannot certify; force the exact attempt
        v = c.numerator % mod
        if c.denominator != 1:
            v = v * _inv_mod(den) % mod
        for x, k in zip(point, e):
            if k:
                v = v * _pow_mod(x, k) % mod
        total = (total + v) % mod
    return total


def _divisibility_precheck(p: Polynomial, form: Sequence[int]) -> bool:
    """Cheap necessary condition for form | p: p vanishes (mod a large
    prime) at integer points of the hyperplane.  False means definitely
    not divisible; True only licenses an exact division attempt."""
    n = p.nvars
    mod = _PRECHECK_MOD
    for seed in (1, 5):
        key = (tuple(form), seed)
        point = _hyperplane_points.get(key)
        if point is None:
            k = max(range(n), key=lambda i: (abs(Fraction(form[i])), -i))
            fk = int(form[k])
            pt = [0] * n
            acc = 0
            for i in range(n):
                if i != k:
                    w = seed * (i + 2) + i
                    pt[i] = (w * fk) % mod
                    acc += w * int(form[i])
            pt[k] = (-acc) % mod
            point = tuple(pt)
            _hyperplane_points[key] = point
        if _eval_mod(p, point):
            return False
    return True


class RationalFunction:
    """Polynomial numerator over a factored product of linear-form powers.

    The stored representation is fully reduced (the numerator is divisible
    by no denominator form), which makes it unique.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: DenKey = (), reduce: bool = True):
        if reduce:
            num, den = self._reduce(num, den)
        self.num = num
        self.den = den

    @staticmethod
    def _reduce(num: Polynomial, den: DenKey) -> tuple[Polynomial, DenKey]:
        if num.is_zero():
            return num, ()
        out = []
        for form, k in den:
            while k > 0 and _divisibility_precheck(num, form):
                try:
                    num = num.divide_by_linear_form(form)
                    k -= 1
                except NotDivisible:
                    break
            if k > 0:
                out.append((form, k))
        return num, tuple(sorted(out))

    @classmethod
    def from_poly(cls, p: Polynomial) -> "RationalFunction":
        return cls(p, (), reduce=False)

    @classmethod
    def zero(cls, nvars: int) -> "RationalFunction":
        return cls(Polynomial.zero(nvars), (), reduce=False)

    @property
    def nvars(self) -> int:
        return self.num.nvars

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return not self.den

    def poly(self) -> Polynomial:
        if self.den:
            raise NonPolynomialResult(self)
        return self.num

    def degree(self) -> int:
        """Degree as a homogeneous rational function (num minus den)."""
        return self.num.degree() - sum(k * 1 for _, k in self.den) if not self.num.is_zero() else 0

    def homogeneity(self) -> int | None:
        if self.num.is_zero():
            return None
        if not self.num.is_homogeneous():
            return None
        return self.num.degree() - sum(k for _, k in self.den)

    def div_form(self, form: Sequence, power: int = 1) -> "RationalFunction":
        prim, scalar = primitive_covector(form)
        merged = dict(self.den)
        merged[prim] = merged.get(prim, 0) + power
        num = self.num.scale(Fraction(1) / scalar ** power)
        return RationalFunction(num, tuple(sorted(merged.items())))

    def scale(self, c) -> "RationalFunction":
        c = Fraction(c)
        if not c:
            return RationalFunction.zero(self.nvars)
        if c == 1:
            return self
        return RationalFunction(self.num.scale(c), self.den, reduce=False)

    def neg(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den, reduce=False)

    def mul_poly(self, p: Polynomial) -> "RationalFunction":
        return RationalFunction(self.num * p, self.den)

    def mul(self, other: "RationalFunction") -> "RationalFunction":
        merged = dict(self.den)
        for form, k in other.den:
            merged[form] = merged.get(form, 0) + k
        return RationalFunction(self.num * other.num, tuple(sorted(merged.items())))

    def add(self, other: "RationalFunction") -> "RationalFunction":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        da, db = dict(self.den), dict(other.den)
        lcm = dict(da)
        for form, k in db.items():
            lcm[form] = max(lcm.get(form, 0), k)
        num_a = self.num
        num_b = other.num
        for form, k in lcm.items():
            fa = k - da.get(form, 0)
            fb = k - db.get(form, 0)
            fp = Polynomial.linear_form(form)
            if fa:
                num_a = num_a * fp ** fa
            if fb:
                num_b = num_b * fp ** fb
        return RationalFunction(num_a + num_b, tuple(sorted(lcm.items())))

    def sub(self, other: "RationalFunction") -> "RationalFunction":
        return self.add(other.neg())

    def derivative(self, i: int) -> "RationalFunction":
        if not self.den:
            return RationalFunction(self.num.derivative(i), (), reduce=False)
        forms = [Polynomial.linear_form(f) for f, _ in self.den]
        full = Polynomial.constant(self.nvars, 1)
        for fp in forms:
            full = full * fp
        num = self.num.derivative(i) * full
        for j, (form, k) in enumerate(self.den):
            ci = Fraction(form[i])
            if ci:
                partial = Polynomial.constant(self.nvars, 1)
                for r, fp in enumerate(forms):
                    if r != j:
                        partial = partial * fp
                num = num - self.num.scale(k * ci) * partial
        den = tuple(sorted((form, k + 1) for form, k in self.den))
        return RationalFunction(num, den)

    def derivative_multi(self, beta: Beta) -> "RationalFunction":
        out = self
        for i, k in enumerate(beta):
            for _ in range(k):
                out = out.derivative(i)
        return out

    def apply_group(self, w: Matrix) -> "RationalFunction":
        """The substitution action: f |-> f o w^-1 on both parts."""
        num = substitute_by_group(w, self.num)
        scale = Fraction(1)
        den: dict[tuple[int, ...], int] = {}
        for form, k in self.den:
            prim, scalar = _moved_form(w, form)
            den[prim] = den.get(prim, 0) + k
            scale /= scalar ** k
        if scale != 1:
            num = num.scale(scale)
        return RationalFunction(num, tuple(sorted(den.items())))

    def evaluate_at_zero(self) -> Fraction:
        if self.den:
            raise NonPolynomialResult(self)
        return self.num.constant_term()

    def __eq__(self, other) -> bool:
        return (isinstance(other, RationalFunction)
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def render(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = default_names(self.nvars)
        num = self.num.render(names)
        if not self.den:
            return num
        dens = []
        for form, k in self.den:
            fs = Polynomial.linear_form(form).render(names)
            dens.append(f"({fs})^{k}" if k > 1 else f"({fs})")
        return f"({num})/" + "".join(dens)

    def __repr__(self):
        return f"RationalFunction({self.render()})"


def _multi_binomial(beta: Beta, gamma: Beta) -> int:
    out = 1
    for b, g in zip(beta, gamma):
        out *= math.comb(b, g)
    return out


def _sub_multi_indices(beta: Beta) -> Iterable[Beta]:
    if not beta:
        yield ()
        return
    head = beta[0]
    for rest in _sub_multi_indices(beta[1:]):
        for k in range(head + 1):
            yield (k,) + rest


_pushthrough_cache: dict[tuple[Matrix, Beta], dict[Beta, Fraction]] = {}


def _pushthrough(w: Matrix, beta: Beta) -> dict[Beta, Fraction]:
    """Expansion of w o d^beta as sum_delta c_delta d^delta o w."""
    key = (w, beta)
    cached = _pushthrough_cache.get(key)
    if cached is not None:
        return cached
    n = len(beta)
    expansion = Polynomial.constant(n, 1)
    for i, k in enumerate(beta):
        if k:
            col = Polynomial.linear_form([w[r][i] for r in range(n)])
            expansion = expansion * col ** k
    result = dict(expansion.terms)
    _pushthrough_cache[key] = result
    return result


class RationalOp:
    """Normal-ordered operator: map (beta, w) -> reduced coefficient."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int,
                 terms: dict[tuple[Beta, Matrix | None], RationalFunction] | None = None):
        self.nvars = nvars
        self.terms = {k: v for k, v in (terms or {}).items() if not v.is_zero()}

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "RationalOp":
        return cls(nvars)

    @classmethod
    def identity(cls, nvars: int) -> "RationalOp":
        return cls.mul_by(Polynomial.constant(nvars, 1))

    @classmethod
    def mul_by(cls, p: Polynomial) -> "RationalOp":
        key = ((0,) * p.nvars, None)
        return cls(p.nvars, {key: RationalFunction.from_poly(p)})

    @classmethod
    def coefficient_term(cls, coeff: RationalFunction, beta: Beta,
                         w: Matrix | None = None) -> "RationalOp":
        return cls(coeff.nvars, {(tuple(beta), w): coeff})

    @classmethod
    def partial(cls, nvars: int, i: int, order: int = 1) -> "RationalOp":
        beta = tuple(order if j == i else 0 for j in range(nvars))
        return cls(nvars, {(beta, None): RationalFunction.from_poly(
            Polynomial.constant(nvars, 1))})

    @classmethod
    def directional_derivative(cls, vec: Sequence[Fraction]) -> "RationalOp":
        n = len(vec)
        terms = {}
        for i, v in enumerate(vec):
            if v:
                beta = tuple(1 if j == i else 0 for j in range(n))
                terms[(beta, None)] = RationalFunction.from_poly(
                    Polynomial.constant(n, v))
        return cls(n, terms)

    @classmethod
    def group_element(cls, w: Matrix) -> "RationalOp":
        n = len(w)
        return cls(n, {((0,) * n, w): RationalFunction.from_poly(
            Polynomial.constant(n, 1))})

    # -- algebra ----------------------------------------------------------

    def _merge(self, key, coeff: RationalFunction,
               into: dict[tuple[Beta, Matrix | None], RationalFunction]) -> None:
        existing = into.get(key)
        if existing is None:
            into[key] = coeff
        else:
            into[key] = existing.add(coeff)

    def add(self, other: "RationalOp") -> "RationalOp":
        terms = dict(self.terms)
        out: dict = dict(terms)
        for key, coeff in other.terms.items():
            self._merge(key, coeff, out)
        return RationalOp(self.nvars, out)

    def __add__(self, other: "RationalOp") -> "RationalOp":
        return self.add(other)

    def neg(self) -> "RationalOp":
        return RationalOp(self.nvars, {k: v.neg() for k, v in self.terms.items()})

    def __neg__(self) -> "RationalOp":
        return self.neg()

    def __sub__(self, other: "RationalOp") -> "RationalOp":
        return self.add(other.neg())

    def scale(self, c) -> "RationalOp":
        c = Fraction(c)
        return RationalOp(self.nvars, {k: v.scale(c) for k, v in self.terms.items()})

    def compose(self, other: "RationalOp") -> "RationalOp":
        """Normal-ordered product self o other."""
        out: dict = {}
        identity_beta = (0,) * self.nvars
        for (beta_a, w_a), c_a in self.terms.items():
            for (beta_b, w_b), c_b in other.terms.items():
                g = c_b if w_a is None else c_b.apply_group(w_a)
                if w_a is None:
                    push = {beta_b: Fraction(1)}
                    w_prod = w_b
                else:
                    push = _pushthrough(w_a, beta_b)
                    if w_b is None:
                        w_prod = w_a
                    else:
                        from .coxeter import mat_mul
                        w_prod = mat_mul(w_a, w_b)
                        if w_prod == _identity_like(w_prod):
                            w_prod = None
                if w_prod is not None and w_prod == _identity_like(w_prod):
                    w_prod = None
                if beta_a == identity_beta:
                    leibniz = [(identity_beta, 1, g)]
                else:
                    leibniz = []
                    for gamma in _sub_multi_indices(beta_a):
                        coeff = _multi_binomial(beta_a, gamma)
                        rest = tuple(b - g_ for b, g_ in zip(beta_a, gamma))
                        leibniz.append((gamma, coeff, g.derivative_multi(rest)))
                for gamma, binom, g_der in leibniz:
                    if g_der.is_zero():
                        continue
                    base = c_a.mul(g_der).scale(binom)
                    for delta, pcoef in push.items():
                        total_beta = tuple(x + y for x, y in zip(gamma, delta))
                        self._merge((total_beta, w_prod), base.scale(pcoef), out)
        return RationalOp(self.nvars, out)

    def __matmul__(self, other: "RationalOp") -> "RationalOp":
        return self.compose(other)

    def commutator(self, other: "RationalOp") -> "RationalOp":
        return self.compose(other) - other.compose(self)

    def power(self, k: int) -> "RationalOp":
        out = RationalOp.identity(self.nvars)
        for _ in range(k):
            out = out.compose(self)
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (isinstance(other, RationalOp) and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- structure --------------------------------------------------------

    def has_group_part(self) -> bool:
        return any(w is not None for _, w in self.terms)

    def drop_group_parts(self) -> "RationalOp":
        """Delete every term that carries a nontrivial group element."""
        out: dict = {}
        for (beta, w), coeff in self.terms.items():
            if w is None:
                self._merge((beta, None), coeff, out)
        return RationalOp(self.nvars, out)

    def restrict_group_parts(self) -> "RationalOp":
        """Send each term coeff d^beta w to coeff d^beta (forget w)."""
        out: dict = {}
        for (beta, _w), coeff in self.terms.items():
            self._merge((beta, None), coeff, out)
        return RationalOp(self.nvars, out)

    def order(self) -> int:
        return max((sum(beta) for beta, _ in self.terms), default=-1)

    def homogeneity(self) -> int | None:
        """Degree as a graded operator, or None if inhomogeneous."""
        degs = set()
        for (beta, _w), coeff in self.terms.items():
            h = coeff.homogeneity()
            if h is None:
                return None
            degs.add(h - sum(beta))
        if len(degs) > 1:
            return None
        return degs.pop() if degs else 0

    def apply(self, f: Polynomial) -> Polynomial:
        """Apply to a polynomial; denominators must clear in the total."""
        total = RationalFunction.zero(self.nvars)
        for (beta, w), coeff in self.terms.items():
            g = f if w is None else substitute_by_group(w, f)
            for i, k in enumerate(beta):
                for _ in range(k):
                    g = g.derivative(i)
            if g.is_zero():
                continue
            total = total.add(coeff.mul_poly(g))
        return total.poly()

    def symbol(self) -> Polynomial:
        """Top-order part as a polynomial in doubled variables (x, xi).

        Requires no group parts; the top-order coefficients must have
        cleared denominators.
        """
        if self.has_group_part():
            raise SymbolNotPolynomial("operator carries group-algebra terms")
        n = self.nvars
        if not self.terms:
            return Polynomial.zero(2 * n)
        top = self.order()
        out: dict = {}
        for (beta, _w), coeff in self.terms.items():
            if sum(beta) != top:
                continue
            if not coeff.is_polynomial():
                raise SymbolNotPolynomial(
                    f"top-order coefficient not polynomial: {coeff.render()}")
            for e, c in coeff.num.terms.items():
                key = tuple(e) + tuple(beta)
                out[key] = out.get(key, Fraction(0)) + c
        return Polynomial(2 * n, out)

    # -- rendering ----------------------------------------------------------

    def sorted_terms(self):
        def term_key(item):
            (beta, w), _ = item
            wkey = () if w is None else w
            return (-sum(beta), tuple(-b for b in beta), wkey)
        return sorted(self.terms.items(), key=term_key)

    def render(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = default_names(self.nvars)
        parts = []
        for (beta, w), coeff in self.sorted_terms():
            piece = coeff.render(names)
            if any(beta):
                ds = "".join(
                    f"∂{names[i]}^{k}" if k > 1 else f"∂{names[i]}"
                    for i, k in enumerate(beta) if k)
                piece = f"({piece})·{ds}" if ("+" in piece or "-" in piece[1:] or "/" in piece) else (
                    ds if piece == "1" else f"{piece}·{ds}")
            if w is not None:
                rows = ";".join(",".join(str(v) for v in row) for row in w)
                piece += f"·w[{rows}]"
            parts.append(piece)
        return "  +  ".join(parts)

    def __repr__(self):
        return f"RationalOp({self.render()})"


def _identity_like(w: Matrix) -> Matrix:
    n = len(w)
    return tuple(tuple(Fraction(1 if i == j else 0) for j in range(n))
                 for i in range(n))


# -- module-level operation aliases ---------------------------------------


def op_apply(op: RationalOp, f: Polynomial) -> Polynomial:
    return op.apply(f)


def op_compose(a: RationalOp, b: RationalOp) -> RationalOp:
    return a.compose(b)


def op_commutator(a: RationalOp, b: RationalOp) -> RationalOp:
    return a.commutator(b)


def symbol(op: RationalOp) -> Polynomial:
    return op.symbol()
