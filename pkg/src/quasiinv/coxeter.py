"""Exact rational realizations of finite real reflection groups.

Groups are realized on Q^n carrying a rational symmetric positive-definite
Gram matrix; group elements preserve that form exactly (for A_n in reduced
coordinates and for G2 the Gram matrix is necessarily non-identity, since
those groups admit no rational matrix model orthogonal for the standard
form).  Root covectors are normalized to primitive integer vectors with
positive leading entry; quantities that depend on that scaling are flagged
where they are reported.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .polynomials import Polynomial, primitive_covector

Matrix = tuple[tuple[Fraction, ...], ...]
Covector = tuple[int, ...]

ORDER_CAP_DEFAULT = 100_000


class GroupError(ValueError):
    pass


class UnsupportedType(GroupError):
    pass


class OrderCapExceeded(GroupError):
    pass


class DimensionMismatch(GroupError):
    pass


# -- matrix helpers -----------------------------------------------------


def mat(rows: Iterable[Iterable]) -> Matrix:
    return tuple(tuple(Fraction(v) for v in row) for row in rows)


def identity_matrix(n: int) -> Matrix:
    return mat([[1 if i == j else 0 for j in range(n)] for i in range(n)])


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    m = len(b[0])
    k = len(b)
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m))
        for i in range(n))


def mat_vec(a: Matrix, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in a)


def row_mat(v: Sequence[Fraction], a: Matrix) -> tuple[Fraction, ...]:
    return tuple(sum(v[i] * a[i][j] for i in range(len(v))) for j in range(len(a[0])))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def block_diag(blocks: Sequence[Matrix]) -> Matrix:
    n = sum(len(b) for b in blocks)
    rows = []
    offset = 0
    for b in blocks:
        for row in b:
            rows.append([Fraction(0)] * offset + list(row)
                        + [Fraction(0)] * (n - offset - len(row)))
        offset += len(b)
    return mat(rows)


def is_form_orthogonal(m: Matrix, gram: Matrix) -> bool:
    return mat_mul(mat_mul(transpose(m), gram), m) == gram


def gram_inverse(gram: Matrix) -> Matrix:
    from .linalg import invert_matrix
    return mat(invert_matrix(gram))


def orthogonal_reflection(alpha: Sequence, gram: Matrix) -> Matrix:
    """Reflection fixing {alpha(x)=0}, orthogonal for the given form."""
    n = len(gram)
    a = [Fraction(v) for v in alpha]
    ginv = gram_inverse(gram)
    normal = mat_vec(ginv, a)  # vector dual to the covector
    norm2 = sum(ai * ni for ai, ni in zip(a, normal))
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            v = Fraction(1 if i == j else 0) - 2 * normal[i] * a[j] / norm2
            row.append(v)
        rows.append(row)
    return mat(rows)


# -- core types ---------------------------------------------------------


@dataclass(frozen=True)
class Reflection:
    alpha: Covector            # primitive integer covector, leading entry > 0
    matrix: Matrix
    conjugacy_class: int = -1

    def form_polynomial(self) -> Polynomial:
        return Polynomial.linear_form(self.alpha)


class CoxeterGroup:
    """A finite reflection group with exact rational matrices.

    Elements are materialized lazily (breadth-first closure over generator
    products); `order` always holds the closed-form count for the type, and
    materialization verifies it.
    """

    def __init__(self, name: str, dim: int, gram: Matrix,
                 reflections: list[Reflection], generators: list[Matrix],
                 order: int, class_labels: list[str],
                 invariants: list[Polynomial], order_cap: int = ORDER_CAP_DEFAULT):
        self.name = name
        self.dim = dim
        self.gram = gram
        self.gram_inv = gram_inverse(gram)
        self.reflections = reflections
        self.generators = generators
        self.order = order
        self.class_labels = class_labels
        self._invariants = invariants
        self.order_cap = order_cap
        self._elements: list[Matrix] | None = None
        self._act_cache: dict = {}

    # -- elements -----------------------------------------------------

    @property
    def elements(self) -> list[Matrix]:
        if self._elements is None:
            if self.order > self.order_cap:
                raise OrderCapExceeded(
                    f"|W| = {self.order} exceeds cap {self.order_cap}")
            self._elements = self._materialize()
        return self._elements

    def _materialize(self) -> list[Matrix]:
        ident = identity_matrix(self.dim)
        seen = {ident}
        out = [ident]
        frontier = [ident]
        while frontier:
            new = []
            for g in frontier:
                for r in self.generators:
                    h = mat_mul(g, r)
                    if h not in seen:
                        seen.add(h)
                        out.append(h)
                        new.append(h)
            frontier = new
        if len(out) != self.order:
            raise GroupError(
                f"closure produced {len(out)} elements, expected {self.order}")
        return out

    def inverse(self, w: Matrix) -> Matrix:
        # w^-1 = G^-1 w^T G for form-orthogonal w.
        return mat_mul(mat_mul(self.gram_inv, transpose(w)), self.gram)

    # -- polynomial action ----------------------------------------------

    def act(self, w: Matrix, f: Polynomial) -> Polynomial:
        """(w . f)(x) = f(w^-1 x)."""
        if f.nvars != self.dim:
            raise DimensionMismatch(
                f"polynomial in {f.nvars} variables, group dim {self.dim}")
        inv = self.inverse(w)
        out = Polynomial.zero(self.dim)
        for exp, c in f.terms.items():
            out = out + self._act_monomial(inv, exp).scale(c)
        return out

    def _act_monomial(self, inv: Matrix, exp: tuple[int, ...]) -> Polynomial:
        key = (inv, exp)
        cached = self._act_cache.get(key)
        if cached is not None:
            return cached
        result = Polynomial.constant(self.dim, 1)
        for i, k in enumerate(exp):
            if k:
                result = result * self._row_power(inv, i, k)
        self._act_cache[key] = result
        return result

    def _row_power(self, inv: Matrix, i: int, k: int) -> Polynomial:
        key = (inv, i, k)
        cached = self._act_cache.get(key)
        if cached is not None:
            return cached
        if k == 1:
            result = Polynomial.linear_form(inv[i])
        else:
            result = self._row_power(inv, i, k - 1) * self._row_power(inv, i, 1)
        self._act_cache[key] = result
        return result

    def act_covector(self, w: Matrix, alpha: Sequence) -> tuple[Fraction, ...]:
        """Covector of (w . l) for the linear form l = alpha: alpha o w^-1."""
        return row_mat(tuple(Fraction(a) for a in alpha), self.inverse(w))

    # -- metric helpers -------------------------------------------------

    def dual_vector(self, covector: Sequence) -> tuple[Fraction, ...]:
        """Vector identified with a covector through the invariant form."""
        return mat_vec(self.gram_inv, [Fraction(c) for c in covector])

    def covector_norm2(self, alpha: Sequence) -> Fraction:
        a = [Fraction(v) for v in alpha]
        return sum(ai * di for ai, di in zip(a, self.dual_vector(a)))

    def variable_names(self) -> list[str]:
        from .polynomials import default_names
        return default_names(self.dim)

    def multiplicity_by_class(self, values: Sequence[int]) -> "MultiplicityFunction":
        return MultiplicityFunction(self, tuple(int(v) for v in values))

    def __repr__(self) -> str:
        return f"CoxeterGroup({self.name}, dim={self.dim}, order={self.order})"


@dataclass(frozen=True)
class MultiplicityFunction:
    """Conjugation-invariant nonnegative integer weight on reflections."""

    group: CoxeterGroup
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != len(self.group.class_labels):
            raise GroupError("one multiplicity per conjugacy class required")
        if any(v < 0 for v in self.values):
            raise GroupError("multiplicities must be nonnegative")

    @classmethod
    def constant(cls, group: CoxeterGroup, m: int) -> "MultiplicityFunction":
        return cls(group, tuple(int(m) for _ in group.class_labels))

    @classmethod
    def from_mapping(cls, group: CoxeterGroup, mapping: dict) -> "MultiplicityFunction":
        vals = []
        for i, label in enumerate(group.class_labels):
            if label in mapping:
                vals.append(int(mapping[label]))
            elif i in mapping:
                vals.append(int(mapping[i]))
            else:
                raise GroupError(f"no multiplicity for class {label!r}")
        return cls(group, tuple(vals))

    def of_reflection(self, s: Reflection) -> int:
        return self.values[s.conjugacy_class]

    def of_class(self, idx: int) -> int:
        return self.values[idx]

    def vanishing_order_degree(self) -> int:
        """d = sum over reflections of (2 m_s + 1)."""
        return sum(2 * self.of_reflection(s) + 1 for s in self.group.reflections)

    def discriminant_degree(self) -> int:
        """deg of the product of alpha_s^{m_s}."""
        return sum(self.of_reflection(s) for s in self.group.reflections)

    def describe(self) -> str:
        return ",".join(f"{label}={v}"
                        for label, v in zip(self.group.class_labels, self.values))


@dataclass(frozen=True)
class InvariantSet:
    generators: tuple[Polynomial, ...]
    degrees: tuple[int, ...]


# -- construction of the supported families ------------------------------


def _primitive_poly(p: Polynomial) -> Polynomial:
    """Scale to coprime integer coefficients, leading grlex coefficient > 0."""
    if p.is_zero():
        return p
    lcm = 1
    for c in p.terms.values():
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = {e: c * lcm for e, c in p.terms.items()}
    g = 0
    for c in ints.values():
        g = math.gcd(g, abs(c.numerator))
    scaled = {e: c / g for e, c in ints.items()}
    out = Polynomial(p.nvars, scaled)
    if out.leading_coefficient() < 0:
        out = -out
    return out


def _conjugacy_classes(reflections: list[Reflection], generators: list[Matrix],
                       gram: Matrix) -> list[list[int]]:
    index = {r.matrix: i for i, r in enumerate(reflections)}
    ginv = gram_inverse(gram)

    def inv(w: Matrix) -> Matrix:
        return mat_mul(mat_mul(ginv, transpose(w)), gram)

    parent = list(range(len(reflections)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> None:
        parent[find(i)] = find(j)

    changed = True
    while changed:
        changed = False
        for i, r in enumerate(reflections):
            for g in generators:
                conj = mat_mul(mat_mul(g, r.matrix), inv(g))
                j = index[conj]
                if find(i) != find(j):
                    union(i, j)
                    changed = True
    groups: dict[int, list[int]] = {}
    for i in range(len(reflections)):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda c: min(c))


def _finish_group(name: str, dim: int, gram: Matrix, alphas: list[Covector],
                  generators: list[Matrix], order: int,
                  invariants: list[Polynomial], labeler, order_cap: int) -> CoxeterGroup:
    base = [Reflection(alpha=a, matrix=orthogonal_reflection(a, gram))
            for a in alphas]
    classes = _conjugacy_classes(base, generators, gram)
    labels = [labeler(base[cls[0]].alpha, k) for k, cls in enumerate(classes)]
    if len(set(labels)) != len(labels):
        labels = [f"c{k}" for k in range(len(classes))]
    class_of = {}
    for k, cls in enumerate(classes):
        for i in cls:
            class_of[i] = k
    reflections = [Reflection(alpha=r.alpha, matrix=r.matrix,
                              conjugacy_class=class_of[i])
                   for i, r in enumerate(base)]
    return CoxeterGroup(name, dim, gram, reflections, generators, order,
                        labels, invariants, order_cap)


def _build_sign_flips(n: int, order_cap: int) -> CoxeterGroup:
    gram = identity_matrix(n)
    alphas = []
    for i in range(n):
        a = [0] * n
        a[i] = 1
        alphas.append(tuple(a))
    generators = [orthogonal_reflection(a, gram) for a in alphas]
    invariants = [Polynomial.monomial(tuple(2 if j == i else 0 for j in range(n)))
                  for i in range(n)]
    return _finish_group(f"(Z/2)^{n}", n, gram, alphas, generators, 2 ** n,
                         invariants, lambda a, k: f"c{k}", order_cap)


def _build_type_b(n: int, name: str, order_cap: int) -> CoxeterGroup:
    gram = identity_matrix(n)
    alphas: list[Covector] = []
    for i in range(n):
        a = [0] * n
        a[i] = 1
        alphas.append(tuple(a))
    for i, j in combinations(range(n), 2):
        for sign in (1, -1):
            a = [0] * n
            a[i], a[j] = 1, -sign
            alphas.append(tuple(a))
    gen_alphas = [tuple(1 if k == i else (-1 if k == i + 1 else 0) for k in range(n))
                  for i in range(n - 1)]
    gen_alphas.append(tuple(1 if k == n - 1 else 0 for k in range(n)))
    generators = [orthogonal_reflection(a, gram) for a in gen_alphas]
    # p_j = sum_i x_i^(2j)
    invariants = []
    for j in range(1, n + 1):
        terms = {}
        for i in range(n):
            e = [0] * n
            e[i] = 2 * j
            terms[tuple(e)] = Fraction(1)
        invariants.append(Polynomial(n, terms))

    def label(alpha: Covector, k: int) -> str:
        return "short" if sum(1 for v in alpha if v) == 1 else "long"

    order = (2 ** n) * math.factorial(n)
    return _finish_group(name, n, gram, alphas, generators, order,
                         invariants, label, order_cap)


def _build_type_d(n: int, order_cap: int) -> CoxeterGroup:
    if n < 2:
        raise UnsupportedType("D_n needs n >= 2")
    gram = identity_matrix(n)
    alphas: list[Covector] = []
    for i, j in combinations(range(n), 2):
        for sign in (1, -1):
            a = [0] * n
            a[i], a[j] = 1, -sign
            alphas.append(tuple(a))
    gen_alphas = [tuple(1 if k == i else (-1 if k == i + 1 else 0) for k in range(n))
                  for i in range(n - 1)]
    gen_alphas.append(tuple(1 if k in (n - 2, n - 1) else 0 for k in range(n)))
    generators = [orthogonal_reflection(a, gram) for a in gen_alphas]
    invariants = []
    for j in range(1, n):
        terms = {}
        for i in range(n):
            e = [0] * n
            e[i] = 2 * j
            terms[tuple(e)] = Fraction(1)
        invariants.append(Polynomial(n, terms))
    invariants.append(Polynomial.monomial(tuple(1 for _ in range(n))))
    invariants.sort(key=lambda p: p.degree())
    order = (2 ** (n - 1)) * math.factorial(n)
    return _finish_group(f"D{n}", n, gram, alphas, generators, order,
                         invariants, lambda a, k: "all", order_cap)


def _symmetric_embedding(n: int) -> tuple[list[list[Fraction]], Matrix]:
    """Reduced model of the sum-zero subspace of Q^(n+1).

    Returns (embedding rows: ambient coordinate i as linear form in the n
    reduced coordinates, Gram matrix of the chosen orthogonal basis
    u_j = e_1 + ... + e_j - j e_{j+1}).
    """
    basis = []
    for j in range(1, n + 1):
        u = [Fraction(0)] * (n + 1)
        for i in range(j):
            u[i] = Fraction(1)
        u[j] = Fraction(-j)
        basis.append(u)
    embed = [[basis[j][i] for j in range(n)] for i in range(n + 1)]
    gram = mat([[Fraction(j * (j + 1)) if j == k else Fraction(0)
                 for k in range(1, n + 1)] for j in range(1, n + 1)])
    return embed, gram


def _build_type_a(n: int, order_cap: int) -> CoxeterGroup:
    if n == 1:
        # Rank one: the sign flip on Q, matching the one-variable
        # conventions used throughout the operator layer.
        gram = identity_matrix(1)
        alphas = [(1,)]
        generators = [orthogonal_reflection((1,), gram)]
        invariants = [Polynomial.monomial((2,))]
        return _finish_group("A1", 1, gram, alphas, generators, 2,
                             invariants, lambda a, k: "all", order_cap)
    embed, gram = _symmetric_embedding(n)
    alphas = []
    for i, j in combinations(range(n + 1), 2):
        cov = tuple(embed[i][k] - embed[j][k] for k in range(n))
        prim, _ = primitive_covector(cov)
        alphas.append(prim)
    gen_alphas = []
    for i in range(n):
        cov = tuple(embed[i][k] - embed[i + 1][k] for k in range(n))
        prim, _ = primitive_covector(cov)
        gen_alphas.append(prim)
    generators = [orthogonal_reflection(a, gram) for a in gen_alphas]
    ambient_forms = [Polynomial.linear_form(row) for row in embed]
    invariants = []
    for k in range(2, n + 2):
        p = Polynomial.zero(n)
        for form in ambient_forms:
            p = p + form ** k
        invariants.append(_primitive_poly(p))
    order = math.factorial(n + 1)
    return _finish_group(f"A{n}", n, gram, alphas, generators, order,
                         invariants, lambda a, k: "all", order_cap)


def _build_g2(order_cap: int) -> CoxeterGroup:
    embed, gram = _symmetric_embedding(2)
    short: list[Covector] = []
    for i, j in combinations(range(3), 2):
        cov = tuple(embed[i][k] - embed[j][k] for k in range(2))
        short.append(primitive_covector(cov)[0])
    long_: list[Covector] = []
    for i in range(3):
        cov = [2 * embed[i][k] for k in range(2)]
        for j in range(3):
            if j != i:
                cov = [c - embed[j][k] for k, c in enumerate(cov)]
        long_.append(primitive_covector(tuple(cov))[0])
    alphas = short + long_
    generators = [orthogonal_reflection(short[0], gram),
                  orthogonal_reflection(long_[0], gram)]
    q2 = _primitive_poly(Polynomial(2, {(2, 0): gram[0][0], (0, 2): gram[1][1]}))
    delta_short = Polynomial.constant(2, 1)
    for a in short:
        delta_short = delta_short * Polynomial.linear_form(a)
    q6 = _primitive_poly(delta_short * delta_short)
    short_set = set(short)

    def label(alpha: Covector, k: int) -> str:
        return "short" if alpha in short_set else "long"

    return _finish_group("G2", 2, gram, alphas, generators, 12,
                         [q2, q6], label, order_cap)


def _build_product(factors: list[CoxeterGroup], name: str, order_cap: int) -> CoxeterGroup:
    dims = [g.dim for g in factors]
    n = sum(dims)
    gram = block_diag([g.gram for g in factors])

    def embed_matrix(m: Matrix, offset: int, dim: int) -> Matrix:
        rows = []
        for i in range(n):
            row = [Fraction(1 if i == j else 0) for j in range(n)]
            rows.append(row)
        for i in range(dim):
            for j in range(dim):
                rows[offset + i][offset + j] = m[i][j]
        return mat(rows)

    def embed_cov(a: Covector, offset: int) -> Covector:
        out = [0] * n
        for i, v in enumerate(a):
            out[offset + i] = v
        return tuple(out)

    def embed_poly(p: Polynomial, offset: int) -> Polynomial:
        terms = {}
        for e, c in p.terms.items():
            e2 = [0] * n
            for i, v in enumerate(e):
                e2[offset + i] = v
            terms[tuple(e2)] = c
        return Polynomial(n, terms)

    reflections: list[Reflection] = []
    labels: list[str] = []
    generators: list[Matrix] = []
    invariants: list[Polynomial] = []
    offset = 0
    for fi, g in enumerate(factors):
        base = len(labels)
        for lbl in g.class_labels:
            labels.append(f"f{fi}.{lbl}" if len(factors) > 1 else lbl)
        for r in g.reflections:
            reflections.append(Reflection(
                alpha=embed_cov(r.alpha, offset),
                matrix=embed_matrix(r.matrix, offset, g.dim),
                conjugacy_class=base + r.conjugacy_class))
        generators.extend(embed_matrix(m, offset, g.dim) for m in g.generators)
        invariants.extend(embed_poly(p, offset) for p in g._invariants)
        offset += g.dim
    order = math.prod(g.order for g in factors)
    return CoxeterGroup(name, n, gram, reflections, generators, order,
                        labels, invariants, order_cap)


_LABEL_RE = re.compile(r"^([ABCDabcd])(\d+)$")
_Z2_RE = re.compile(r"^\(Z/2\)(?:\^(\d+))?$", re.IGNORECASE)


def _build_single(label: str, order_cap: int) -> CoxeterGroup:
    label = label.strip()
    if label.upper() == "G2":
        return _build_g2(order_cap)
    m = _Z2_RE.match(label)
    if m:
        return _build_sign_flips(int(m.group(1) or 1), order_cap)
    m = _LABEL_RE.match(label)
    if m:
        family, rank = m.group(1).upper(), int(m.group(2))
        if rank < 1:
            raise UnsupportedType(f"rank must be positive: {label}")
        if family == "A":
            return _build_type_a(rank, order_cap)
        if family in ("B", "C"):
            if rank == 1:
                return _build_type_a(1, order_cap)
            return _build_type_b(rank, label.upper(), order_cap)
        if family == "D":
            return _build_type_d(rank, order_cap)
    raise UnsupportedType(
        f"unsupported group label {label!r}; supported: A_n, B_n/C_n, D_n, "
        "G2, (Z/2)^n, and x-products of these (H3, H4, and I2(p) for "
        "p not in {2,3,4,6} have no rational matrix model)")


def build_group(spec: str, order_cap: int = ORDER_CAP_DEFAULT) -> CoxeterGroup:
    """Build a group from a label like "B6", "(Z/2)^2", or "B2xA1"."""
    parts = [p for p in spec.split("x") if p.strip()]
    if not parts:
        raise UnsupportedType("empty group label")
    factors = [_build_single(p, order_cap) for p in parts]
    if len(factors) == 1:
        return factors[0]
    return _build_product(factors, spec.strip(), order_cap)


def invariant_generators(group: CoxeterGroup) -> InvariantSet:
    """Basic homogeneous invariants with the classical degrees for the type.

    Invariance is asserted against the generators; algebraic independence
    is checked through the Jacobian rank at a rational sample point.
    """
    gens = list(group._invariants)
    gens.sort(key=lambda p: p.degree())
    for p in gens:
        for g in group.generators:
            if group.act(g, p) != p:
                raise GroupError("invariant generator not fixed by the group")
    n = group.dim
    jacobian_rows = [[p.derivative(j) for j in range(n)] for p in gens]
    from .linalg import det_rational
    for attempt in range(1, 6):
        point = [Fraction(attempt * (i + 2) + i * i + 1) for i in range(n)]
        jac = [[entry.evaluate(point) for entry in row] for row in jacobian_rows]
        if det_rational(jac):
            break
    else:
        raise GroupError("invariant generators look algebraically dependent")
    return InvariantSet(tuple(gens), tuple(p.degree() for p in gens))


def act(group: CoxeterGroup, w: Matrix, f: Polynomial) -> Polynomial:
    """Module-level alias for the group action on polynomials."""
    return group.act(w, f)
