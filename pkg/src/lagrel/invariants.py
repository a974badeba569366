"""Graded invariant rings of Lagrangian equivalence relations.

Because every component of a relation is a linear subspace of V x V, the
invariant condition f(x) = f(y) is homogeneous-degree preserving, so the
(possibly non-Noetherian) ring C[V]^R is computed one graded slice at a
time: the constraints from each component are expanded symbolically over Q
and intersected as exact nullspaces.  Bases are normalized in graded
lexicographic order for reproducibility.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, count
from math import lcm
from typing import Iterable, Sequence

from .exact_linalg import (
    Matrix,
    Rational,
    Subspace,
    Vector,
    _echelon,
    _int_rows,
    _nullspace,
    _pivot,
    _rank,
    as_vector,
    format_rational,
    quotient,
    rational,
)
from .linear_relations import Isometry, diagonal
from .relation_monoid import LagrangianEquivalenceRelation


def monomials(num_vars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of the given total degree, in descending lex order."""
    if degree == 0:
        return ((0,) * num_vars,)
    if num_vars == 0:
        return ()
    out = []
    for combo in combinations_with_replacement(range(num_vars), degree):
        exp = [0] * num_vars
        for i in combo:
            exp[i] += 1
        out.append(tuple(exp))
    return tuple(sorted(out, reverse=True))


class Polynomial:
    """Sparse exact polynomial in a fixed number of variables."""

    __slots__ = ("num_vars", "terms")

    def __init__(self, num_vars: int, terms: dict | None = None):
        clean = {}
        for exp, coeff in (terms or {}).items():
            c = rational(coeff)
            if len(exp) != num_vars:
                raise ValueError("exponent length disagrees with variable count")
            if c:
                clean[tuple(exp)] = c
        object.__setattr__(self, "num_vars", num_vars)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def zero(cls, num_vars: int) -> "Polynomial":
        return cls(num_vars)

    @classmethod
    def one(cls, num_vars: int) -> "Polynomial":
        return cls(num_vars, {(0,) * num_vars: 1})

    @classmethod
    def monomial(cls, num_vars: int, exponents: Sequence[int], coeff: Rational = 1) -> "Polynomial":
        return cls(num_vars, {tuple(exponents): coeff})

    @classmethod
    def linear_form(cls, coeffs: Sequence[Rational]) -> "Polynomial":
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            cc = rational(c)
            if cc:
                exp = [0] * n
                exp[i] = 1
                terms[tuple(exp)] = cc
        return cls(n, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def __add__(self, other: "Polynomial") -> "Polynomial":
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return Polynomial(self.num_vars, terms)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.num_vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                terms[key] = terms.get(key, Fraction(0)) + c1 * c2
        return Polynomial(self.num_vars, terms)

    def scale(self, c: Rational) -> "Polynomial":
        cc = rational(c)
        return Polynomial(self.num_vars, {e: cc * v for e, v in self.terms.items()})

    def evaluate(self, point: Sequence[Rational]) -> Fraction:
        p = as_vector(point)
        if len(p) != self.num_vars:
            raise ValueError("point length disagrees with variable count")
        total = Fraction(0)
        for e, c in self.terms.items():
            val = c
            for x, k in zip(p, e):
                if k:
                    val *= x ** k
            total += val
        return total

    def compose_linear(self, m: Matrix) -> "Polynomial":
        """Substitute x_i = sum_j m[i][j] t_j; result lives in m.cols variables."""
        if m.rows != self.num_vars:
            raise ValueError("substitution matrix has the wrong number of rows")
        p = m.cols
        cache: dict[tuple[int, ...], dict[tuple[int, ...], Fraction]] = {
            (0,) * self.num_vars: {(0,) * p: Fraction(1)}
        }

        def expand(exp: tuple[int, ...]) -> dict:
            found = cache.get(exp)
            if found is not None:
                return found
            i = next(k for k, v in enumerate(exp) if v)
            prev_exp = tuple(v - 1 if k == i else v for k, v in enumerate(exp))
            prev = expand(prev_exp)
            acc: dict = {}
            row = m.entries[i]
            for texp, c in prev.items():
                for j in range(p):
                    w = row[j]
                    if w:
                        key = tuple(v + 1 if k == j else v for k, v in enumerate(texp))
                        acc[key] = acc.get(key, Fraction(0)) + c * w
            cache[exp] = acc
            return acc

        terms: dict = {}
        for e, c in self.terms.items():
            for texp, w in expand(e).items():
                terms[texp] = terms.get(texp, Fraction(0)) + c * w
        return Polynomial(p, terms)

    def leading_monomial(self) -> tuple[int, ...]:
        """Largest monomial in graded lexicographic order."""
        if not self.terms:
            raise ValueError("the zero polynomial has no leading monomial")
        return max(self.terms, key=lambda e: (sum(e), e))

    def coefficient_row(self, index: dict[tuple[int, ...], int], width: int) -> list[Fraction]:
        row = [Fraction(0)] * width
        for e, c in self.terms.items():
            row[index[e]] = c
        return row

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.num_vars == other.num_vars
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.num_vars, tuple(sorted(self.terms.items()))))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms, key=lambda e: (sum(e), e), reverse=True):
            c = self.terms[e]
            factors = [f"x{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k]
            body = "*".join(factors) if factors else "1"
            if c == 1 and factors:
                bits.append(body)
            elif c == -1 and factors:
                bits.append(f"-{body}")
            else:
                bits.append(f"{c}*{body}" if factors else f"{c}")
        out = bits[0]
        for b in bits[1:]:
            out += f" - {b[1:]}" if b.startswith("-") else f" + {b}"
        return out

    def __repr__(self) -> str:
        return f"Polynomial({self})"


def polynomial_to_payload(poly: Polynomial) -> dict[str, str]:
    """{exponent vector: "p/q"} map with comma-joined exponent keys."""
    return {
        ",".join(str(k) for k in e): format_rational(c)
        for e, c in sorted(poly.terms.items(), key=lambda item: (sum(item[0]), item[0]), reverse=True)
    }


def polynomial_from_payload(payload: dict, num_vars: int) -> Polynomial:
    terms = {}
    for key, val in payload.items():
        exp = tuple(int(k) for k in key.split(",")) if key else ()
        terms[exp] = rational(val)
    return Polynomial(num_vars, terms)


# ---------------------------------------------------------------------------
# Graded invariant solver.
#
# For one component L with basis rows (x_k | y_k), the points of L are
# (X^T t, Y^T t), so f is constant on L-classes iff f(X^T t) - f(Y^T t)
# vanishes identically in t.  The coefficients of that polynomial in t are
# linear constraints on the coefficients of f; all components contribute and
# the intersection of their nullspaces is computed incrementally.
# ---------------------------------------------------------------------------


def _int_substitution(m_rows: Sequence[Sequence[int]], degree: int) -> dict:
    """exp -> {t-exp: int coeff} for x^exp composed with the integer matrix."""
    n = len(m_rows)
    p = len(m_rows[0]) if n else 0
    cache: dict[tuple[int, ...], dict[tuple[int, ...], int]] = {
        (0,) * n: {(0,) * p: 1}
    }
    for deg in range(1, degree + 1):
        for e in monomials(n, deg):
            i = next(k for k, v in enumerate(e) if v)
            prev = cache[tuple(v - 1 if k == i else v for k, v in enumerate(e))]
            acc: dict[tuple[int, ...], int] = {}
            row = m_rows[i]
            for texp, c in prev.items():
                for j in range(p):
                    w = row[j]
                    if w:
                        key = tuple(v + 1 if k == j else v for k, v in enumerate(texp))
                        acc[key] = acc.get(key, 0) + c * w
            cache[e] = {k: v for k, v in acc.items() if v}
    return {e: cache[e] for e in monomials(n, degree)}


def _intersect_constraints(basis_rows: tuple, delta_cols: dict, mons: tuple,
                           t_vars: int, degree: int) -> tuple:
    """Intersect the span of basis_rows with the nullspace of the constraints."""
    k = len(basis_rows)
    if k == 0:
        return basis_rows
    t_mons = monomials(t_vars, degree)
    t_index = {e: i for i, e in enumerate(t_mons)}
    rows = [[0] * k for _ in t_mons]
    for j, brow in enumerate(basis_rows):
        for e_idx, coeff in enumerate(brow):
            if coeff:
                for texp, w in delta_cols.get(mons[e_idx], {}).items():
                    rows[t_index[texp]][j] += coeff * w
    kernel = _nullspace([tuple(r) for r in rows], k)
    new_rows = []
    for y in kernel:
        new_rows.append(
            tuple(sum(y[j] * basis_rows[j][i] for j in range(k)) for i in range(len(mons)))
        )
    return _echelon(new_rows)


def _rows_to_polynomials(rows: Iterable[Sequence[int]], mons: tuple, num_vars: int) -> list[Polynomial]:
    out = []
    for r in rows:
        pivot = r[_pivot(r)]
        terms = {mons[i]: Fraction(x, pivot) for i, x in enumerate(r) if x}
        out.append(Polynomial(num_vars, terms))
    return out


def invariant_space(relation: LagrangianEquivalenceRelation, degree: int) -> list[Polynomial]:
    """Basis of the homogeneous degree-d slice of the invariant ring of R."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    n = relation.n
    if degree == 0:
        return [Polynomial.one(n)]
    mons = monomials(n, degree)
    basis = tuple(tuple(1 if i == j else 0 for i in range(len(mons))) for j in range(len(mons)))
    unit_space = diagonal(relation.form).space
    for comp in relation.components:
        if comp.space == unit_space or not basis:
            continue
        d = comp.space.dim
        m1 = [[comp.space.rows[k][i] for k in range(d)] for i in range(n)]
        m2 = [[comp.space.rows[k][n + i] for k in range(d)] for i in range(n)]
        sub1 = _int_substitution(m1, degree)
        sub2 = _int_substitution(m2, degree)
        delta = {}
        for e in mons:
            col = dict(sub1[e])
            for texp, w in sub2[e].items():
                col[texp] = col.get(texp, 0) - w
            delta[e] = {k: v for k, v in col.items() if v}
        basis = _intersect_constraints(basis, delta, mons, d, degree)
    return _rows_to_polynomials(basis, mons, n)


def invariant_dimensions(relation: LagrangianEquivalenceRelation, max_degree: int) -> list[int]:
    return [len(invariant_space(relation, d)) for d in range(max_degree + 1)]


class GradedInvariantBasis:
    """Per-degree bases of homogeneous invariants of one relation.

    Only the graded slices are ever materialized; the full ring can be
    non-Noetherian.  The degree-0 basis is always the constant 1.
    """

    __slots__ = ("relation", "bases")

    def __init__(self, relation: LagrangianEquivalenceRelation, max_degree: int):
        bases = tuple(invariant_space(relation, d) for d in range(max_degree + 1))
        assert bases[0] == [Polynomial.one(relation.n)]
        object.__setattr__(self, "relation", relation)
        object.__setattr__(self, "bases", bases)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("GradedInvariantBasis is immutable")

    @property
    def max_degree(self) -> int:
        return len(self.bases) - 1

    def basis(self, degree: int) -> list[Polynomial]:
        return list(self.bases[degree])

    def dimension(self, degree: int) -> int:
        return len(self.bases[degree])

    def dimensions(self) -> list[int]:
        return [len(b) for b in self.bases]

    def verify(self) -> bool:
        """Recheck symbolically that every basis element is invariant on every component."""
        n = self.relation.n
        for comp in self.relation.components:
            d = comp.space.dim
            m1 = Matrix([[comp.space.rows[k][i] for k in range(d)] for i in range(n)], cols=d)
            m2 = Matrix([[comp.space.rows[k][n + i] for k in range(d)] for i in range(n)], cols=d)
            for basis in self.bases:
                for f in basis:
                    if f.compose_linear(m1) != f.compose_linear(m2):
                        return False
        return True


def weyl_invariant_space(group: Sequence[Isometry], degree: int) -> list[Polynomial]:
    """Nullspace of the (f o s - f) constraints over the given group elements."""
    if not group:
        raise ValueError("need at least one isometry to infer the space")
    n = group[0].form.dim
    if degree == 0:
        return [Polynomial.one(n)]
    mons = monomials(n, degree)
    basis = tuple(tuple(1 if i == j else 0 for i in range(len(mons))) for j in range(len(mons)))
    for s in group:
        if s.is_identity() or not basis:
            continue
        scale = 1
        for row in s.matrix.entries:
            for x in row:
                scale = lcm(scale, x.denominator)
        m_int = [[int(x * scale) for x in row] for row in s.matrix.entries]
        sub = _int_substitution(m_int, degree)
        factor = scale ** degree
        delta = {}
        for e in mons:
            col = dict(sub[e])
            col[e] = col.get(e, 0) - factor
            delta[e] = {k: v for k, v in col.items() if v}
        basis = _intersect_constraints(basis, delta, mons, n, degree)
    return _rows_to_polynomials(basis, mons, n)


def reynolds_invariant_space(group: Sequence[Isometry], degree: int) -> list[Polynomial]:
    """Span of the group averages of all monomials (cross-check oracle)."""
    if not group:
        raise ValueError("need at least one isometry to infer the space")
    n = group[0].form.dim
    mons = monomials(n, degree)
    if degree == 0:
        return [Polynomial.one(n)]
    averages = []
    order = len(group)
    for e in mons:
        mono = Polynomial.monomial(n, e)
        total = Polynomial.zero(n)
        for s in group:
            total = total + mono.compose_linear(s.matrix)
        averages.append(total.scale(Fraction(1, order)))
    index = {e: i for i, e in enumerate(mons)}
    rows = [p.coefficient_row(index, len(mons)) for p in averages if not p.is_zero()]
    ech = _echelon(_int_rows(rows))
    return _rows_to_polynomials(ech, mons, n)


def span_rows(polys: Sequence[Polynomial], degree: int) -> tuple:
    """Canonical integer rows of the coefficient span of homogeneous polynomials."""
    if not polys:
        return ()
    n = polys[0].num_vars
    mons = monomials(n, degree)
    index = {e: i for i, e in enumerate(mons)}
    rows = [p.coefficient_row(index, len(mons)) for p in polys]
    return _echelon(_int_rows(rows))


def contains_polynomial(basis: Sequence[Polynomial], poly: Polynomial, degree: int) -> bool:
    """Exact membership of poly in the span of a homogeneous basis."""
    if poly.is_zero():
        return True
    rows = span_rows(basis, degree)
    with_poly = span_rows(list(basis) + [poly], degree)
    return len(rows) == len(with_poly)


# ---------------------------------------------------------------------------
# Discriminant polynomial, restriction, separation, products.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiscriminantPolynomial:
    polynomial: Polynomial
    degree: int
    hyperplanes: tuple[Subspace, ...]


def discriminant_polynomial(relation: LagrangianEquivalenceRelation) -> DiscriminantPolynomial:
    """Product of the linear forms cutting the W-orbit of discriminant hyperplanes."""
    ok, witness = relation.is_one_regular()
    if not ok or witness is None:
        raise ValueError("relation is not 1-regular with a codimension-1 witness")
    n = relation.n
    t = Polynomial.one(n)
    orbit = relation.discriminant()
    for h in orbit:
        normal = _nullspace(h.rows, n)
        assert len(normal) == 1
        t = t * Polynomial.linear_form(normal[0])
    lead = t.terms[t.leading_monomial()]
    t = t.scale(Fraction(1, 1) / lead)
    for s in relation.weyl_group:
        assert t.compose_linear(s.matrix) == t, "discriminant polynomial is not W-invariant"
    basis = invariant_space(relation, len(orbit))
    assert contains_polynomial(basis, t, len(orbit)), (
        "discriminant polynomial is not an invariant of the relation"
    )
    return DiscriminantPolynomial(t, len(orbit), orbit)


def restriction_map(relation: LagrangianEquivalenceRelation, v0: Subspace, degree: int) -> Matrix:
    """Matrix of restrict-to-V0-then-descend between the chosen graded bases."""
    reduced = relation.reduce(v0)
    q = quotient(relation.form, v0)
    source = invariant_space(relation, degree)
    target = invariant_space(reduced, degree)
    t_mons = monomials(q.dim, degree)
    t_index = {e: i for i, e in enumerate(t_mons)}
    target_rows = [p.coefficient_row(t_index, len(t_mons)) for p in target]
    cols = []
    for f in source:
        image = f.compose_linear(q.section)
        vec = image.coefficient_row(t_index, len(t_mons))
        cols.append(_solve_in_span(target_rows, vec))
    if not source:
        return Matrix(((),) * len(target), cols=0) if target else Matrix((), cols=0)
    if not target:
        return Matrix((), cols=len(source))
    return Matrix(zip(*cols), cols=len(source))


def _solve_in_span(basis_rows: list[list[Fraction]], vec: list[Fraction]) -> list[Fraction]:
    """Coordinates of vec in the span of basis_rows (raises if outside)."""
    if not basis_rows:
        if any(vec):
            raise ValueError("vector outside the span")
        return []
    width = len(vec)
    k = len(basis_rows)
    work = [list(basis_rows[j]) + [Fraction(1 if t == j else 0) for t in range(k)] for j in range(k)]
    target = list(vec) + [Fraction(0)] * k
    pivots = []
    for col in range(width):
        piv = next((r for r in range(len(pivots), k) if work[r][col]), None)
        if piv is None:
            continue
        work[len(pivots)], work[piv] = work[piv], work[len(pivots)]
        r0 = len(pivots)
        p = work[r0][col]
        work[r0] = [x / p for x in work[r0]]
        for r in range(k):
            if r != r0 and work[r][col]:
                a = work[r][col]
                work[r] = [x - a * y for x, y in zip(work[r], work[r0])]
        if target[col]:
            a = target[col]
            target = [x - a * y for x, y in zip(target, work[r0])]
        pivots.append(col)
    if any(target[:width]):
        raise ValueError("vector outside the span")
    return [-x for x in target[width:]]


@dataclass(frozen=True)
class Separation:
    status: str  # "equivalent" | "separated" | "exhausted"
    degree: int | None = None
    polynomial: Polynomial | None = None
    values: tuple[Fraction, Fraction] | None = None


def separate(relation: LagrangianEquivalenceRelation, x: Sequence[Rational],
             y: Sequence[Rational], d_max: int = 6) -> Separation:
    """Search for an invariant separating x from y, degree by degree.

    For related points all basis invariants are checked to agree (and a
    disagreement would be a soundness bug, so it raises).  For unrelated
    points the search is a semi-decision bounded by d_max.
    """
    xv = as_vector(x)
    yv = as_vector(y)
    related = relation.membership(xv, yv)
    if related:
        for d in range(1, d_max + 1):
            for f in invariant_space(relation, d):
                if f.evaluate(xv) != f.evaluate(yv):
                    raise RuntimeError("an invariant separates two related points")
        return Separation("equivalent")
    for d in range(1, d_max + 1):
        for f in invariant_space(relation, d):
            fx = f.evaluate(xv)
            fy = f.evaluate(yv)
            if fx != fy:
                return Separation("separated", d, f, (fx, fy))
    return Separation("exhausted")


def product_invariant_check(a: LagrangianEquivalenceRelation,
                            b: LagrangianEquivalenceRelation, degree: int) -> bool:
    """dim Inv_d(a x b) == sum over i+j=d of dim Inv_i(a) * dim Inv_j(b)."""
    prod = a.product(b)
    left = len(invariant_space(prod, degree))
    right = sum(
        len(invariant_space(a, i)) * len(invariant_space(b, degree - i))
        for i in range(degree + 1)
    )
    return left == right


def rational_point_stream(num_vars: int) -> Iterable[Vector]:
    """Deterministic stream of rational points covering growing integer boxes."""
    if num_vars == 0:
        yield ()
        return
    for radius in count(0):
        for point in _box_points(num_vars, radius):
            yield point


def _box_points(num_vars: int, radius: int) -> Iterable[Vector]:
    values = list(range(-radius, radius + 1))
    def rec(prefix: list) -> Iterable[Vector]:
        if len(prefix) == num_vars:
            if max((abs(x) for x in prefix), default=0) == radius:
                yield tuple(Fraction(x) for x in prefix)
            return
        for v in values:
            yield from rec(prefix + [v])
    yield from rec([])


def independent_evaluation_points(polys: Sequence[Polynomial],
                                  points: Iterable[Vector] | None = None) -> list[Vector]:
    """Points making the evaluation matrix of a linearly independent family invertible."""
    k = len(polys)
    if k == 0:
        return []
    if points is None:
        points = rational_point_stream(polys[0].num_vars)
    chosen: list[Vector] = []
    rows: list[list[Fraction]] = []
    for pt in points:
        cand = rows + [[f.evaluate(pt) for f in polys]]
        if _rank(_int_rows(cand)) == len(cand):
            rows = cand
            chosen.append(pt)
            if len(chosen) == k:
                return chosen
    raise ValueError("point stream exhausted before finding an invertible evaluation matrix")
