"""Exact rational linear algebra: canonical subspaces, forms, quotients.

Everything is computed over Q.  Fractions appear at the interfaces; inside,
subspaces are held as primitive-integer reduced-row-echelon rows so that two
equal subspaces always have identical (and identically hashable)
representations, no matter how they were constructed.  No floating point
anywhere.
"""

from __future__ import annotations

from bisect import bisect
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence, Union

Rational = Union[int, str, Fraction]
Vector = tuple[Fraction, ...]
IntRow = tuple[int, ...]


def rational(value: Rational) -> Fraction:
    """Coerce an int, Fraction or "p/q" string to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not an exact rational: {value!r}")


def format_rational(value: Rational) -> str:
    """Serialize a rational as "p/q" with q > 0 and gcd(p, q) = 1."""
    q = rational(value)
    return f"{q.numerator}/{q.denominator}"


def as_vector(items: Iterable[Rational]) -> Vector:
    return tuple(rational(x) for x in items)


def vector_to_payload(vec: Sequence[Rational]) -> list[str]:
    return [format_rational(x) for x in vec]


def vector_from_payload(payload: Sequence[Rational]) -> Vector:
    return as_vector(payload)


# ---------------------------------------------------------------------------
# Integer row kernel.
#
# A subspace basis is a tuple of "primitive" integer rows: content 1, first
# nonzero entry positive, in fully reduced echelon order.  This is the image
# of the unique rational RREF basis under clearing denominators, hence
# canonical for the row space.
# ---------------------------------------------------------------------------


def _primitive(row: Sequence[int]) -> IntRow | None:
    """Divide out the content and normalize the sign; None for a zero row."""
    g = 0
    lead_negative = False
    seen = False
    for x in row:
        if x:
            if not seen:
                seen = True
                lead_negative = x < 0
            g = gcd(g, x if x > 0 else -x)
    if not seen:
        return None
    if lead_negative:
        g = -g
    return tuple(x // g for x in row)


def _int_rows(vectors: Iterable[Sequence[Rational]]) -> list[list[int]]:
    """Clear denominators row by row (row spaces are scale invariant)."""
    out = []
    for vec in vectors:
        fr = [rational(x) for x in vec]
        m = 1
        for x in fr:
            m = lcm(m, x.denominator)
        out.append([int(x * m) for x in fr])
    return out


def _echelon(rows: Iterable[Sequence[int]]) -> tuple[IntRow, ...]:
    """Canonical reduced echelon basis (primitive rows) of the row space."""
    basis: list[list[int]] = []
    pivots: list[int] = []
    for raw in rows:
        row = list(raw)
        for i, c in enumerate(pivots):
            a = row[c]
            if a:
                p = basis[i][c]
                brow = basis[i]
                row = [x * p - y * a for x, y in zip(row, brow)]
        prim = _primitive(row)
        if prim is None:
            continue
        c = next(j for j, x in enumerate(prim) if x)
        pos = bisect(pivots, c)
        pivots.insert(pos, c)
        basis.insert(pos, list(prim))
        for i, brow in enumerate(basis):
            if i == pos:
                continue
            a = brow[c]
            if a:
                p = prim[c]
                reduced = _primitive([x * p - y * a for x, y in zip(brow, prim)])
                assert reduced is not None
                basis[i] = list(reduced)
    return tuple(tuple(r) for r in basis)


def _rank(rows: Iterable[Sequence[int]]) -> int:
    return len(_echelon(rows))


def _pivot(row: Sequence[int]) -> int:
    return next(j for j, x in enumerate(row) if x)


def _residual(row: Sequence[int], basis: Sequence[IntRow]) -> IntRow | None:
    """Primitive residual of an integer row modulo an echelon basis."""
    out = list(row)
    for brow in basis:
        c = _pivot(brow)
        a = out[c]
        if a:
            p = brow[c]
            out = [x * p - y * a for x, y in zip(out, brow)]
    return _primitive(out)


def _unit_row(n: int, j: int) -> IntRow:
    return tuple(1 if i == j else 0 for i in range(n))


def _nullspace(rows: Iterable[Sequence[int]], ncols: int) -> tuple[IntRow, ...]:
    """Canonical basis of {x : M x = 0} for the matrix with the given rows."""
    ech = _echelon(rows)
    pivots = [_pivot(r) for r in ech]
    pivset = set(pivots)
    out = []
    for j in range(ncols):
        if j in pivset:
            continue
        vec = [Fraction(0)] * ncols
        vec[j] = Fraction(1)
        for r, c in zip(ech, pivots):
            if r[j]:
                vec[c] = Fraction(-r[j], r[c])
        out.append(vec)
    return _echelon(_int_rows(out))


# ---------------------------------------------------------------------------
# Matrices over Q.
# ---------------------------------------------------------------------------


class Matrix:
    """Immutable exact matrix of Fractions (row-major)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable[Rational]], cols: int | None = None):
        ents = tuple(tuple(rational(x) for x in row) for row in entries)
        if ents:
            width = len(ents[0])
            if any(len(r) != width for r in ents):
                raise ValueError("ragged matrix")
            if cols is not None and cols != width:
                raise ValueError("explicit cols disagrees with entries")
        else:
            if cols is None:
                raise ValueError("empty matrix needs explicit cols")
            width = cols
        object.__setattr__(self, "entries", ents)
        object.__setattr__(self, "rows", len(ents))
        object.__setattr__(self, "cols", width)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("Matrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(((1 if i == j else 0 for j in range(n)) for i in range(n)), cols=n)

    @classmethod
    def from_int_rows(cls, rows: Iterable[Sequence[int]], cols: int) -> "Matrix":
        return cls(rows, cols=cols)

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "Matrix":
        return Matrix(
            ((self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)),
            cols=self.rows,
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("matrix shape mismatch")
        cols = other.cols
        out = []
        for r in self.entries:
            out.append(
                tuple(
                    sum((r[k] * other.entries[k][j] for k in range(self.cols)), Fraction(0))
                    for j in range(cols)
                )
            )
        return Matrix(out, cols=cols)

    def apply(self, vec: Sequence[Rational]) -> Vector:
        v = as_vector(vec)
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum((r[j] * v[j] for j in range(self.cols)), Fraction(0)) for r in self.entries)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self.entries[i][j] == self.entries[j][i]
            for i in range(self.rows)
            for j in range(i + 1, self.cols)
        )

    def rank(self) -> int:
        return _rank(_int_rows(self.entries))

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("only square matrices invert")
        n = self.rows
        work = [list(self.entries[i]) + [Fraction(1 if j == i else 0) for j in range(n)] for i in range(n)]
        for col in range(n):
            piv = next((r for r in range(col, n) if work[r][col]), None)
            if piv is None:
                raise ValueError("singular matrix")
            work[col], work[piv] = work[piv], work[col]
            p = work[col][col]
            work[col] = [x / p for x in work[col]]
            for r in range(n):
                if r != col and work[r][col]:
                    a = work[r][col]
                    work[r] = [x - a * y for x, y in zip(work[r], work[col])]
        return Matrix((row[n:] for row in work), cols=n)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.cols, self.entries))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self.entries)
        return f"Matrix({self.rows}x{self.cols}: {body})"


def matrix_to_payload(m: Matrix) -> list[list[str]]:
    return [[format_rational(x) for x in row] for row in m.entries]


def matrix_from_payload(payload: Sequence[Sequence[Rational]], cols: int | None = None) -> Matrix:
    return Matrix(payload, cols=cols)


def rref(m: Matrix) -> Matrix:
    """Reduced row echelon basis of the row space (zero rows dropped)."""
    ech = _echelon(_int_rows(m.entries))
    frac_rows = [tuple(Fraction(x, r[_pivot(r)]) for x in r) for r in ech]
    return Matrix(frac_rows, cols=m.cols)


def solve_right(a: Matrix, b: Matrix) -> Matrix:
    """Unique exact solution X of A X = B; A must have full column rank."""
    if a.rows != b.rows:
        raise ValueError("row count mismatch")
    work = [list(a.entries[i]) + list(b.entries[i]) for i in range(a.rows)]
    pivot_rows: list[int] = []
    for col in range(a.cols):
        piv = next((r for r in range(len(pivot_rows), a.rows) if work[r][col]), None)
        if piv is None:
            raise ValueError("coefficient matrix does not have full column rank")
        work[len(pivot_rows)], work[piv] = work[piv], work[len(pivot_rows)]
        r0 = len(pivot_rows)
        p = work[r0][col]
        work[r0] = [x / p for x in work[r0]]
        for r in range(a.rows):
            if r != r0 and work[r][col]:
                coef = work[r][col]
                work[r] = [x - coef * y for x, y in zip(work[r], work[r0])]
        pivot_rows.append(r0)
    for r in range(a.cols, a.rows):
        if any(work[r][a.cols:]):
            raise ValueError("inconsistent linear system")
    return Matrix((work[r][a.cols:] for r in range(a.cols)), cols=b.cols)


# ---------------------------------------------------------------------------
# Subspaces.
# ---------------------------------------------------------------------------


class Subspace:
    """Canonical subspace of Q^n.

    The stored rows are the primitive-integer image of the unique reduced
    row echelon basis, so two subspaces are equal as sets iff their `rows`
    tuples are identical.
    """

    __slots__ = ("ambient_dim", "rows")

    def __init__(self, ambient_dim: int, rows: Iterable[Sequence[int]] = (), *, _canonical: bool = False):
        rows = tuple(tuple(r) for r in rows)
        if not _canonical:
            rows = _echelon(rows)
        for r in rows:
            if len(r) != ambient_dim:
                raise ValueError("row length disagrees with ambient dimension")
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("Subspace is immutable")

    @classmethod
    def from_vectors(cls, vectors: Iterable[Sequence[Rational]], ambient_dim: int | None = None) -> "Subspace":
        vecs = [as_vector(v) for v in vectors]
        if ambient_dim is None:
            if not vecs:
                raise ValueError("ambient dimension required for an empty family")
            ambient_dim = len(vecs[0])
        if any(len(v) != ambient_dim for v in vecs):
            raise ValueError("vector length disagrees with ambient dimension")
        return cls(ambient_dim, _echelon(_int_rows(vecs)), _canonical=True)

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, (), _canonical=True)

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, (_unit_row(ambient_dim, j) for j in range(ambient_dim)), _canonical=True)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def basis(self) -> Matrix:
        """The RREF basis over Q (leading coefficients 1)."""
        frac_rows = [tuple(Fraction(x, r[_pivot(r)]) for x in r) for r in self.rows]
        return Matrix(frac_rows, cols=self.ambient_dim)

    def basis_vectors(self) -> list[Vector]:
        return [tuple(Fraction(x) for x in r) for r in self.rows]

    def contains_vector(self, vec: Sequence[Rational]) -> bool:
        v = as_vector(vec)
        if len(v) != self.ambient_dim:
            raise ValueError("vector length disagrees with ambient dimension")
        (row,) = _int_rows([v])
        return _residual(row, self.rows) is None

    def contains(self, other: "Subspace") -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return all(_residual(r, self.rows) is None for r in other.rows)

    def transform(self, m: Matrix) -> "Subspace":
        """Image under an invertible linear map (applied to each basis vector)."""
        return Subspace.from_vectors(
            (m.apply(tuple(Fraction(x) for x in r)) for r in self.rows),
            ambient_dim=m.rows,
        ) if self.rows else Subspace.zero(m.rows)

    def sort_key(self):
        return (self.ambient_dim, len(self.rows), self.rows)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.rows))

    def __lt__(self, other: "Subspace") -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        return f"Subspace(dim {self.dim} of Q^{self.ambient_dim})"


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    return Subspace(a.ambient_dim, _echelon(a.rows + b.rows), _canonical=True)


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    """Zassenhaus intersection: reduce [A|A; B|0] and read zero-left rows."""
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    n = a.ambient_dim
    if not a.rows or not b.rows:
        return Subspace.zero(n)
    block = [r + r for r in a.rows] + [r + (0,) * n for r in b.rows]
    ech = _echelon(block)
    inter = [row[n:] for row in ech if not any(row[:n])]
    return Subspace(n, _echelon(inter), _canonical=True)


def contains(a: Subspace, b: Subspace) -> bool:
    """True iff b is a subset of a."""
    return a.contains(b)


def equals(a: Subspace, b: Subspace) -> bool:
    return a == b


def subspace_to_payload(s: Subspace) -> dict:
    return {"ambient_dim": s.ambient_dim, "basis": matrix_to_payload(s.basis)}


def subspace_from_payload(payload: dict) -> Subspace:
    n = int(payload["ambient_dim"])
    return Subspace.from_vectors([as_vector(r) for r in payload["basis"]], ambient_dim=n)


# ---------------------------------------------------------------------------
# Bilinear forms and quotients.
# ---------------------------------------------------------------------------


class BilinearForm:
    """Nondegenerate symmetric bilinear form, given by its Gram matrix."""

    __slots__ = ("dim", "gram", "int_gram")

    def __init__(self, gram: Matrix):
        if gram.rows != gram.cols:
            raise ValueError("Gram matrix must be square")
        if not gram.is_symmetric():
            raise ValueError("Gram matrix must be symmetric")
        if gram.rank() != gram.rows:
            raise ValueError("Gram matrix must be invertible (nondegenerate form)")
        scale = 1
        for row in gram.entries:
            for x in row:
                scale = lcm(scale, x.denominator)
        int_gram = tuple(tuple(int(x * scale) for x in row) for row in gram.entries)
        object.__setattr__(self, "dim", gram.rows)
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "int_gram", int_gram)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("BilinearForm is immutable")

    @classmethod
    def diagonal(cls, entries: Iterable[Rational]) -> "BilinearForm":
        diag = [rational(x) for x in entries]
        n = len(diag)
        return cls(Matrix(((diag[i] if i == j else 0 for j in range(n)) for i in range(n)), cols=n))

    def pairing(self, u: Sequence[Rational], v: Sequence[Rational]) -> Fraction:
        uu = as_vector(u)
        vv = as_vector(v)
        if len(uu) != self.dim or len(vv) != self.dim:
            raise ValueError("vector length disagrees with form dimension")
        total = Fraction(0)
        for i, ui in enumerate(uu):
            if ui:
                row = self.gram.entries[i]
                total += ui * sum((row[j] * vv[j] for j in range(self.dim) if vv[j]), Fraction(0))
        return total

    def int_pairing(self, u: Sequence[int], v: Sequence[int]) -> int:
        """Pairing against the integer-scaled Gram matrix (zero tests only)."""
        total = 0
        for i, ui in enumerate(u):
            if ui:
                row = self.int_gram[i]
                total += ui * sum(row[j] * v[j] for j in range(self.dim) if v[j])
        return total

    def is_isotropic(self, v: Sequence[Rational]) -> bool:
        return self.pairing(v, v) == 0

    def gram_on(self, vectors: Sequence[Sequence[Rational]]) -> Matrix:
        k = len(vectors)
        return Matrix(
            ((self.pairing(vectors[i], vectors[j]) for j in range(k)) for i in range(k)),
            cols=k,
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, BilinearForm) and self.gram == other.gram

    def __hash__(self) -> int:
        return hash(self.gram)

    def __repr__(self) -> str:
        return f"BilinearForm(dim {self.dim})"


def orth_complement(form: BilinearForm, u: Subspace) -> Subspace:
    """{v : <v|x> = 0 for all x in U}."""
    if u.ambient_dim != form.dim:
        raise ValueError("ambient dimension mismatch")
    n = form.dim
    rows = []
    for r in u.rows:
        rows.append(tuple(sum(r[i] * form.int_gram[i][j] for i in range(n) if r[i]) for j in range(n)))
    return Subspace(n, _nullspace(rows, n), _canonical=True)


class QuotientSpace:
    """Coordinates on V0/V1 for a coisotropic V0 with V1 = V0-perp.

    `projection` is a full-row-rank map defined on all of V whose restriction
    to V0 has kernel exactly V1; `section` right-inverts it through the
    deterministic leftmost-pivot complement of V1 inside V0.
    """

    __slots__ = ("space", "kernel", "projection", "section", "induced_form")

    def __init__(self, space: Subspace, kernel: Subspace, projection: Matrix,
                 section: Matrix, induced_form: BilinearForm):
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "kernel", kernel)
        object.__setattr__(self, "projection", projection)
        object.__setattr__(self, "section", section)
        object.__setattr__(self, "induced_form", induced_form)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("QuotientSpace is immutable")

    @property
    def dim(self) -> int:
        return self.projection.rows

    def project_vector(self, v: Sequence[Rational]) -> Vector:
        return self.projection.apply(v)

    def lift_coords(self, t: Sequence[Rational]) -> Vector:
        return self.section.apply(t)

    def project_subspace(self, s: Subspace) -> Subspace:
        if not s.rows:
            return Subspace.zero(self.dim)
        return Subspace.from_vectors(
            (self.projection.apply(tuple(Fraction(x) for x in r)) for r in s.rows),
            ambient_dim=self.dim,
        )

    def __repr__(self) -> str:
        return f"QuotientSpace(dim {self.dim} from V0 dim {self.space.dim})"


def quotient(form: BilinearForm, v0: Subspace) -> QuotientSpace:
    """Quotient of a coisotropic V0 by V1 = V0-perp, with the induced form."""
    if v0.ambient_dim != form.dim:
        raise ValueError("ambient dimension mismatch")
    n = form.dim
    v1 = orth_complement(form, v0)
    if not v0.contains(v1):
        raise ValueError("subspace is not coisotropic")
    u_rows = []
    for r in v0.rows:
        res = _residual(r, v1.rows)
        if res is not None:
            u_rows.append(res)
    u_rows = _echelon(u_rows)
    q = len(u_rows)
    assert q == v0.dim - v1.dim
    union = _echelon(u_rows + v1.rows)
    pivcols = {_pivot(r) for r in union}
    d_rows = [_unit_row(n, j) for j in range(n) if j not in pivcols]
    f_rows = list(u_rows) + list(v1.rows) + d_rows
    f = Matrix(f_rows, cols=n)
    inv = f.transpose().inverse()
    projection = Matrix(inv.entries[:q], cols=n)
    section = Matrix(((Fraction(u_rows[t][i]) for t in range(q)) for i in range(n)), cols=q)
    u_vectors = [tuple(Fraction(x) for x in r) for r in u_rows]
    induced = BilinearForm(form.gram_on(u_vectors))
    return QuotientSpace(v0, v1, projection, section, induced)
