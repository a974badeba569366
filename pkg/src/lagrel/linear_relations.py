"""Linear Lagrangian relations: composition, atypicality, idempotents.

A linear relation on (V, <.|.>) is a subspace L of V x V.  It is Lagrangian
when the pairing ((v,w),(v',w')) -> <v|v'> - <w|w'> vanishes on L and
dim L = dim V.  Relations compose like multivalued maps; graphs of
isometries are exactly the invertible (atypicality 0) elements.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .exact_linalg import (
    BilinearForm,
    Matrix,
    Rational,
    Subspace,
    Vector,
    _echelon,
    _nullspace,
    as_vector,
    matrix_from_payload,
    matrix_to_payload,
    orth_complement,
    quotient,
    solve_right,
)


class Isometry:
    """Invertible linear map g with g^T G g = G, exactly."""

    __slots__ = ("form", "matrix")

    def __init__(self, form: BilinearForm, matrix: Matrix):
        if matrix.rows != form.dim or matrix.cols != form.dim:
            raise ValueError("matrix shape disagrees with form dimension")
        if matrix.transpose() @ form.gram @ matrix != form.gram:
            raise ValueError("matrix is not an isometry of the form")
        object.__setattr__(self, "form", form)
        object.__setattr__(self, "matrix", matrix)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("Isometry is immutable")

    @classmethod
    def identity(cls, form: BilinearForm) -> "Isometry":
        return cls(form, Matrix.identity(form.dim))

    @classmethod
    def reflection(cls, form: BilinearForm, v: Sequence[Rational]) -> "Isometry":
        """Reflection in an anisotropic vector: x -> x - (2<v|x>/<v|v>) v."""
        vv = as_vector(v)
        norm = form.pairing(vv, vv)
        if norm == 0:
            raise ValueError("cannot reflect in an isotropic vector")
        gv = form.gram.apply(vv)
        n = form.dim
        entries = [
            [
                (Fraction(1) if i == j else Fraction(0)) - 2 * vv[i] * gv[j] / norm
                for j in range(n)
            ]
            for i in range(n)
        ]
        return cls(form, Matrix(entries, cols=n))

    def apply(self, v: Sequence[Rational]) -> Vector:
        return self.matrix.apply(v)

    def compose(self, other: "Isometry") -> "Isometry":
        """self after other."""
        return Isometry(self.form, self.matrix @ other.matrix)

    def inverse(self) -> "Isometry":
        return Isometry(self.form, self.matrix.inverse())

    def is_identity(self) -> bool:
        return self.matrix == Matrix.identity(self.form.dim)

    def sort_key(self):
        return self.matrix.entries

    def __eq__(self, other) -> bool:
        return isinstance(other, Isometry) and self.form == other.form and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash((self.form, self.matrix))

    def __repr__(self) -> str:
        return f"Isometry({self.matrix!r})"


def relation_pairing(
    form: BilinearForm,
    first: tuple[Sequence[Rational], Sequence[Rational]],
    second: tuple[Sequence[Rational], Sequence[Rational]],
) -> Fraction:
    """Pairing on V x V whose Lagrangian subspaces are the relations: <v|v'> - <w|w'>."""
    (v, w), (vp, wp) = first, second
    return form.pairing(v, vp) - form.pairing(w, wp)


class LinearRelation:
    """A linear relation on V, held as a canonical subspace of V + V."""

    def __init__(self, form: BilinearForm, space: Subspace):
        if space.ambient_dim != 2 * form.dim:
            raise ValueError("relation subspace must live in V x V")
        self.form = form
        self.space = space

    @property
    def n(self) -> int:
        return self.form.dim

    @property
    def dim(self) -> int:
        return self.space.dim

    def _halves(self) -> tuple[list, list]:
        n = self.n
        first = [r[:n] for r in self.space.rows]
        second = [r[n:] for r in self.space.rows]
        return first, second

    @cached_property
    def p1(self) -> Subspace:
        first, _ = self._halves()
        return Subspace(self.n, _echelon(first), _canonical=True)

    @cached_property
    def p2(self) -> Subspace:
        _, second = self._halves()
        return Subspace(self.n, _echelon(second), _canonical=True)

    def _side_kernel(self, side: int) -> Subspace:
        # coefficient vectors s with s . (chosen half) = 0, pushed through the basis
        n = self.n
        rows = self.space.rows
        d = len(rows)
        if d == 0:
            return Subspace.zero(2 * n)
        half = [r[:n] for r in rows] if side == 1 else [r[n:] for r in rows]
        cols = [tuple(half[i][j] for i in range(d)) for j in range(n)]
        coeffs = _nullspace(cols, d)
        kern_rows = []
        for s in coeffs:
            kern_rows.append(tuple(sum(s[i] * rows[i][j] for i in range(d)) for j in range(2 * n)))
        return Subspace(2 * n, _echelon(kern_rows), _canonical=True)

    @cached_property
    def k1(self) -> Subspace:
        """Ker(p1|L) = {(0, w) in L}, as a subspace of V x V."""
        return self._side_kernel(1)

    @cached_property
    def k2(self) -> Subspace:
        """Ker(p2|L) = {(x, 0) in L}, as a subspace of V x V."""
        return self._side_kernel(2)

    @cached_property
    def is_isotropic(self) -> bool:
        first, second = self._halves()
        d = len(self.space.rows)
        for i in range(d):
            for j in range(i, d):
                if self.form.int_pairing(first[i], first[j]) != self.form.int_pairing(second[i], second[j]):
                    return False
        return True

    @cached_property
    def is_lagrangian(self) -> bool:
        return self.dim == self.n and self.is_isotropic

    @cached_property
    def atypicality(self) -> int:
        """dim Ker(p1|L), checked against dim Ker(p2|L)."""
        if not self.is_lagrangian:
            raise ValueError("atypicality is defined for Lagrangian relations")
        a1 = self.dim - self.p1.dim
        a2 = self.dim - self.p2.dim
        assert a1 == a2, "kernel dimensions disagree on a Lagrangian relation"
        return a1

    def contains_pair(self, x: Sequence[Rational], y: Sequence[Rational]) -> bool:
        xv = as_vector(x)
        yv = as_vector(y)
        if len(xv) != self.n or len(yv) != self.n:
            raise ValueError("vector length disagrees with relation dimension")
        return self.space.contains_vector(xv + yv)

    def sort_key(self):
        return self.space.sort_key()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LinearRelation)
            and self.form == other.form
            and self.space == other.space
        )

    def __hash__(self) -> int:
        return hash((self.form, self.space))

    def __lt__(self, other: "LinearRelation") -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        return f"LinearRelation(n={self.n}, dim={self.dim})"


def diagonal(form: BilinearForm) -> LinearRelation:
    """The identity relation {(v, v)}."""
    n = form.dim
    rows = [tuple(1 if j in (i, n + i) else 0 for j in range(2 * n)) for i in range(n)]
    return LinearRelation(form, Subspace(2 * n, _echelon(rows), _canonical=True))


def graph(iso: Isometry) -> LinearRelation:
    """Graph {(v, g v)} of an isometry."""
    n = iso.form.dim
    rows = []
    for i in range(n):
        col = iso.matrix.column(i)
        rows.append(tuple(Fraction(1 if j == i else 0) for j in range(n)) + col)
    return LinearRelation(iso.form, Subspace.from_vectors(rows, ambient_dim=2 * n))


def inverse(rel: LinearRelation) -> LinearRelation:
    n = rel.n
    rows = [r[n:] + r[:n] for r in rel.space.rows]
    return LinearRelation(rel.form, Subspace(2 * n, _echelon(rows), _canonical=True))


def compose(first: LinearRelation, second: LinearRelation) -> LinearRelation:
    """The relation (second o first) = {(x, z) : (x,y) in first, (y,z) in second}.

    Computed as the image of the fiber product over the middle factor:
    coefficient pairs (s, t) with s.A2 = t.B1 give rows (s.A1 | t.B2).
    """
    if first.form != second.form:
        raise ValueError("relations live over different forms")
    n = first.n
    a = first.space.rows
    b = second.space.rows
    da, db = len(a), len(b)
    # rows of K^T: one per middle coordinate, columns indexed by (s, t)
    kt = [
        tuple(a[i][n + j] for i in range(da)) + tuple(-b[i][j] for i in range(db))
        for j in range(n)
    ]
    coeffs = _nullspace(kt, da + db)
    out = []
    for st in coeffs:
        s, t = st[:da], st[da:]
        left = tuple(sum(s[i] * a[i][j] for i in range(da)) for j in range(n))
        right = tuple(sum(t[i] * b[i][n + j] for i in range(db)) for j in range(n))
        out.append(left + right)
    return LinearRelation(first.form, Subspace(2 * n, _echelon(out), _canonical=True))


def atypicality(rel: LinearRelation) -> int:
    return rel.atypicality


def idempotent_relation(form: BilinearForm, coisotropic: Subspace) -> LinearRelation:
    """The idempotent {(v, v + w) : v in V0, w in V0-perp} for coisotropic V0."""
    if coisotropic.ambient_dim != form.dim:
        raise ValueError("ambient dimension mismatch")
    v1 = orth_complement(form, coisotropic)
    if not coisotropic.contains(v1):
        raise ValueError("subspace is not coisotropic")
    n = form.dim
    rows = [r + r for r in coisotropic.rows]
    rows += [(0,) * n + r for r in v1.rows]
    return LinearRelation(form, Subspace(2 * n, _echelon(rows), _canonical=True))


def classify_idempotent(rel: LinearRelation) -> Subspace:
    """Recover V0 with rel = E_{V0} for a Lagrangian idempotent with p1 = p2.

    Idempotents with p1 != p2 exist (compose a collapse with an isometry
    moving its base while fixing the middle classes), so equal images are a
    genuine hypothesis, not a convenience.
    """
    if not rel.is_lagrangian:
        raise ValueError("not a Lagrangian relation")
    if compose(rel, rel) != rel:
        raise ValueError("relation is not idempotent")
    v0 = rel.p1
    if rel.p2 != v0:
        raise ValueError("idempotent has distinct images; not a plain collapse")
    rebuilt = idempotent_relation(rel.form, v0)
    assert rebuilt.space == rel.space, "idempotent does not match its collapse form"
    return v0


def isometry_of_graph(rel: LinearRelation) -> Isometry:
    """Extract g from a relation that is the graph of an isometry."""
    if not rel.is_lagrangian or rel.atypicality != 0:
        raise ValueError("relation is not the graph of an isometry")
    n = rel.n
    a1 = Matrix([r[:n] for r in rel.space.rows], cols=n)
    a2 = Matrix([r[n:] for r in rel.space.rows], cols=n)
    st = solve_right(a1, a2)
    return Isometry(rel.form, st.transpose())


def canonical_data(rel: LinearRelation) -> tuple[Subspace, Subspace, Matrix]:
    """Complete invariant (p1, p2, induced isometry between the quotients)."""
    if not rel.is_lagrangian:
        raise ValueError("canonical data is defined for Lagrangian relations")
    v0 = rel.p1
    v0p = rel.p2
    q = quotient(rel.form, v0)
    qp = quotient(rel.form, v0p)
    if q.dim == 0:
        alpha = Matrix((), cols=0)
        return v0, v0p, alpha
    xs = []
    ys = []
    for r in rel.space.rows:
        x = tuple(Fraction(v) for v in r[: rel.n])
        y = tuple(Fraction(v) for v in r[rel.n :])
        xs.append(q.project_vector(x))
        ys.append(qp.project_vector(y))
    alpha = solve_right(Matrix(xs, cols=q.dim), Matrix(ys, cols=qp.dim)).transpose()
    assert alpha.transpose() @ qp.induced_form.gram @ alpha == q.induced_form.gram, (
        "induced map is not an isometry of the quotient forms"
    )
    return v0, v0p, alpha


def relation_from_data(form: BilinearForm, v0: Subspace, v0p: Subspace, alpha: Matrix) -> LinearRelation:
    """Rebuild the Lagrangian relation with p1 = V0, p2 = V0' and quotient map alpha."""
    q = quotient(form, v0)
    qp = quotient(form, v0p)
    if alpha.rows != qp.dim or alpha.cols != q.dim:
        raise ValueError("quotient map has the wrong shape")
    n = form.dim
    rows: list[Vector] = []
    for i in range(q.dim):
        e = tuple(Fraction(1 if t == i else 0) for t in range(q.dim))
        rows.append(q.lift_coords(e) + qp.lift_coords(alpha.apply(e)))
    zero = (Fraction(0),) * n
    for r in q.kernel.rows:
        rows.append(tuple(Fraction(x) for x in r) + zero)
    for r in qp.kernel.rows:
        rows.append(zero + tuple(Fraction(x) for x in r))
    rel = LinearRelation(form, Subspace.from_vectors(rows, ambient_dim=2 * n))
    if not rel.is_lagrangian:
        raise ValueError("data does not assemble into a Lagrangian relation")
    return rel


# ---------------------------------------------------------------------------
# JSON payloads.
# ---------------------------------------------------------------------------


def relation_to_payload(rel: LinearRelation) -> dict:
    return {
        "form": matrix_to_payload(rel.form.gram),
        "space": matrix_to_payload(rel.space.basis),
    }


def relation_from_payload(payload: dict, form: BilinearForm | None = None) -> LinearRelation:
    if form is None:
        gram = payload["form"]
        form = BilinearForm(matrix_from_payload(gram, cols=len(gram)))
    elif "form" in payload:
        given = matrix_from_payload(payload["form"], cols=form.dim)
        if given != form.gram:
            raise ValueError("nested relation form disagrees with the file form")
    space = Subspace.from_vectors(
        [as_vector(r) for r in payload["space"]],
        ambient_dim=2 * form.dim,
    )
    return LinearRelation(form, space)


# ---------------------------------------------------------------------------
# Seeded random generation for test corpora.
#
# Lagrangian relations are generated constructively as graph-of-isometry
# composed with an idempotent, which realizes the general decomposition
# without needing a decision procedure over Q.
# ---------------------------------------------------------------------------


def standard_form(pos: int, neg: int) -> BilinearForm:
    """diag(1,...,1,-1,...,-1) with pos ones and neg minus-ones."""
    return BilinearForm.diagonal([1] * pos + [-1] * neg)


def suite_form(dim: int) -> BilinearForm:
    """The split diagonal form used by the randomized suites in dimension dim."""
    neg = dim // 2
    return standard_form(dim - neg, neg)


def random_rational(rng: random.Random, span: int = 3) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.choice((1, 1, 1, 2)))


def random_anisotropic_vector(form: BilinearForm, rng: random.Random) -> Vector:
    while True:
        v = tuple(random_rational(rng) for _ in range(form.dim))
        if any(v) and form.pairing(v, v) != 0:
            return v


def random_isometry(form: BilinearForm, rng: random.Random, max_reflections: int = 3) -> Isometry:
    iso = Isometry.identity(form)
    for _ in range(rng.randint(0, max_reflections)):
        refl = Isometry.reflection(form, random_anisotropic_vector(form, rng))
        iso = refl.compose(iso)
    return iso


def _split_indices(form: BilinearForm) -> tuple[list[int], list[int]] | None:
    gram = form.gram.entries
    pos, neg = [], []
    for i in range(form.dim):
        for j in range(form.dim):
            if i != j and gram[i][j] != 0:
                return None
        if gram[i][i] == 1:
            pos.append(i)
        elif gram[i][i] == -1:
            neg.append(i)
        else:
            return None
    return pos, neg


def random_coisotropic(form: BilinearForm, rng: random.Random) -> Subspace:
    """A random coisotropic subspace, as the complement of a random iso-span."""
    split = _split_indices(form)
    if split is None:
        return Subspace.full(form.dim)
    pos, neg = split
    k = rng.randint(0, min(len(pos), len(neg)))
    if k == 0:
        return Subspace.full(form.dim)
    pis = rng.sample(pos, k)
    njs = rng.sample(neg, k)
    vectors = []
    for i, j in zip(pis, njs):
        sign = rng.choice((1, -1))
        vec = [Fraction(0)] * form.dim
        vec[i] = Fraction(1)
        vec[j] = Fraction(sign)
        vectors.append(tuple(vec))
    twist = random_isometry(form, rng, max_reflections=2)
    span = Subspace.from_vectors([twist.apply(v) for v in vectors], ambient_dim=form.dim)
    return orth_complement(form, span)


def random_lagrangian(form: BilinearForm, rng: random.Random) -> LinearRelation:
    e = idempotent_relation(form, random_coisotropic(form, rng))
    g = graph(random_isometry(form, rng))
    return compose(e, g)
