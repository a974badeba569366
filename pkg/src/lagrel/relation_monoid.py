"""Lagrangian equivalence relations as finite closed component sets.

A relation R is stored as the deduplicated set of its Lagrangian components,
each a canonical subspace of V x V.  Closure is a breadth-first walk over
words in the generators (the word set of an inverse-closed generating family
is automatically closed under composition and inverse), with a hard component
bound as the only termination guarantee.
"""

from __future__ import annotations

import random
from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .exact_linalg import (
    BilinearForm,
    Matrix,
    Rational,
    Subspace,
    _echelon,
    _rank,
    as_vector,
    orth_complement,
    quotient,
    subspace_intersect,
    subspace_sum,
)
from .linear_relations import (
    Isometry,
    LinearRelation,
    compose,
    diagonal,
    graph,
    idempotent_relation,
    inverse,
    isometry_of_graph,
)


class ClosureBoundExceeded(RuntimeError):
    """Raised when a closure walk outgrows its configured bounds."""

    def __init__(self, message: str, components: int):
        super().__init__(message)
        self.components = components


@dataclass(frozen=True)
class ClosureConfig:
    max_components: int = 100_000
    max_rounds: int = 10_000

    def __post_init__(self):
        if self.max_components <= 0 or self.max_rounds <= 0:
            raise ValueError("closure bounds must be positive")


class LagrangianEquivalenceRelation:
    """A finite union of Lagrangian components closed under composition/inverse.

    The constructor deduplicates components by their canonical subspace and
    always includes the diagonal; closedness itself is the builder's job and
    can be audited with verify_closed().
    """

    def __init__(self, form: BilinearForm, components: Iterable[LinearRelation],
                 generators: Sequence[LinearRelation] = ()):
        by_space = {}
        unit = diagonal(form)
        by_space[unit.space] = unit
        for comp in components:
            if comp.form != form:
                raise ValueError("component form disagrees with the relation form")
            if not comp.is_lagrangian:
                raise ValueError("component is not Lagrangian")
            by_space[comp.space] = comp
        self.form = form
        self.components = tuple(sorted(by_space.values()))
        self.generators = tuple(generators)
        self._spaces = frozenset(by_space)

    @property
    def n(self) -> int:
        return self.form.dim

    def __len__(self) -> int:
        return len(self.components)

    def __contains__(self, rel: LinearRelation) -> bool:
        return rel.space in self._spaces

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LagrangianEquivalenceRelation)
            and self.form == other.form
            and self._spaces == other._spaces
        )

    def __hash__(self) -> int:
        return hash((self.form, self._spaces))

    def __repr__(self) -> str:
        return f"LagrangianEquivalenceRelation(n={self.n}, components={len(self)})"

    # -- basic structure ----------------------------------------------------

    @cached_property
    def unit(self) -> LinearRelation:
        return diagonal(self.form)

    @cached_property
    def weyl_group(self) -> tuple[Isometry, ...]:
        """The group of atypicality-0 components, as isometries of V."""
        isos = sorted(
            (isometry_of_graph(c) for c in self.components if c.atypicality == 0),
            key=lambda s: s.sort_key(),
        )
        matrices = {s.matrix for s in isos}
        assert Matrix.identity(self.n) in matrices, "Weyl group misses the identity"
        for s in isos:
            assert s.matrix.inverse() in matrices, "Weyl group not closed under inverse"
            for t in isos:
                assert s.matrix @ t.matrix in matrices, "Weyl group not closed under product"
        return tuple(isos)

    def atypicality_histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(c.atypicality for c in self.components).items()))

    def special_coisotropics(self) -> tuple[Subspace, ...]:
        """All p1(L) over components (equivalently all p2, by inverse closure)."""
        return tuple(sorted({c.p1 for c in self.components}))

    def discriminant(self) -> tuple[Subspace, ...]:
        """Inclusion-maximal proper special coisotropics; their union is the discriminant."""
        proper = [u for u in self.special_coisotropics() if u.dim < self.n]
        out = []
        for u in proper:
            if not any(v is not u and v.contains(u) for v in proper):
                out.append(u)
        return tuple(sorted(out))

    def membership(self, x: Sequence[Rational], y: Sequence[Rational]) -> bool:
        """Decide (x, y) in R by testing the components."""
        xv = as_vector(x)
        yv = as_vector(y)
        if len(xv) != self.n or len(yv) != self.n:
            raise ValueError("vector length disagrees with relation dimension")
        pair = xv + yv
        return any(c.space.contains_vector(pair) for c in self.components)

    def verify_closed(self, exhaustive: bool = True, rng: random.Random | None = None,
                      samples: int = 200) -> bool:
        """Audit closure under inverse and composition (exhaustively or sampled)."""
        for c in self.components:
            if inverse(c).space not in self._spaces:
                return False
        comps = self.components
        if exhaustive:
            pairs = [(a, b) for a in comps for b in comps]
        else:
            rng = rng or random.Random(0)
            pairs = [(rng.choice(comps), rng.choice(comps)) for _ in range(samples)]
        return all(compose(a, b).space in self._spaces for a, b in pairs)

    # -- reduction ----------------------------------------------------------

    def reduce(self, v0: Subspace) -> "LagrangianEquivalenceRelation":
        """Induced relation on V0/V1 for a special coisotropic V0.

        Keeps exactly the components contained in V0 x V0; the equivalent
        E-sandwich filter is recomputed and compared as a consistency check.
        """
        if v0 not in self.special_coisotropics():
            raise ValueError("subspace is not special coisotropic for this relation")
        n = self.n
        q = quotient(self.form, v0)
        selected = []
        for comp in self.components:
            inside = all(
                v0.contains_vector(tuple(Fraction(x) for x in r[:n]))
                and v0.contains_vector(tuple(Fraction(x) for x in r[n:]))
                for r in comp.space.rows
            )
            if inside:
                selected.append(comp)
        e = idempotent_relation(self.form, v0)
        sandwich = {
            comp.space
            for comp in self.components
            if compose(compose(e, comp), e).space == comp.space
        }
        assert sandwich == {c.space for c in selected}, "reduction filters disagree"
        reduced = []
        for comp in selected:
            rows = []
            for r in comp.space.rows:
                x = q.project_vector(tuple(Fraction(v) for v in r[:n]))
                y = q.project_vector(tuple(Fraction(v) for v in r[n:]))
                rows.append(x + y)
            space = Subspace.from_vectors(rows, ambient_dim=2 * q.dim)
            rel = LinearRelation(q.induced_form, space)
            if not rel.is_lagrangian:
                raise RuntimeError("reduced component is not Lagrangian")
            reduced.append(rel)
        return LagrangianEquivalenceRelation(q.induced_form, reduced)

    # -- regularity hierarchy -------------------------------------------------

    def is_one_regular(self) -> tuple[bool, Subspace | None]:
        """Empty discriminant, or a single W-orbit of codimension-1 subspaces."""
        disc = self.discriminant()
        if not disc:
            return True, None
        if any(u.dim != self.n - 1 for u in disc):
            return False, None
        rep = disc[0]
        orbit = {rep.transform(s.matrix) for s in self.weyl_group}
        if orbit == set(disc):
            return True, rep
        return False, None

    def reduced_weyl_group(self, v0: Subspace) -> tuple[Isometry, ...]:
        """Weyl group of the reduction, checked against the stabilizer quotient."""
        ok, _ = self.is_one_regular()
        if not ok or v0 not in self.discriminant():
            raise ValueError("relation is not 1-regular with this witness")
        direct = self.reduce(v0).weyl_group
        q = quotient(self.form, v0)
        induced = set()
        for s in self.weyl_group:
            if v0.transform(s.matrix) == v0:
                induced.add(q.projection @ s.matrix @ q.section)
        assert induced == {w.matrix for w in direct}, (
            "stabilizer quotient disagrees with the reduced Weyl group"
        )
        return direct

    # -- products -------------------------------------------------------------

    def product(self, other: "LagrangianEquivalenceRelation") -> "LagrangianEquivalenceRelation":
        """Componentwise product relation on V x V'."""
        n, m = self.n, other.n
        gram = _block_diag(self.form.gram, other.form.gram)
        form = BilinearForm(gram)
        comps = []
        for a in self.components:
            for b in other.components:
                rows = []
                for r in a.space.rows:
                    rows.append(r[:n] + (0,) * m + r[n:] + (0,) * m)
                for r in b.space.rows:
                    rows.append((0,) * n + r[:m] + (0,) * n + r[m:])
                space = Subspace(2 * (n + m), _echelon(rows), _canonical=True)
                comps.append(LinearRelation(form, space))
        return LagrangianEquivalenceRelation(form, comps)

    # -- semiregularity ---------------------------------------------------------

    def component_support(self, comp: LinearRelation) -> Subspace:
        """span{v - w : (v, w) in L}: the directions the component moves."""
        n = self.n
        rows = [tuple(r[i] - r[n + i] for i in range(n)) for r in comp.space.rows]
        return Subspace(n, _echelon(rows), _canonical=True)

    def find_semiregular_decomposition(self) -> list[Subspace] | None:
        """Heuristic orthogonal decomposition candidate from component supports.

        Supports are grouped by non-orthogonality; class spans contained in the
        span of the other classes are redundant and dropped; degenerate class
        spans are grown to nondegenerate subspaces by adjoining dual partners.
        The result is only a candidate: verify_decomposition decides.
        """
        sups = []
        for comp in self.components:
            s = self.component_support(comp)
            if s.dim:
                sups.append(s)
        sups = sorted(set(sups))
        if not sups:
            return [Subspace.full(self.n)]
        parent = list(range(len(sups)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i in range(len(sups)):
            for j in range(i + 1, len(sups)):
                if not _orthogonal_subspaces(self.form, sups[i], sups[j]):
                    parent[find(i)] = find(j)
        classes: dict[int, list[Subspace]] = {}
        for i, s in enumerate(sups):
            classes.setdefault(find(i), []).append(s)
        spans = sorted(
            (_span_of(self.n, group) for group in classes.values()),
            key=lambda s: (-s.dim, s.sort_key()),
        )
        kept: list[Subspace] = []
        for i, span in enumerate(spans):
            others = kept + spans[i + 1:]
            rest = _span_of(self.n, others) if others else Subspace.zero(self.n)
            if not (span.dim and rest.contains(span)):
                kept.append(span)
        kept.sort()
        factors: list[Subspace] = []
        for i, span in enumerate(kept):
            avoid = [s for j, s in enumerate(kept) if j != i] + factors
            grown = _nondegenerate_growth(self.form, span, avoid)
            if grown is None:
                return None
            factors.append(grown)
        total = _span_of(self.n, factors) if factors else Subspace.zero(self.n)
        rest = orth_complement(self.form, total)
        if rest.dim:
            if _rank(_gram_rows(self.form, rest)) != rest.dim:
                return None
            factors.append(rest)
        if sum(f.dim for f in factors) != self.n:
            return None
        return sorted(factors)

    def split_by_decomposition(self, factors: Sequence[Subspace]) -> list["LagrangianEquivalenceRelation"] | None:
        """Factor relations if every component splits along the decomposition."""
        n = self.n
        if sum(f.dim for f in factors) != n:
            return None
        stacked = []
        for f in factors:
            stacked.extend(f.rows)
        if _rank(stacked) != n:
            return None
        t = Matrix(stacked, cols=n)
        gram_new = t @ self.form.gram @ t.transpose()
        offsets = []
        pos = 0
        for f in factors:
            offsets.append((pos, pos + f.dim))
            pos += f.dim
        for i, (a0, a1) in enumerate(offsets):
            for j, (b0, b1) in enumerate(offsets):
                if i != j and any(
                    gram_new.entries[r][c] for r in range(a0, a1) for c in range(b0, b1)
                ):
                    return None
        coord = t.transpose().inverse()
        forms = [
            BilinearForm(Matrix([row[b0:b1] for row in gram_new.entries[b0:b1]], cols=b1 - b0))
            for (b0, b1) in offsets
        ]
        factor_comps: list[dict] = [dict() for _ in factors]
        for comp in self.components:
            rows = []
            for r in comp.space.rows:
                x = coord.apply(tuple(Fraction(v) for v in r[:n]))
                y = coord.apply(tuple(Fraction(v) for v in r[n:]))
                rows.append(x + y)
            moved = Subspace.from_vectors(rows, ambient_dim=2 * n) if rows else Subspace.zero(2 * n)
            pieces = []
            for (b0, b1) in offsets:
                proj_rows = [r[b0:b1] + r[n + b0 : n + b1] for r in moved.rows]
                width = b1 - b0
                pieces.append(Subspace(2 * width, _echelon(proj_rows), _canonical=True))
            rebuilt = []
            for (b0, b1), piece in zip(offsets, pieces):
                width = b1 - b0
                for r in piece.rows:
                    row = [0] * (2 * n)
                    row[b0:b1] = r[:width]
                    row[n + b0 : n + b1] = r[width:]
                    rebuilt.append(tuple(row))
            if Subspace(2 * n, _echelon(rebuilt), _canonical=True) != moved:
                return None
            for idx, piece in enumerate(pieces):
                rel = LinearRelation(forms[idx], piece)
                if not rel.is_lagrangian:
                    return None
                factor_comps[idx][piece] = rel
        out = []
        for idx in range(len(factors)):
            rel = LagrangianEquivalenceRelation(forms[idx], factor_comps[idx].values())
            if not rel.verify_closed(exhaustive=len(rel) <= 24, samples=100):
                return None
            out.append(rel)
        return out

    def is_one_semiregular(self, decomposition: Sequence[Subspace] | None = None) -> bool:
        """Splits orthogonally into 1-regular factors (supplied or discovered)."""
        if decomposition is not None:
            split = self.split_by_decomposition(list(decomposition))
            return split is not None and all(r.is_one_regular()[0] for r in split)
        ok, _ = self.is_one_regular()
        if ok:
            return True
        factors = self.find_semiregular_decomposition()
        if factors is None:
            return False
        split = self.split_by_decomposition(factors)
        return split is not None and all(r.is_one_regular()[0] for r in split)

    def semiregular_report(self) -> list[tuple[Subspace, bool]]:
        return [
            (v0, self.reduce(v0).is_one_semiregular())
            for v0 in self.special_coisotropics()
        ]

    def is_semiregular(self) -> bool:
        """Every reduction by a special coisotropic is 1-semiregular."""
        return all(ok for _, ok in self.semiregular_report())


def _block_diag(a: Matrix, b: Matrix) -> Matrix:
    n, m = a.rows, b.rows
    rows = []
    for i in range(n):
        rows.append(tuple(a.entries[i]) + (Fraction(0),) * m)
    for i in range(m):
        rows.append((Fraction(0),) * n + tuple(b.entries[i]))
    return Matrix(rows, cols=n + m)


def _orthogonal_subspaces(form: BilinearForm, a: Subspace, b: Subspace) -> bool:
    return all(form.int_pairing(ra, rb) == 0 for ra in a.rows for rb in b.rows)


def _span_of(n: int, parts: Iterable[Subspace]) -> Subspace:
    rows = []
    for p in parts:
        rows.extend(p.rows)
    return Subspace(n, _echelon(rows), _canonical=True)


def _gram_rows(form: BilinearForm, s: Subspace) -> list[tuple[int, ...]]:
    return [tuple(form.int_pairing(r, r2) for r2 in s.rows) for r in s.rows]


def _nondegenerate_growth(form: BilinearForm, span: Subspace, avoid: Sequence[Subspace]) -> Subspace | None:
    """Grow span to a nondegenerate subspace orthogonal to everything in avoid."""
    n = form.dim
    current = span
    allowed = orth_complement(form, _span_of(n, avoid)) if avoid else Subspace.full(n)
    if not allowed.contains(current):
        return None
    for _ in range(n + 1):
        radical = subspace_intersect_radical(form, current)
        if radical.dim == 0:
            return current
        r = tuple(Fraction(x) for x in radical.rows[0])
        partner = None
        for cand in allowed.rows:
            cv = tuple(Fraction(x) for x in cand)
            pr = form.pairing(cv, r)
            if pr != 0:
                partner = tuple(x - form.pairing(cv, cv) / (2 * pr) * y for x, y in zip(cv, r))
                break
        if partner is None:
            return None
        current = subspace_sum(current, Subspace.from_vectors([partner], ambient_dim=n))
    return None


def subspace_intersect_radical(form: BilinearForm, s: Subspace) -> Subspace:
    """Radical of the form restricted to s: s intersected with its complement."""
    return subspace_intersect(s, orth_complement(form, s))


def closure(form: BilinearForm, generators: Iterable[LinearRelation],
            config: ClosureConfig | None = None) -> LagrangianEquivalenceRelation:
    """Smallest closed component set containing the generators, inverses and the diagonal.

    Enumerates all words in the inverse-closed generator family breadth
    first; the word set is closed under composition and inverse by
    construction.  Fails loudly when the configured bounds are hit, which is
    the signal for a (possibly) infinite closure.
    """
    cfg = config or ClosureConfig()
    unit = diagonal(form)
    gens: list[LinearRelation] = []
    seen_gens = {unit.space}
    for g in generators:
        if g.form != form:
            raise ValueError("generator form disagrees with the closure form")
        if not g.is_lagrangian:
            raise ValueError("generator is not Lagrangian")
        for cand in (g, inverse(g)):
            if cand.space not in seen_gens:
                seen_gens.add(cand.space)
                gens.append(cand)
    pool = {unit.space: unit}
    queue: deque[tuple[LinearRelation, int]] = deque([(unit, 0)])
    for g in gens:
        if g.space not in pool:
            pool[g.space] = g
            queue.append((g, 1))
    while queue:
        rel, depth = queue.popleft()
        if depth >= cfg.max_rounds:
            raise ClosureBoundExceeded(
                f"closure exceeded {cfg.max_rounds} rounds; the closure may be infinite",
                len(pool),
            )
        for g in gens:
            prod = compose(rel, g)
            if prod.space in pool:
                continue
            if len(pool) >= cfg.max_components:
                raise ClosureBoundExceeded(
                    f"closure exceeded {cfg.max_components} components; "
                    "the closure may be infinite",
                    len(pool),
                )
            assert prod.is_lagrangian, "composition of Lagrangian components went astray"
            pool[prod.space] = prod
            queue.append((prod, depth + 1))
    return LagrangianEquivalenceRelation(form, pool.values(), generators=tuple(gens))
