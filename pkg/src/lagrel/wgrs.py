"""Weak generalized root systems and the equivalence relations they induce.

A root system here is a finite symmetric set of nonzero rational vectors with
integrality under reflections in anisotropic roots and the plus-or-minus
shift axiom for isotropic ones.  The induced relation is generated by the
Weyl reflections together with the translation idempotents E_{alpha-perp}
for isotropic alpha.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .exact_linalg import (
    BilinearForm,
    Matrix,
    Rational,
    Subspace,
    Vector,
    as_vector,
    matrix_from_payload,
    matrix_to_payload,
    orth_complement,
    quotient,
    solve_right,
    vector_from_payload,
    vector_to_payload,
)
from .linear_relations import (
    Isometry,
    LinearRelation,
    compose,
    graph,
    idempotent_relation,
)
from .relation_monoid import (
    ClosureConfig,
    LagrangianEquivalenceRelation,
    closure,
)


def _orient(v: Vector) -> Vector:
    """Canonical representative of {v, -v}: first nonzero coordinate positive."""
    for x in v:
        if x:
            return v if x > 0 else tuple(-y for y in v)
    return v


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    failures: tuple[str, ...] = ()


class IsoSet:
    """A symmetric set of pairwise-orthogonal isotropic roots."""

    __slots__ = ("roots", "pairs")

    def __init__(self, roots: Iterable[Sequence[Rational]]):
        closed = set()
        for r in roots:
            v = as_vector(r)
            closed.add(v)
            closed.add(tuple(-x for x in v))
        pairs = tuple(sorted({_orient(v) for v in closed}))
        object.__setattr__(self, "roots", frozenset(closed))
        object.__setattr__(self, "pairs", pairs)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("IsoSet is immutable")

    @property
    def num_pairs(self) -> int:
        return len(self.pairs)

    def span(self) -> Subspace:
        if not self.pairs:
            raise ValueError("span of the empty iso-set needs an ambient dimension")
        return Subspace.from_vectors(self.pairs)

    def span_in(self, ambient_dim: int) -> Subspace:
        if not self.pairs:
            return Subspace.zero(ambient_dim)
        return Subspace.from_vectors(self.pairs, ambient_dim=ambient_dim)

    def __eq__(self, other) -> bool:
        return isinstance(other, IsoSet) and self.pairs == other.pairs

    def __hash__(self) -> int:
        return hash(self.pairs)

    def __lt__(self, other: "IsoSet") -> bool:
        return (len(self.pairs), self.pairs) < (len(other.pairs), other.pairs)

    def __repr__(self) -> str:
        return f"IsoSet({self.num_pairs} pairs)"


class RootSystem:
    """Finite root list plus the ambient nondegenerate symmetric form."""

    def __init__(self, form: BilinearForm, roots: Iterable[Sequence[Rational]]):
        vecs = sorted({as_vector(r) for r in roots})
        for v in vecs:
            if len(v) != form.dim:
                raise ValueError("root length disagrees with form dimension")
            if not any(v):
                raise ValueError("roots must be nonzero")
        self.form = form
        self.roots = tuple(vecs)

    @property
    def dim(self) -> int:
        return self.form.dim

    @cached_property
    def iso_roots(self) -> tuple[Vector, ...]:
        return tuple(v for v in self.roots if self.form.pairing(v, v) == 0)

    @cached_property
    def aniso_roots(self) -> tuple[Vector, ...]:
        return tuple(v for v in self.roots if self.form.pairing(v, v) != 0)

    def iso_pairs(self) -> tuple[Vector, ...]:
        return tuple(sorted({_orient(v) for v in self.iso_roots}))

    def aniso_pairs(self) -> tuple[Vector, ...]:
        return tuple(sorted({_orient(v) for v in self.aniso_roots}))

    def __eq__(self, other) -> bool:
        return isinstance(other, RootSystem) and self.form == other.form and self.roots == other.roots

    def __hash__(self) -> int:
        return hash((self.form, self.roots))

    def __repr__(self) -> str:
        return f"RootSystem(dim={self.dim}, roots={len(self.roots)})"

    # -- axioms ---------------------------------------------------------------

    def validate(self) -> ValidationReport:
        failures = []
        rootset = set(self.roots)
        for a in self.roots:
            if tuple(-x for x in a) not in rootset:
                failures.append(f"symmetry: -{a} missing")
        for a in self.aniso_roots:
            norm = self.form.pairing(a, a)
            for b in self.roots:
                k = 2 * self.form.pairing(a, b) / norm
                if k.denominator != 1:
                    failures.append(f"integrality: k({a},{b}) = {k} not integral")
                    continue
                refl = tuple(x - k * y for x, y in zip(b, a))
                if refl not in rootset:
                    failures.append(f"reflection: s_{a}({b}) leaves the root set")
        for a in self.iso_roots:
            for b in self.roots:
                if self.form.pairing(a, b) != 0:
                    up = tuple(x + y for x, y in zip(b, a))
                    down = tuple(x - y for x, y in zip(b, a))
                    if up not in rootset and down not in rootset:
                        failures.append(f"shift: neither {b}+-{a} is a root")
        return ValidationReport(not failures, tuple(failures))

    @cached_property
    def _valid(self) -> ValidationReport:
        return self.validate()

    def require_valid(self):
        report = self._valid
        if not report.ok:
            raise ValueError("not a weak generalized root system: " + "; ".join(report.failures[:3]))

    # -- reflections and the Weyl group ----------------------------------------

    def reflection(self, alpha: Sequence[Rational]) -> Isometry:
        return Isometry.reflection(self.form, alpha)

    def weyl_group(self, max_order: int = 1_000_000) -> tuple[Isometry, ...]:
        """Close the anisotropic reflections under composition."""
        self.require_valid()
        gens = []
        seen_mats = set()
        for a in self.aniso_pairs():
            s = self.reflection(a)
            if s.matrix not in seen_mats:
                seen_mats.add(s.matrix)
                gens.append(s)
        ident = Isometry.identity(self.form)
        group = {ident.matrix: ident}
        queue = deque([ident])
        while queue:
            w = queue.popleft()
            for s in gens:
                nxt = s.compose(w)
                if nxt.matrix not in group:
                    if len(group) >= max_order:
                        raise RuntimeError("Weyl group generation exceeded its bound")
                    group[nxt.matrix] = nxt
                    queue.append(nxt)
        return tuple(sorted(group.values(), key=lambda s: s.sort_key()))

    # -- combinatorics ----------------------------------------------------------

    def indecomposable_components(self) -> tuple[tuple[Vector, ...], ...]:
        """Connected components of the non-orthogonality graph (each symmetric)."""
        roots = list(self.roots)
        index = {r: i for i, r in enumerate(roots)}
        parent = list(range(len(roots)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        def union(i, j):
            parent[find(i)] = find(j)

        for i, a in enumerate(roots):
            union(i, index[tuple(-x for x in a)])
            for j in range(i + 1, len(roots)):
                if self.form.pairing(a, roots[j]) != 0:
                    union(i, j)
        groups: dict[int, list[Vector]] = {}
        for i, r in enumerate(roots):
            groups.setdefault(find(i), []).append(r)
        return tuple(sorted(tuple(sorted(g)) for g in groups.values()))

    def iso_sets(self, v: Sequence[Rational] | None = None) -> tuple[IsoSet, ...]:
        """All iso-sets (orthogonal to v when given), the empty one included."""
        pairs = self._orthogonal_iso_pairs(v)
        out = []

        def extend(chosen: list[Vector], rest: list[Vector]):
            out.append(IsoSet(chosen))
            for i, cand in enumerate(rest):
                nxt = [r for r in rest[i + 1:] if self.form.pairing(cand, r) == 0]
                extend(chosen + [cand], nxt)

        extend([], list(pairs))
        return tuple(sorted(set(out)))

    def _orthogonal_iso_pairs(self, v: Sequence[Rational] | None) -> list[Vector]:
        pairs = list(self.iso_pairs())
        if v is not None:
            vv = as_vector(v)
            pairs = [p for p in pairs if self.form.pairing(p, vv) == 0]
        return pairs

    def maximal_isosets(self, v: Sequence[Rational] | None = None) -> tuple[IsoSet, ...]:
        """Inclusion-maximal iso-sets (orthogonal to v when given), by exhaustive search."""
        self.require_valid()
        candidates = self.iso_sets(v)
        pairs_avail = self._orthogonal_iso_pairs(v)
        maximal = []
        for s in candidates:
            extensible = any(
                p not in s.pairs and all(self.form.pairing(p, q) == 0 for q in s.pairs)
                for p in pairs_avail
            )
            if not extensible:
                maximal.append(s)
        maximal = tuple(sorted(maximal))
        if v is None and maximal:
            sizes = {s.num_pairs for s in maximal}
            assert len(sizes) == 1, "maximal iso-sets of different cardinality"
        return maximal

    def defect(self) -> int:
        mx = self.maximal_isosets()
        return mx[0].num_pairs if mx else 0

    # -- two-reflection witnesses -------------------------------------------------

    def _connecting_anisotropic(self, beta: Vector, beta_p: Vector) -> Vector:
        """An anisotropic root non-orthogonal to both of two orthogonal isotropic roots.

        Tries the chain construction first: a shortest all-isotropic chain in
        the non-orthogonality graph, sign-adjusted partial sums, and the last
        two sums give a non-isotropic candidate.  A direct scan of the
        anisotropic roots is the fallback.
        """
        rootset = set(self.roots)

        def good(d: Vector) -> bool:
            return (
                self.form.pairing(d, beta) != 0
                and self.form.pairing(d, beta_p) != 0
                and self.form.pairing(d, d) != 0
            )

        chain = self._iso_chain(beta, beta_p)
        if chain is not None:
            delta_prev: Vector | None = None
            delta = chain[0]
            valid = True
            for nxt in chain[1:]:
                up = tuple(x + y for x, y in zip(delta, nxt))
                down = tuple(x - y for x, y in zip(delta, nxt))
                if up in rootset:
                    delta_prev, delta = delta, up
                elif down in rootset:
                    delta_prev, delta = delta, down
                else:
                    valid = False
                    break
            if valid:
                for cand in (delta, delta_prev):
                    if cand is not None and good(cand):
                        return cand
        for d in self.aniso_roots:
            if good(d):
                return d
        raise ValueError("no anisotropic root connects the two isotropic roots")

    def _iso_chain(self, beta: Vector, beta_p: Vector) -> list[Vector] | None:
        """Shortest chain of pairwise non-orthogonal isotropic roots, by BFS."""
        prev: dict[Vector, Vector] = {beta: beta}
        queue = deque([beta])
        while queue:
            cur = queue.popleft()
            if cur == beta_p:
                chain = [cur]
                while chain[-1] != beta:
                    chain.append(prev[chain[-1]])
                return list(reversed(chain))
            for nxt in self.iso_roots:
                if nxt not in prev and self.form.pairing(cur, nxt) != 0:
                    prev[nxt] = cur
                    queue.append(nxt)
        return None

    def two_step_witness(self, beta: Sequence[Rational], beta_p: Sequence[Rational]) -> Isometry:
        """w, a product of at most two anisotropic reflections, with w(beta) = +-beta_p.

        In the orthogonal case the witness additionally satisfies w^2 = id and
        acts as the identity on span(beta, beta_p)-perp modulo span(beta, beta_p).
        """
        self.require_valid()
        b = as_vector(beta)
        bp = as_vector(beta_p)
        rootset = set(self.roots)
        if b not in rootset or bp not in rootset:
            raise ValueError("arguments must be roots")
        if self.form.pairing(b, b) != 0 or self.form.pairing(bp, bp) != 0:
            raise ValueError("arguments must be isotropic roots")
        neg_bp = tuple(-x for x in bp)
        if bp == b or neg_bp == b:
            return Isometry.identity(self.form)
        pairing = self.form.pairing(b, bp)
        if pairing != 0:
            gamma = tuple(x - y for x, y in zip(b, bp))
            if gamma not in rootset:
                gamma = tuple(x + y for x, y in zip(b, bp))
                if gamma not in rootset:
                    raise ValueError("shift axiom fails for a non-orthogonal isotropic pair")
            w = self.reflection(gamma)
            assert w.apply(b) in (bp, neg_bp)
            return w
        comp = next(c for c in self.indecomposable_components() if b in c)
        if bp not in comp:
            raise ValueError("roots lie in orthogonal indecomposable components")
        delta = self._connecting_anisotropic(b, bp)
        beta1 = self.reflection(delta).apply(b)
        assert beta1 in rootset
        if tuple(x - y for x, y in zip(b, beta1)) not in rootset:
            beta1 = tuple(-x for x in beta1)
        gamma = tuple(x - y for x, y in zip(b, beta1))
        assert gamma in rootset, "shift axiom fails on the first leg"
        target = bp
        if tuple(x - y for x, y in zip(target, beta1)) not in rootset:
            target = neg_bp
        gamma_p = tuple(x - y for x, y in zip(target, beta1))
        assert gamma_p in rootset, "shift axiom fails on the second leg"
        w = self.reflection(gamma_p).compose(self.reflection(gamma))
        assert w.apply(b) in (bp, neg_bp)
        assert w.compose(w).is_identity(), "two-step witness is not an involution"
        span = Subspace.from_vectors([b, bp])
        q = quotient(self.form, orth_complement(self.form, span))
        induced = q.projection @ w.matrix @ q.section
        assert induced == Matrix.identity(q.dim), (
            "two-step witness moves the subquotient"
        )
        return w

    # -- transport of iso-sets ----------------------------------------------------

    def _check_maximal_isoset(self, s: IsoSet, v: Vector):
        rootset = set(self.roots)
        for p in s.pairs:
            if p not in rootset or self.form.pairing(p, p) != 0:
                raise ValueError("iso-set contains a non-root or anisotropic vector")
            if self.form.pairing(p, v) != 0:
                raise ValueError("iso-set is not orthogonal to the base vector")
        for p in s.pairs:
            for t in s.pairs:
                if self.form.pairing(p, t) != 0:
                    raise ValueError("iso-set is not pairwise orthogonal")
        for cand in self._orthogonal_iso_pairs(v):
            if cand not in s.pairs and all(self.form.pairing(cand, p) == 0 for p in s.pairs):
                raise ValueError("iso-set is not maximal relative to the base vector")

    def transport_isoset(self, v: Sequence[Rational], s: IsoSet, s_prime: IsoSet) -> Isometry:
        """w in Stab_W(v) with w(S) = S', by swapping one pair at a time."""
        self.require_valid()
        vv = as_vector(v)
        self._check_maximal_isoset(s, vv)
        self._check_maximal_isoset(s_prime, vv)
        rootset = set(self.roots)
        current = s
        w = Isometry.identity(self.form)
        guard = 0
        while set(current.pairs) != set(s_prime.pairs):
            guard += 1
            if guard > 4 * len(self.roots) + 4:
                raise RuntimeError("iso-set transport failed to converge")
            alpha = next(p for p in s_prime.pairs if p not in current.pairs)
            beta = next(
                (p for p in current.pairs if self.form.pairing(alpha, p) != 0),
                None,
            )
            if beta is None:
                raise ValueError("source iso-set is not maximal: nothing blocks the new pair")
            gamma = tuple(x - y for x, y in zip(alpha, beta))
            if gamma not in rootset:
                gamma = tuple(x + y for x, y in zip(alpha, beta))
            assert gamma in rootset, "shift axiom fails during transport"
            refl = self.reflection(gamma)
            current = IsoSet([refl.apply(p) for p in current.pairs])
            w = refl.compose(w)
        assert w.apply(vv) == vv
        assert IsoSet([w.apply(p) for p in s.pairs]) == s_prime
        return w

    # -- the induced equivalence relation -------------------------------------------

    def relation_generators(self) -> list[LinearRelation]:
        gens: list[LinearRelation] = []
        seen = set()
        for a in self.aniso_pairs():
            g = graph(self.reflection(a))
            if g.space not in seen:
                seen.add(g.space)
                gens.append(g)
        for a in self.iso_pairs():
            v0 = orth_complement(self.form, Subspace.from_vectors([a]))
            e = idempotent_relation(self.form, v0)
            if e.space not in seen:
                seen.add(e.space)
                gens.append(e)
        return gens

    def build_relation(self, config: ClosureConfig | None = None,
                       check: bool = True) -> LagrangianEquivalenceRelation:
        """Closure of the Weyl graphs and isotropic-translation idempotents.

        With check=True the component set is verified to be exactly
        {graph(w) o E_{S-perp}} over w in W and iso-sets S, by double inclusion.
        """
        self.require_valid()
        rel = closure(self.form, self.relation_generators(), config)
        if check:
            expected = self.described_components()
            actual = {c.space for c in rel.components}
            assert actual == expected, "closure disagrees with the Weyl/iso-set description"
        return rel

    def described_components(self) -> set[Subspace]:
        """Spaces of graph(w) o E_{S-perp} over all w in W and iso-sets S."""
        weyl = self.weyl_group()
        out = set()
        for s in self.iso_sets():
            v0 = orth_complement(self.form, s.span_in(self.dim))
            e = idempotent_relation(self.form, v0)
            for w in weyl:
                out.add(compose(e, graph(w)).space)
        return out

    def describe_component(self, comp: LinearRelation) -> tuple[Isometry, IsoSet]:
        """Finite search for (w, S) with comp = graph(w) o E_{S-perp}."""
        self.require_valid()
        for s in self.iso_sets():
            v0 = orth_complement(self.form, s.span_in(self.dim))
            if v0 != comp.p1:
                continue
            e = idempotent_relation(self.form, v0)
            for w in self.weyl_group():
                if compose(e, graph(w)).space == comp.space:
                    return w, s
        raise ValueError("component is not of the form graph(w) o E_{S-perp}")

    def class_membership(self, v: Sequence[Rational], v_prime: Sequence[Rational]) -> tuple[bool, tuple[Isometry, tuple[Fraction, ...]] | None]:
        """Decide v' in W(v + span S) for one maximal iso-set S orthogonal to v."""
        self.require_valid()
        vv = as_vector(v)
        vp = as_vector(v_prime)
        choices = self.maximal_isosets(vv)
        s = choices[0] if choices else IsoSet([])
        pairs = s.pairs
        for w in self.weyl_group():
            u = w.inverse().apply(vp)
            diff = tuple(a - b for a, b in zip(u, vv))
            if not pairs:
                if not any(diff):
                    return True, (w, ())
                continue
            mat = Matrix([[p[i] for p in pairs] for i in range(self.dim)], cols=len(pairs))
            try:
                coeffs = solve_right(mat, Matrix([[d] for d in diff], cols=1))
            except ValueError:
                continue
            return True, (w, tuple(coeffs.column(0)))
        return False, None

    # -- reduction by an isotropic root -----------------------------------------------

    def reduce_by_root(self, alpha: Sequence[Rational]) -> "RootSystem":
        """Root system induced on alpha-perp / Q alpha for an isotropic root alpha."""
        self.require_valid()
        a = as_vector(alpha)
        if a not in set(self.iso_roots):
            raise ValueError("not an isotropic root of this system")
        v0 = orth_complement(self.form, Subspace.from_vectors([a]))
        q = quotient(self.form, v0)
        images = set()
        for r in self.roots:
            if self.form.pairing(r, a) == 0:
                img = q.project_vector(r)
                if any(img):
                    images.add(img)
        reduced = RootSystem(q.induced_form, images)
        report = reduced.validate()
        if not report.ok:
            raise RuntimeError("reduction produced an invalid root system")
        return reduced


# ---------------------------------------------------------------------------
# Catalog of standard families.
# ---------------------------------------------------------------------------


def _gl_roots(m: int, n: int) -> list[tuple[int, ...]]:
    dim = m + n
    roots = []

    def unit(i, sign=1):
        return tuple(sign if k == i else 0 for k in range(dim))

    def diff(i, j):
        return tuple((1 if k == i else 0) - (1 if k == j else 0) for k in range(dim))

    for i in range(m):
        for j in range(m):
            if i != j:
                roots.append(diff(i, j))
    for i in range(n):
        for j in range(n):
            if i != j:
                roots.append(diff(m + i, m + j))
    for i in range(m):
        for j in range(n):
            roots.append(diff(i, m + j))
            roots.append(diff(m + j, i))
    return roots


def _osp_roots(m: int, n: int, odd: bool) -> list[tuple[int, ...]]:
    """B(m|n) roots when odd, D(m|n) roots otherwise; dim V = m + n."""
    dim = m + n
    roots: list[tuple[int, ...]] = []

    def vec(*pairs) -> tuple[int, ...]:
        out = [0] * dim
        for idx, val in pairs:
            out[idx] += val
        return tuple(out)

    for i in range(m):
        for j in range(i + 1, m):
            for si in (1, -1):
                for sj in (1, -1):
                    roots.append(vec((i, si), (j, sj)))
    if odd:
        for i in range(m):
            roots.append(vec((i, 1)))
            roots.append(vec((i, -1)))
    for p in range(n):
        for q in range(p + 1, n):
            for sp in (1, -1):
                for sq in (1, -1):
                    roots.append(vec((m + p, sp), (m + q, sq)))
    for p in range(n):
        roots.append(vec((m + p, 2)))
        roots.append(vec((m + p, -2)))
        if odd:
            roots.append(vec((m + p, 1)))
            roots.append(vec((m + p, -1)))
    for i in range(m):
        for p in range(n):
            for si in (1, -1):
                for sp in (1, -1):
                    roots.append(vec((i, si), (m + p, sp)))
    return roots


def catalog(name: str, *params: int) -> RootSystem:
    """Built-in families: gl(m|n) and osp(p|q) with q even."""
    if name == "gl":
        if len(params) != 2 or any(p < 0 for p in params) or sum(params) < 1:
            raise ValueError("gl needs parameters m n with m + n >= 1")
        m, n = params
        form = BilinearForm.diagonal([1] * m + [-1] * n)
        rs = RootSystem(form, _gl_roots(m, n))
    elif name == "osp":
        if len(params) != 2:
            raise ValueError("osp needs parameters p q")
        p, q = params
        if q % 2 != 0 or q < 0 or p < 0 or p + q < 1:
            raise ValueError("osp needs q even and p + q >= 1")
        m, odd = divmod(p, 2)
        n = q // 2
        form = BilinearForm.diagonal([1] * m + [-1] * n)
        rs = RootSystem(form, _osp_roots(m, n, bool(odd)))
    else:
        raise ValueError(f"unknown catalog family: {name}")
    report = rs.validate()
    if not report.ok:
        raise RuntimeError("catalog entry failed validation: " + "; ".join(report.failures[:3]))
    return rs


# ---------------------------------------------------------------------------
# JSON payloads.
# ---------------------------------------------------------------------------


def rootsystem_to_payload(rs: RootSystem) -> dict:
    return {
        "gram": matrix_to_payload(rs.form.gram),
        "roots": [vector_to_payload(r) for r in rs.roots],
    }


def rootsystem_from_payload(payload: dict) -> RootSystem:
    gram = payload["gram"]
    form = BilinearForm(matrix_from_payload(gram, cols=len(gram)))
    roots = [vector_from_payload(r) for r in payload["roots"]]
    return RootSystem(form, roots)
