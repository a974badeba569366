"""Root system axioms, combinatorics, induced relations, reduction."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from lagrel.exact_linalg import BilinearForm, Subspace, orth_complement
from lagrel.wgrs import (
    IsoSet,
    RootSystem,
    catalog,
    rootsystem_from_payload,
    rootsystem_to_payload,
)


def neg(v):
    return tuple(-x for x in v)


def test_catalog_gl11():
    rs = catalog("gl", 1, 1)
    assert len(rs.roots) == 2
    assert len(rs.iso_roots) == 2
    assert rs.validate().ok


def test_catalog_gl21():
    rs = catalog("gl", 2, 1)
    assert len(rs.roots) == 6
    assert len(rs.aniso_roots) == 2
    assert len(rs.iso_roots) == 4


def test_catalog_osp12():
    rs = catalog("osp", 1, 2)
    assert rs.validate().ok
    assert rs.iso_roots == ()


def test_catalog_osp32():
    rs = catalog("osp", 3, 2)
    assert rs.validate().ok
    assert len(rs.iso_roots) == 4
    assert len(rs.weyl_group()) == 4


def test_catalog_rejects_bad_parameters():
    with pytest.raises(ValueError):
        catalog("gl", 0, 0)
    with pytest.raises(ValueError):
        catalog("osp", 3, 3)
    with pytest.raises(ValueError):
        catalog("so", 3, 0)


def test_classical_a1_validates():
    rs = RootSystem(BilinearForm.diagonal([1]), [(1,), (-1,)])
    assert rs.validate().ok


def test_flipped_form_degrades_to_anisotropic_pair():
    # gl(1|1) roots under a definite form: the pair is anisotropic but a
    # single symmetric pair still satisfies the axioms (a scaled A1), so the
    # isotropy bookkeeping, not validity, is what changes
    rs = RootSystem(BilinearForm.diagonal([1, 1]), [(1, -1), (-1, 1)])
    assert rs.validate().ok
    assert rs.iso_roots == ()
    assert len(rs.weyl_group()) == 2


def test_validation_catches_reflection_escape():
    # anisotropic reflection closure genuinely failing
    rs = RootSystem(BilinearForm.diagonal([1, 1]), [(1, 0), (-1, 0), (1, 3), (-1, -3)])
    report = rs.validate()
    assert not report.ok
    assert any("reflection" in f or "shift" in f for f in report.failures)


def test_validation_catches_shift_failure():
    # isotropic alpha, non-orthogonal beta, neither beta + alpha nor
    # beta - alpha present
    rs = RootSystem(
        BilinearForm.diagonal([1, -1]),
        [(1, -1), (-1, 1), (1, 0), (-1, 0)],
    )
    report = rs.validate()
    assert not report.ok


def test_validation_catches_broken_symmetry():
    rs = RootSystem(BilinearForm.diagonal([1, -1]), [(1, -1)])
    report = rs.validate()
    assert not report.ok
    assert any("symmetry" in f for f in report.failures)


def test_axiom_fuzzing_catalog():
    rng = random.Random(0)
    for name, a, b in (("gl", 2, 1), ("gl", 2, 2), ("osp", 3, 2)):
        rs = catalog(name, a, b)
        roots = list(rs.roots)
        for _ in range(5):
            mutated = list(roots)
            idx = rng.randrange(len(mutated))
            # drop a root together with nothing else: symmetry or closure breaks
            del mutated[idx]
            assert not RootSystem(rs.form, mutated).validate().ok


def test_weyl_group_orders():
    import math

    for m in range(0, 6):
        for n in range(0, 6):
            if not 1 <= m + n <= 5:
                continue
            rs = catalog("gl", m, n)
            assert len(rs.weyl_group()) == math.factorial(m) * math.factorial(n)


def test_indecomposable_components():
    assert len(catalog("gl", 1, 1).indecomposable_components()) == 1
    assert len(catalog("gl", 2, 2).indecomposable_components()) == 1
    # orthogonal union of two copies of gl(1|1)
    form = BilinearForm.diagonal([1, -1, 1, -1])
    roots = [(1, -1, 0, 0), (-1, 1, 0, 0), (0, 0, 1, -1), (0, 0, -1, 1)]
    rs = RootSystem(form, roots)
    assert rs.validate().ok
    assert len(rs.indecomposable_components()) == 2


def test_maximal_isosets_gl11():
    rs = catalog("gl", 1, 1)
    mx = rs.maximal_isosets()
    assert len(mx) == 1
    assert mx[0].num_pairs == 1
    assert len(mx[0].roots) == 2


def test_maximal_isosets_gl21():
    mx = catalog("gl", 2, 1).maximal_isosets()
    assert len(mx) == 2
    assert all(s.num_pairs == 1 for s in mx)


def test_maximal_isosets_gl22():
    mx = catalog("gl", 2, 2).maximal_isosets()
    assert len(mx) == 2
    assert all(s.num_pairs == 2 for s in mx)


def test_defect_is_min_mn():
    for m, n in ((1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (4, 1), (2, 3)):
        assert catalog("gl", m, n).defect() == min(m, n)


def test_two_step_trivial_and_adjacent():
    rs = catalog("gl", 2, 1)
    beta = (Fraction(1), Fraction(0), Fraction(-1))
    beta_p = (Fraction(0), Fraction(1), Fraction(-1))
    assert rs.form.pairing(beta, beta_p) == -1
    w = rs.two_step_witness(beta, beta)
    assert w.is_identity()
    w = rs.two_step_witness(beta, beta_p)
    assert w.apply(beta) in (beta_p, neg(beta_p))
    # the witness is the reflection in e1 - e2
    assert w.apply((Fraction(1), Fraction(0), Fraction(0))) == (0, 1, 0)


def test_two_step_orthogonal_case():
    rs = catalog("gl", 2, 2)
    beta = (Fraction(1), Fraction(0), Fraction(-1), Fraction(0))
    beta_p = (Fraction(0), Fraction(1), Fraction(0), Fraction(-1))
    assert rs.form.pairing(beta, beta_p) == 0
    w = rs.two_step_witness(beta, beta_p)
    assert w.apply(beta) in (beta_p, neg(beta_p))
    assert w.compose(w).is_identity()


def test_two_step_rejects_anisotropic():
    rs = catalog("gl", 2, 1)
    with pytest.raises(ValueError):
        rs.two_step_witness((1, -1, 0), (1, 0, -1))


def test_transport_isoset_identity_and_swap():
    rs = catalog("gl", 2, 1)
    mx = rs.maximal_isosets()
    v = (Fraction(0),) * 3
    w = rs.transport_isoset(v, mx[0], mx[0])
    assert w.is_identity()
    w = rs.transport_isoset(v, mx[0], mx[1])
    assert IsoSet([w.apply(p) for p in mx[0].pairs]) == mx[1]


def test_transport_isoset_with_base_vector():
    rs = catalog("gl", 2, 2)
    v = (Fraction(1), Fraction(1), Fraction(-1), Fraction(-1))
    mx = rs.maximal_isosets(v)
    assert len(mx) == 2
    w = rs.transport_isoset(v, mx[0], mx[1])
    assert w.apply(v) == v


def test_transport_rejects_non_maximal():
    rs = catalog("gl", 2, 2)
    mx = rs.maximal_isosets()
    small = IsoSet([mx[0].pairs[0]])
    with pytest.raises(ValueError):
        rs.transport_isoset((Fraction(0),) * 4, small, mx[1])


def test_build_relation_counts(gl11, gl21):
    assert len(gl11) == 2
    assert len(gl21) == 6
    a1 = RootSystem(BilinearForm.diagonal([1]), [(1,), (-1,)])
    rel = a1.build_relation()
    assert len(rel) == 2
    assert len(rel.weyl_group) == 2


def test_build_relation_description_check():
    # the description audit runs without raising for small entries
    for name, a, b in (("gl", 1, 1), ("gl", 2, 1), ("osp", 3, 2)):
        rel = catalog(name, a, b).build_relation(check=True)
        assert rel.verify_closed(exhaustive=len(rel) <= 24)


def test_component_count_matches_pair_count(gl21):
    rs = catalog("gl", 2, 1)
    assert len(rs.described_components()) == len(gl21)


def test_class_membership_examples(gl11):
    rs = catalog("gl", 1, 1)
    ok, witness = rs.class_membership((0, 0), (3, -3))
    assert ok
    w, coeffs = witness
    assert w.is_identity() and coeffs == (Fraction(3),)
    ok, _ = rs.class_membership((2, 1), (2, 1))
    assert ok
    rs21 = catalog("gl", 2, 1)
    ok, _ = rs21.class_membership((1, 0, 0), (2, 0, -1))
    assert not ok


def test_class_membership_agrees_with_relation(gl21):
    rs = catalog("gl", 2, 1)
    rng = random.Random(17)
    for _ in range(500):
        x = tuple(rng.randint(-2, 2) for _ in range(3))
        y = tuple(rng.randint(-2, 2) for _ in range(3))
        ok, witness = rs.class_membership(x, y)
        assert ok == gl21.membership(x, y)
        if ok:
            w, coeffs = witness
            s = rs.maximal_isosets(x)[0]
            shifted = list(x)
            for c, p in zip(coeffs, s.pairs):
                shifted = [a + c * b for a, b in zip(shifted, p)]
            assert w.apply(shifted) == tuple(Fraction(v) for v in y)


@pytest.mark.parametrize(
    "name,m,n",
    [("gl", 1, 1), ("gl", 2, 2), ("gl", 3, 1), ("gl", 3, 2), ("osp", 3, 2)],
)
def test_class_membership_agreement_other_entries(name, m, n):
    from conftest import built_relation

    rs = catalog(name, m, n)
    rel = built_relation(name, m, n)
    rng = random.Random(23)
    for _ in range(500):
        x = tuple(rng.randint(-2, 2) for _ in range(rs.dim))
        y = tuple(rng.randint(-2, 2) for _ in range(rs.dim))
        ok, _ = rs.class_membership(x, y)
        assert ok == rel.membership(x, y)


def test_describe_component(gl21):
    rs = catalog("gl", 2, 1)
    for comp in gl21.components:
        w, s = rs.describe_component(comp)
        v0 = orth_complement(rs.form, s.span_in(rs.dim))
        from lagrel.linear_relations import compose, graph, idempotent_relation

        rebuilt = compose(idempotent_relation(rs.form, v0), graph(w))
        assert rebuilt == comp


def test_reduce_by_root_gl11():
    rs = catalog("gl", 1, 1)
    red = rs.reduce_by_root((1, -1))
    assert red.dim == 0
    assert red.roots == ()


def test_reduce_by_root_gl21():
    rs = catalog("gl", 2, 1)
    red = rs.reduce_by_root((1, 0, -1))
    assert red.dim == 1
    assert red.roots == ()


def test_reduce_by_root_gl22_is_gl11():
    rs = catalog("gl", 2, 2)
    red = rs.reduce_by_root((1, 0, -1, 0))
    assert red.dim == 2
    assert len(red.roots) == 2
    assert all(red.form.pairing(r, r) == 0 for r in red.roots)
    assert red.validate().ok


def test_reduce_by_root_rejects_anisotropic():
    with pytest.raises(ValueError):
        catalog("gl", 2, 1).reduce_by_root((1, -1, 0))


@pytest.mark.parametrize(
    "name,m,n",
    [("gl", m, n) for m in range(0, 4) for n in range(0, 4) if 1 <= m + n <= 4],
)
def test_reduction_square_commutes(name, m, n):
    rs = catalog(name, m, n)
    rel = rs.build_relation(check=False)
    for alpha in rs.iso_pairs():
        v0 = orth_complement(rs.form, Subspace.from_vectors([alpha]))
        assert rel.reduce(v0) == rs.reduce_by_root(alpha).build_relation(check=False)


def test_payload_round_trip():
    rs = catalog("osp", 3, 2)
    assert rootsystem_from_payload(rootsystem_to_payload(rs)) == rs
