"""Lagrangian relation algebra: composition, idempotents, canonical data."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from lagrel.exact_linalg import BilinearForm, Matrix, Subspace, orth_complement
from lagrel.linear_relations import (
    Isometry,
    LinearRelation,
    canonical_data,
    classify_idempotent,
    compose,
    diagonal,
    graph,
    idempotent_relation,
    inverse,
    isometry_of_graph,
    random_isometry,
    random_lagrangian,
    relation_from_data,
    relation_from_payload,
    relation_pairing,
    relation_to_payload,
    standard_form,
    suite_form,
)

GL11 = BilinearForm.diagonal([1, -1])


def iso_line():
    return Subspace.from_vectors([[1, -1]])


def test_relation_pairing_examples():
    form = standard_form(2, 0)
    v = ((1, 0), (1, 0))
    assert relation_pairing(form, v, v) == 0
    e1 = ((1, 0), (0, 0))
    assert relation_pairing(form, e1, e1) == 1
    rng = random.Random(3)
    for _ in range(20):
        x = tuple(rng.randint(-3, 3) for _ in range(2))
        y = tuple(rng.randint(-3, 3) for _ in range(2))
        assert relation_pairing(form, (x, y), (x, y)) == form.pairing(x, x) - form.pairing(y, y)


def test_diagonal_is_lagrangian():
    d = diagonal(suite_form(3))
    assert d.is_lagrangian
    assert d.atypicality == 0


def test_graph_of_non_isometry_rejected():
    with pytest.raises(ValueError):
        Isometry(GL11, Matrix([[2, 0], [0, 1]]))


def test_graph_of_non_isometry_is_not_isotropic():
    # building the graph subspace by hand: {(v, Av)} for A doubling e1
    rows = [[1, 0, 2, 0], [0, 1, 0, 1]]
    rel = LinearRelation(GL11, Subspace.from_vectors(rows, ambient_dim=4))
    assert not rel.is_isotropic
    assert not rel.is_lagrangian


def test_graph_composition_is_matrix_product():
    rng = random.Random(5)
    form = suite_form(3)
    s = random_isometry(form, rng)
    t = random_isometry(form, rng)
    assert compose(graph(s), graph(t)) == graph(t.compose(s))
    assert compose(graph(s), graph(s.inverse())) == diagonal(form)
    assert isometry_of_graph(graph(s)) == s


def test_inverse_is_involution():
    rng = random.Random(6)
    form = suite_form(4)
    rel = random_lagrangian(form, rng)
    assert inverse(inverse(rel)) == rel
    assert inverse(diagonal(form)) == diagonal(form)
    assert rel.atypicality == inverse(rel).atypicality


def test_idempotent_examples():
    e = idempotent_relation(GL11, iso_line())
    assert e.is_lagrangian
    assert compose(e, e) == e
    assert e.atypicality == 1
    # the class of 0 is the whole isotropic line
    assert e.contains_pair((0, 0), (3, -3))
    assert not e.contains_pair((1, 0), (0, 1))
    assert classify_idempotent(e) == iso_line()


def test_idempotent_full_space_is_diagonal():
    form = suite_form(3)
    assert idempotent_relation(form, Subspace.full(3)) == diagonal(form)


def test_idempotent_requires_coisotropic():
    with pytest.raises(ValueError):
        idempotent_relation(suite_form(4), Subspace.from_vectors([[1, 0, 0, 0]]))


def test_classify_rejects_non_idempotent():
    rng = random.Random(9)
    form = suite_form(2)
    s = Isometry.reflection(form, (1, 0))
    with pytest.raises(ValueError):
        classify_idempotent(graph(s))


def test_atypicality_of_idempotent_is_codimension():
    form = suite_form(4)
    rng = random.Random(4)
    for _ in range(20):
        rel = random_lagrangian(form, rng)
        assert rel.dim - rel.p1.dim == rel.dim - rel.p2.dim
        e = compose(rel, inverse(rel))
        v0 = classify_idempotent(e)
        assert v0 == rel.p1
        assert e.atypicality == 4 - v0.dim


def test_kernel_orthogonality_lemma():
    rng = random.Random(8)
    for dim in (2, 3, 4, 5):
        form = suite_form(dim)
        for _ in range(25):
            rel = random_lagrangian(form, rng)
            k2_first = [r[:dim] for r in rel.k2.rows]
            p1k2 = (
                Subspace.from_vectors([tuple(Fraction(x) for x in r) for r in k2_first], ambient_dim=dim)
                if k2_first
                else Subspace.zero(dim)
            )
            assert orth_complement(form, p1k2) == rel.p1
            # image subspaces are coisotropic
            assert rel.p1.contains(orth_complement(form, rel.p1))
            assert rel.p2.contains(orth_complement(form, rel.p2))


def test_weyl_action_identities():
    rng = random.Random(10)
    form = suite_form(4)
    for _ in range(15):
        rel = random_lagrangian(form, rng)
        s = random_isometry(form, rng)
        moved = compose(rel, graph(s))
        assert moved.p1 == rel.p1
        assert moved.p2 == rel.p2.transform(s.matrix)
        v0 = rel.p1
        conj = compose(compose(graph(s.inverse()), idempotent_relation(form, v0)), graph(s))
        assert conj == idempotent_relation(form, v0.transform(s.matrix))


def test_canonical_data_examples():
    form = suite_form(3)
    rng = random.Random(12)
    s = random_isometry(form, rng)
    v0, v0p, alpha = canonical_data(graph(s))
    assert v0 == Subspace.full(3) and v0p == Subspace.full(3)
    assert alpha == s.matrix
    e = idempotent_relation(GL11, iso_line())
    v0, v0p, alpha = canonical_data(e)
    assert v0 == v0p == iso_line()
    assert alpha == Matrix((), cols=0)  # zero-dimensional quotient


def test_canonical_data_round_trip_random():
    rng = random.Random(13)
    for dim in (2, 3, 4):
        form = suite_form(dim)
        for _ in range(30):
            rel = random_lagrangian(form, rng)
            v0, v0p, alpha = canonical_data(rel)
            assert relation_from_data(form, v0, v0p, alpha) == rel


def test_composition_monoid_laws_random():
    rng = random.Random(14)
    for dim in (2, 3, 4, 5):
        form = suite_form(dim)
        for _ in range(30):
            a = random_lagrangian(form, rng)
            b = random_lagrangian(form, rng)
            c = compose(a, b)
            assert c.is_lagrangian and c.dim == dim
            assert max(a.atypicality, b.atypicality) <= c.atypicality
            assert c.atypicality <= a.atypicality + b.atypicality
            assert compose(a, inverse(a)) == idempotent_relation(form, a.p1)


def test_composition_is_associative_with_unit():
    rng = random.Random(16)
    for dim in (2, 3, 4):
        form = suite_form(dim)
        unit = diagonal(form)
        for _ in range(20):
            a = random_lagrangian(form, rng)
            b = random_lagrangian(form, rng)
            c = random_lagrangian(form, rng)
            assert compose(compose(a, b), c) == compose(a, compose(b, c))
            assert compose(a, unit) == a
            assert compose(unit, a) == a


def test_form_mismatch_raises():
    a = diagonal(suite_form(2))
    b = diagonal(BilinearForm.diagonal([1, 1]))
    with pytest.raises(ValueError):
        compose(a, b)


def test_relation_payload_round_trip():
    rng = random.Random(15)
    rel = random_lagrangian(suite_form(3), rng)
    assert relation_from_payload(relation_to_payload(rel)) == rel
