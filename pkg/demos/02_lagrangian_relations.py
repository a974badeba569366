"""Linear Lagrangian relations: graphs, collapses, composition, atypicality.

A Lagrangian relation either moves points by an isometry (a graph), or
collapses the radical directions of a coisotropic subspace (an idempotent),
or mixes the two.  Atypicality measures the collapsing part.
"""

import random

from lagrel import (
    Subspace,
    canonical_data,
    classify_idempotent,
    compose,
    diagonal,
    graph,
    idempotent_relation,
    inverse,
    relation_from_data,
)
from lagrel.linear_relations import Isometry, random_lagrangian, suite_form

form = suite_form(4)  # diag(1, 1, -1, -1)
rng = random.Random(1)

print("== graphs of isometries have atypicality 0 ==")
s = Isometry.reflection(form, (1, 1, 0, 0))
gs = graph(s)
print("graph is Lagrangian:", gs.is_lagrangian, " atypicality:", gs.atypicality)
print("graph o inverse graph = diagonal:", compose(gs, graph(s.inverse())) == diagonal(form))

print("\n== idempotents collapse coisotropic subspaces ==")
iso_plane = Subspace.from_vectors([[1, 0, 1, 0], [0, 1, 0, 1]])
v0 = iso_plane  # totally isotropic of half dimension: V0 = V0-perp
from lagrel import orth_complement
v0 = orth_complement(form, iso_plane)
e = idempotent_relation(form, v0)
print("E o E == E:", compose(e, e) == e)
print("atypicality = codimension of V0:", e.atypicality == 4 - v0.dim)
print("classified base:", classify_idempotent(e) == v0)

print("\n== composition stays Lagrangian, atypicality is bounded ==")
for _ in range(3):
    a = random_lagrangian(form, rng)
    b = random_lagrangian(form, rng)
    c = compose(a, b)
    print(
        f"a(L)={a.atypicality} a(L')={b.atypicality} -> a(L' o L)={c.atypicality}",
        "| Lagrangian:", c.is_lagrangian,
    )

print("\n== inverse composition collapses the first image ==")
rel = random_lagrangian(form, rng)
print("L^-1 o L == E_{p1(L)}:", compose(rel, inverse(rel)) == idempotent_relation(form, rel.p1))

print("\n== canonical data is a complete invariant ==")
v0, v0p, alpha = canonical_data(rel)
print("p1 dim:", v0.dim, " p2 dim:", v0p.dim, " quotient map shape:", (alpha.rows, alpha.cols))
print("round trip reconstructs the relation:", relation_from_data(form, v0, v0p, alpha) == rel)
