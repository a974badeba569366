"""Command line front end: JSON analysis reports and verification suites.

Exit codes: 0 success, 1 invalid input, 2 closure bound exceeded.  All
output is canonical (sorted keys, "p/q" rationals), so identical inputs
produce byte-identical reports.  Convention note embedded in every report:
the pairing on V x V is <v|v'> - <w|w'>.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys

from . import __version__
from .exact_linalg import (
    BilinearForm,
    Subspace,
    as_vector,
    matrix_from_payload,
    matrix_to_payload,
    orth_complement,
    rational,
    subspace_to_payload,
    vector_to_payload,
)
from .invariants import (
    GradedInvariantBasis,
    Separation,
    contains_polynomial,
    discriminant_polynomial,
    independent_evaluation_points,
    invariant_space,
    polynomial_to_payload,
    product_invariant_check,
    separate,
    weyl_invariant_space,
)
from .linear_relations import (
    canonical_data,
    classify_idempotent,
    compose,
    relation_from_data,
    relation_from_payload,
    inverse,
    random_lagrangian,
    suite_form,
)
from .relation_monoid import (
    ClosureBoundExceeded,
    ClosureConfig,
    closure,
)
from .wgrs import (
    catalog,
    rootsystem_from_payload,
    rootsystem_to_payload,
)

BILINEAR_CONVENTION = "B((v,w),(v',w')) = <v|v'> - <w|w'>"


def _load_json(path: str) -> tuple[dict, bytes]:
    with open(path, "rb") as fh:
        raw = fh.read()
    return json.loads(raw.decode("utf-8")), raw


def _relation_from_file(payload: dict, max_components: int | None):
    """Build the relation described by a wgrs or generator file."""
    config = ClosureConfig(max_components=max_components) if max_components else None
    if "roots" in payload:
        rs = rootsystem_from_payload(payload)
        report = rs.validate()
        if not report.ok:
            raise ValueError("input is not a valid root system: " + "; ".join(report.failures[:3]))
        return rs, rs.build_relation(config=config)
    if "generators" in payload:
        gram = payload["form"]
        form = BilinearForm(matrix_from_payload(gram, cols=len(gram)))
        gens = [relation_from_payload(g, form=form) for g in payload["generators"]]
        for g in gens:
            if not g.is_lagrangian:
                raise ValueError("generator is not Lagrangian")
        return None, closure(form, gens, config)
    raise ValueError("input file needs either a 'roots' or a 'generators' key")


def _emit(payload: dict, out: str | None):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report_header(raw: bytes) -> dict:
    return {
        "input_digest": hashlib.sha256(raw).hexdigest(),
        "tool_version": __version__,
        "bilinear_convention": BILINEAR_CONVENTION,
    }


def cmd_analyze(args) -> int:
    payload, raw = _load_json(args.input)
    _, rel = _relation_from_file(payload, args.max_components)
    ok_1reg, witness = rel.is_one_regular()
    report = _report_header(raw)
    report.update(
        {
            "n": rel.n,
            "num_components": len(rel),
            "weyl_order": len(rel.weyl_group),
            "atypicality_histogram": {str(k): v for k, v in rel.atypicality_histogram().items()},
            "discriminant": [subspace_to_payload(u) for u in rel.discriminant()],
            "one_regular": ok_1reg,
            "semiregular": rel.is_semiregular(),
            "invariant_dimensions": [len(invariant_space(rel, d)) for d in range(args.degree + 1)],
        }
    )
    if args.x is not None and args.y is not None:
        x = _parse_vector(args.x)
        y = _parse_vector(args.y)
        report["separation"] = _separation_payload(separate(rel, x, y, args.dmax))
    _emit(report, args.out)
    return 0


def _parse_vector(text: str):
    return as_vector([rational(part) for part in text.split(",")])


def _separation_payload(result: Separation) -> dict:
    out = {"status": result.status}
    if result.status == "separated":
        out["degree"] = result.degree
        out["polynomial"] = polynomial_to_payload(result.polynomial)
        out["values"] = [str(result.values[0]), str(result.values[1])]
    return out


def cmd_invariants(args) -> int:
    payload, raw = _load_json(args.input)
    _, rel = _relation_from_file(payload, args.max_components)
    graded = GradedInvariantBasis(rel, args.degree)
    report = _report_header(raw)
    report.update(
        {
            "n": rel.n,
            "invariant_dimensions": graded.dimensions(),
            "bases": {
                str(d): [polynomial_to_payload(p) for p in graded.basis(d)]
                for d in range(args.degree + 1)
            },
        }
    )
    _emit(report, args.out)
    return 0


def cmd_separate(args) -> int:
    payload, raw = _load_json(args.input)
    _, rel = _relation_from_file(payload, args.max_components)
    result = separate(rel, _parse_vector(args.x), _parse_vector(args.y), args.dmax)
    report = _report_header(raw)
    report["separation"] = _separation_payload(result)
    report["membership"] = result.status == "equivalent"
    _emit(report, args.out)
    return 0


def cmd_discriminant(args) -> int:
    payload, raw = _load_json(args.input)
    _, rel = _relation_from_file(payload, args.max_components)
    disc = discriminant_polynomial(rel)
    report = _report_header(raw)
    report.update(
        {
            "degree": disc.degree,
            "polynomial": polynomial_to_payload(disc.polynomial),
            "hyperplanes": [subspace_to_payload(h) for h in disc.hyperplanes],
        }
    )
    _emit(report, args.out)
    return 0


# ---------------------------------------------------------------------------
# wgrs subcommands.
# ---------------------------------------------------------------------------


def cmd_wgrs_build(args) -> int:
    rs = catalog(args.family, int(args.m), int(args.n))
    _emit(rootsystem_to_payload(rs), args.out)
    return 0


def cmd_wgrs_validate(args) -> int:
    payload, raw = _load_json(args.input)
    rs = rootsystem_from_payload(payload)
    report = rs.validate()
    out = _report_header(raw)
    out.update(
        {
            "valid": report.ok,
            "failures": list(report.failures),
            "num_roots": len(rs.roots),
            "isotropic_roots": [vector_to_payload(r) for r in rs.iso_roots],
        }
    )
    _emit(out, args.out)
    return 0 if report.ok else 1


def cmd_wgrs_relation(args) -> int:
    payload, raw = _load_json(args.input)
    rs = rootsystem_from_payload(payload)
    config = ClosureConfig(max_components=args.max_components) if args.max_components else None
    rel = rs.build_relation(config=config)
    report = _report_header(raw)
    report.update(
        {
            "n": rel.n,
            "num_components": len(rel),
            "weyl_order": len(rel.weyl_group),
            "atypicality_histogram": {str(k): v for k, v in rel.atypicality_histogram().items()},
            "components": [matrix_to_payload(c.space.basis) for c in rel.components],
        }
    )
    _emit(report, args.out)
    return 0


def cmd_wgrs_reduce(args) -> int:
    payload, raw = _load_json(args.input)
    rs = rootsystem_from_payload(payload)
    iso = rs.iso_roots
    if not 0 <= args.root < len(iso):
        raise ValueError(f"--root must index the isotropic root list (0..{len(iso) - 1})")
    reduced = rs.reduce_by_root(iso[args.root])
    _emit(rootsystem_to_payload(reduced), args.out)
    return 0


def cmd_wgrs_classes(args) -> int:
    payload, raw = _load_json(args.input)
    rs = rootsystem_from_payload(payload)
    v = _parse_vector(args.v)
    vp = _parse_vector(args.vprime)
    related, witness = rs.class_membership(v, vp)
    report = _report_header(raw)
    report.update({"equivalent": related})
    if witness is not None:
        w, coeffs = witness
        report["witness"] = {
            "isometry": matrix_to_payload(w.matrix),
            "coefficients": [str(c) for c in coeffs],
        }
    _emit(report, args.out)
    return 0


# ---------------------------------------------------------------------------
# Verification suites (seeded, deterministic by default).
# ---------------------------------------------------------------------------


def suite_monoid(seed: int, pairs: int = 1000) -> dict[str, tuple[int, int]]:
    """Monoid laws, atypicality bounds and structure lemmas on random pairs."""
    rng = random.Random(seed)
    counts: dict[str, list[int]] = {
        "composition_lagrangian": [0, 0],
        "kernel_dims_equal": [0, 0],
        "atypicality_bounds": [0, 0],
        "image_is_kernel_complement": [0, 0],
        "inverse_composition_idempotent": [0, 0],
        "canonical_data_round_trip": [0, 0],
    }

    def tally(name, ok):
        counts[name][0 if ok else 1] += 1

    for i in range(pairs):
        dim = 2 + (i % 5)
        form = suite_form(dim)
        a = random_lagrangian(form, rng)
        b = random_lagrangian(form, rng)
        c = compose(a, b)
        tally("composition_lagrangian", c.is_lagrangian and c.dim == dim)
        tally(
            "kernel_dims_equal",
            a.dim - a.p1.dim == a.dim - a.p2.dim and b.dim - b.p1.dim == b.dim - b.p2.dim,
        )
        tally(
            "atypicality_bounds",
            max(a.atypicality, b.atypicality) <= c.atypicality <= a.atypicality + b.atypicality,
        )
        k2_first = a.k2
        first_half = [r[:dim] for r in k2_first.rows]
        p1k2 = Subspace.from_vectors(
            [tuple(map(rational, r)) for r in first_half], ambient_dim=dim
        ) if first_half else Subspace.zero(dim)
        tally("image_is_kernel_complement", orth_complement(form, p1k2) == a.p1)
        e = compose(a, inverse(a))
        tally("inverse_composition_idempotent", classify_idempotent(e) == a.p1)
        v0, v0p, alpha = canonical_data(a)
        tally("canonical_data_round_trip", relation_from_data(form, v0, v0p, alpha) == a)
    return {k: (v[0], v[1]) for k, v in counts.items()}


def suite_wgrs(seed: int) -> dict[str, tuple[int, int]]:
    """Catalog closures match the graph/iso-set description; witnesses verify."""
    counts: dict[str, list[int]] = {
        "component_description": [0, 0],
        "isoset_cardinality": [0, 0],
        "two_step_witness": [0, 0],
    }
    entries = [("gl", m, n) for m in range(0, 4) for n in range(0, 4) if 1 <= m + n <= 4]
    entries.append(("osp", 3, 2))
    for name, a, b in entries:
        rs = catalog(name, a, b)
        try:
            rs.build_relation(check=True)
            counts["component_description"][0] += 1
        except AssertionError:
            counts["component_description"][1] += 1
        mx = rs.maximal_isosets()
        sizes = {s.num_pairs for s in mx}
        counts["isoset_cardinality"][0 if len(sizes) <= 1 else 1] += 1
        for beta in rs.iso_roots:
            for beta_p in rs.iso_roots:
                try:
                    w = rs.two_step_witness(beta, beta_p)
                    ok = w.apply(beta) in (beta_p, tuple(-x for x in beta_p))
                except (ValueError, AssertionError):
                    ok = False
                counts["two_step_witness"][0 if ok else 1] += 1
    return {k: (v[0], v[1]) for k, v in counts.items()}


def suite_invariants(seed: int) -> dict[str, tuple[int, int]]:
    """Graded dimensions and pointwise invariance on catalog relations."""
    rng = random.Random(seed)
    counts: dict[str, list[int]] = {
        "baby_dimensions": [0, 0],
        "pointwise_invariance": [0, 0],
        "weyl_containment": [0, 0],
    }
    rel = catalog("gl", 1, 1).build_relation(check=False)
    dims = [len(invariant_space(rel, d)) for d in range(1, 7)]
    counts["baby_dimensions"][0 if dims == [1, 2, 3, 4, 5, 6] else 1] += 1
    rel21 = catalog("gl", 2, 1).build_relation(check=False)
    for d in (1, 2, 3):
        basis = invariant_space(rel21, d)
        weyl_basis = weyl_invariant_space(list(rel21.weyl_group), d)
        ok = all(contains_polynomial(weyl_basis, f, d) for f in basis)
        counts["weyl_containment"][0 if ok else 1] += 1
        for comp in rel21.components:
            for _ in range(5):
                t = [rational(rng.randint(-3, 3)) for _ in range(comp.dim)]
                point = [
                    sum(t[k] * comp.space.rows[k][i] for k in range(comp.dim))
                    for i in range(2 * rel21.n)
                ]
                x, y = point[: rel21.n], point[rel21.n :]
                ok = all(f.evaluate(x) == f.evaluate(y) for f in basis)
                counts["pointwise_invariance"][0 if ok else 1] += 1
    return {k: (v[0], v[1]) for k, v in counts.items()}


def suite_reduction(seed: int) -> dict[str, tuple[int, int]]:
    """Root-system reduction commutes with relation reduction on the catalog."""
    counts: dict[str, list[int]] = {"reduction_square": [0, 0], "semiregular": [0, 0]}
    for name, a, b in (("gl", 1, 1), ("gl", 2, 1), ("gl", 2, 2)):
        rs = catalog(name, a, b)
        rel = rs.build_relation(check=False)
        counts["semiregular"][0 if rel.is_semiregular() else 1] += 1
        seen = set()
        for alpha in rs.iso_roots:
            key = tuple(sorted([alpha, tuple(-x for x in alpha)]))
            if key in seen:
                continue
            seen.add(key)
            v0 = orth_complement(rs.form, Subspace.from_vectors([alpha]))
            reduced_rel = rel.reduce(v0)
            rebuilt = rs.reduce_by_root(alpha).build_relation(check=False)
            counts["reduction_square"][0 if reduced_rel == rebuilt else 1] += 1
    return {k: (v[0], v[1]) for k, v in counts.items()}


def suite_product(seed: int) -> dict[str, tuple[int, int]]:
    """Product dimension formula and evaluation-matrix utility."""
    counts: dict[str, list[int]] = {
        "product_dimension_formula": [0, 0],
        "evaluation_points": [0, 0],
    }
    rel = catalog("gl", 1, 1).build_relation(check=False)
    for d in range(0, 5):
        ok = product_invariant_check(rel, rel, d)
        counts["product_dimension_formula"][0 if ok else 1] += 1
    basis = invariant_space(rel, 3)
    try:
        points = independent_evaluation_points(basis)
        counts["evaluation_points"][0 if len(points) == len(basis) else 1] += 1
    except ValueError:
        counts["evaluation_points"][1] += 1
    return {k: (v[0], v[1]) for k, v in counts.items()}


SUITES = {
    "monoid": suite_monoid,
    "wgrs": suite_wgrs,
    "invariants": suite_invariants,
    "reduction": suite_reduction,
    "product": suite_product,
}


def cmd_verify(args) -> int:
    if args.suite not in SUITES:
        sys.stderr.write(f"unknown suite: {args.suite} (choose from {sorted(SUITES)})\n")
        return 1
    results = SUITES[args.suite](args.seed)
    failed = 0
    for name, (ok, bad) in sorted(results.items()):
        status = "PASS" if bad == 0 else "FAIL"
        print(f"{status} {name}: {ok} ok, {bad} failed (seed={args.seed})")
        failed += bad
    return 0 if failed == 0 else 1


# ---------------------------------------------------------------------------
# Argument parsing.
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lagrel",
        description="Exact toolkit for Lagrangian equivalence relations and their invariants",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, degree_default=4):
        p.add_argument("input", help="relation or root-system JSON file")
        p.add_argument("--degree", type=int, default=degree_default)
        p.add_argument("--dmax", type=int, default=6)
        p.add_argument("--max-components", type=int, default=None)
        p.add_argument("--out", default=None)

    p = sub.add_parser("analyze", help="full structural report")
    common(p)
    p.add_argument("--x", default=None, help="comma separated rationals")
    p.add_argument("--y", default=None, help="comma separated rationals")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("invariants", help="graded invariant bases")
    common(p)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("separate", help="search for a separating invariant")
    common(p)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.set_defaults(func=cmd_separate)

    p = sub.add_parser("discriminant", help="minimal W-invariant vanishing on the discriminant")
    common(p)
    p.set_defaults(func=cmd_discriminant)

    p = sub.add_parser("verify", help="run a named property suite")
    p.add_argument("suite")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    wg = sub.add_parser("wgrs", help="root system utilities")
    wgsub = wg.add_subparsers(dest="wgrs_command", required=True)

    p = wgsub.add_parser("build", help="emit a catalog root system")
    p.add_argument("family", choices=("gl", "osp"))
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_wgrs_build)

    p = wgsub.add_parser("validate", help="check the root system axioms")
    p.add_argument("input")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_wgrs_validate)

    p = wgsub.add_parser("relation", help="build the induced equivalence relation")
    p.add_argument("input")
    p.add_argument("--max-components", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_wgrs_relation)

    p = wgsub.add_parser("reduce", help="reduce by an isotropic root")
    p.add_argument("input")
    p.add_argument("--root", type=int, required=True, help="index into the isotropic root list")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_wgrs_reduce)

    p = wgsub.add_parser("classes", help="decide equivalence of two points")
    p.add_argument("input")
    p.add_argument("--v", required=True)
    p.add_argument("--vprime", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_wgrs_classes)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ClosureBoundExceeded as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
