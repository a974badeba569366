"""Command line behavior: reports, exit codes, determinism."""

from __future__ import annotations

import json

from lagrel.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def build_gl11(tmp_path, capsys):
    path = tmp_path / "gl11.json"
    code, _, _ = run(capsys, "wgrs", "build", "gl", "1", "1", "--out", str(path))
    assert code == 0
    return path


def test_analyze_gl11_report(tmp_path, capsys):
    path = build_gl11(tmp_path, capsys)
    code, out, _ = run(capsys, "analyze", str(path), "--degree", "4")
    assert code == 0
    report = json.loads(out)
    assert report["invariant_dimensions"] == [1, 1, 2, 3, 4]
    assert report["num_components"] == 2
    assert report["weyl_order"] == 1
    assert report["one_regular"] is True
    assert report["semiregular"] is True
    assert "bilinear_convention" in report
    assert report["atypicality_histogram"] == {"0": 1, "1": 1}


def test_analyze_with_separation_certificate(tmp_path, capsys):
    path = build_gl11(tmp_path, capsys)
    code, out, _ = run(capsys, "analyze", str(path), "--degree", "2",
                       "--x", "1,0", "--y", "0,1", "--dmax", "4")
    assert code == 0
    report = json.loads(out)
    assert report["separation"]["status"] == "separated"
    assert report["separation"]["degree"] == 2


def test_analyze_is_deterministic(tmp_path, capsys):
    path = build_gl11(tmp_path, capsys)
    _, out1, _ = run(capsys, "analyze", str(path), "--degree", "3")
    _, out2, _ = run(capsys, "analyze", str(path), "--degree", "3")
    assert out1 == out2


def test_analyze_empty_generators_is_diagonal(tmp_path, capsys):
    path = tmp_path / "triv.json"
    path.write_text(json.dumps({"form": [["1/1", "0/1"], ["0/1", "-1/1"]], "generators": []}))
    code, out, _ = run(capsys, "analyze", str(path), "--degree", "2")
    assert code == 0
    report = json.loads(out)
    assert report["num_components"] == 1
    assert report["invariant_dimensions"] == [1, 2, 3]


def test_analyze_malformed_json_exit_1(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, _, err = run(capsys, "analyze", str(path))
    assert code == 1
    assert err


def test_analyze_non_lagrangian_generator_exit_1(tmp_path, capsys):
    path = tmp_path / "nonlag.json"
    payload = {
        "form": [["1/1", "0/1"], ["0/1", "-1/1"]],
        "generators": [{"space": [["1/1", "0/1", "0/1", "0/1"]]}],
    }
    path.write_text(json.dumps(payload))
    code, _, err = run(capsys, "analyze", str(path))
    assert code == 1
    assert "Lagrangian" in err


def test_closure_bound_exit_2(tmp_path, capsys):
    path = tmp_path / "boost.json"
    payload = {
        "form": [["0/1", "1/1"], ["1/1", "0/1"]],
        "generators": [
            {"space": [["1/1", "0/1", "2/1", "0/1"], ["0/1", "1/1", "0/1", "1/2"]]}
        ],
    }
    path.write_text(json.dumps(payload))
    code, _, err = run(capsys, "analyze", str(path), "--max-components", "32")
    assert code == 2
    assert "closure" in err


def test_invariants_command(tmp_path, capsys):
    path = build_gl11(tmp_path, capsys)
    code, out, _ = run(capsys, "invariants", str(path), "--degree", "3")
    assert code == 0
    report = json.loads(out)
    assert report["invariant_dimensions"] == [1, 1, 2, 3]
    assert report["bases"]["1"] == [{"0,1": "1/1", "1,0": "1/1"}]


def test_separate_command(tmp_path, capsys):
    path = build_gl11(tmp_path, capsys)
    code, out, _ = run(capsys, "separate", str(path), "--x", "1,0", "--y", "0,1")
    assert code == 0
    report = json.loads(out)
    assert report["separation"]["status"] == "separated"
    assert report["separation"]["degree"] == 2
    code, out, _ = run(capsys, "separate", str(path), "--x", "0,0", "--y", "2,-2")
    report = json.loads(out)
    assert report["separation"]["status"] == "equivalent"
    assert report["membership"] is True


def test_discriminant_command(tmp_path, capsys):
    path = build_gl11(tmp_path, capsys)
    code, out, _ = run(capsys, "discriminant", str(path))
    assert code == 0
    report = json.loads(out)
    assert report["degree"] == 1
    assert report["polynomial"] == {"0,1": "1/1", "1,0": "1/1"}


def test_wgrs_validate_command(tmp_path, capsys):
    path = build_gl11(tmp_path, capsys)
    code, out, _ = run(capsys, "wgrs", "validate", str(path))
    assert code == 0
    report = json.loads(out)
    assert report["valid"] is True
    assert report["num_roots"] == 2


def test_wgrs_relation_command(tmp_path, capsys):
    path = build_gl11(tmp_path, capsys)
    code, out, _ = run(capsys, "wgrs", "relation", str(path))
    assert code == 0
    report = json.loads(out)
    assert report["num_components"] == 2
    assert len(report["components"]) == 2


def test_wgrs_reduce_round_trip(tmp_path, capsys):
    path = build_gl11(tmp_path, capsys)
    out_path = tmp_path / "reduced.json"
    code, _, _ = run(capsys, "wgrs", "reduce", str(path), "--root", "0", "--out", str(out_path))
    assert code == 0
    reduced = json.loads(out_path.read_text())
    assert reduced["roots"] == []
    code, out, _ = run(capsys, "wgrs", "validate", str(out_path))
    assert code == 0
    assert json.loads(out)["valid"] is True


def test_wgrs_reduce_bad_index_exit_1(tmp_path, capsys):
    path = build_gl11(tmp_path, capsys)
    code, _, err = run(capsys, "wgrs", "reduce", str(path), "--root", "7")
    assert code == 1
    assert "isotropic" in err


def test_wgrs_classes_command(tmp_path, capsys):
    path = build_gl11(tmp_path, capsys)
    code, out, _ = run(capsys, "wgrs", "classes", str(path), "--v", "0,0", "--vprime", "3,-3")
    assert code == 0
    report = json.loads(out)
    assert report["equivalent"] is True
    assert report["witness"]["coefficients"] == ["3"]
    code, out, _ = run(capsys, "wgrs", "classes", str(path), "--v", "1,0", "--vprime", "0,1")
    assert json.loads(out)["equivalent"] is False


def test_user_supplied_root_system_file(tmp_path, capsys):
    # a non-catalog system loaded from a file: two orthogonal isotropic pairs
    payload = {
        "gram": [
            ["1/1", "0/1", "0/1", "0/1"],
            ["0/1", "-1/1", "0/1", "0/1"],
            ["0/1", "0/1", "1/1", "0/1"],
            ["0/1", "0/1", "0/1", "-1/1"],
        ],
        "roots": [
            ["1/1", "-1/1", "0/1", "0/1"],
            ["-1/1", "1/1", "0/1", "0/1"],
            ["0/1", "0/1", "1/1", "-1/1"],
            ["0/1", "0/1", "-1/1", "1/1"],
        ],
    }
    path = tmp_path / "double.json"
    path.write_text(json.dumps(payload))
    code, out, _ = run(capsys, "wgrs", "validate", str(path))
    assert code == 0 and json.loads(out)["valid"] is True
    code, out, _ = run(capsys, "analyze", str(path), "--degree", "2")
    assert code == 0
    report = json.loads(out)
    assert report["num_components"] == 4
    assert report["one_regular"] is False
    assert report["semiregular"] is True


def test_verify_unknown_suite_exit_1(capsys):
    code, _, err = run(capsys, "verify", "nonsense")
    assert code == 1
    assert "unknown suite" in err


def test_verify_product_suite(capsys):
    code, out, _ = run(capsys, "verify", "product")
    assert code == 0
    assert "PASS" in out and "FAIL" not in out


def test_verify_reduction_suite(capsys):
    code, out, _ = run(capsys, "verify", "reduction")
    assert code == 0


def test_verify_monoid_suite_small_seeded(capsys):
    from lagrel.cli import suite_monoid

    results = suite_monoid(seed=1, pairs=60)
    assert all(bad == 0 for _, bad in results.values())
