import json

import numpy as np
import pytest

from hermgeo import cli, models, reportio


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_model(tmp_path, name, fname=None, **params):
    chart = models.instantiate(name, **params)
    path = tmp_path / (fname or f"{name}.json")
    path.write_text(reportio.dump_report(reportio.chart_to_dict(chart)),
                    encoding="utf-8")
    return str(path)


def write_sphere_immersion(tmp_path, r=2.0):
    doc = {
        "name": "r3_with_sphere", "dim": 3,
        "coordinates": ["x", "y", "z"],
        "metric": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
        "immersion": {
            "coordinates": ["u", "v"],
            "map": [f"{r}*sin(u)*cos(v)", f"{r}*sin(u)*sin(v)", f"{r}*cos(u)"],
        },
    }
    path = tmp_path / "sphere.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def test_models_list(capsys):
    code, out, _ = run_cli(capsys, "models", "list")
    assert code == 0
    doc = json.loads(out)
    assert [m["name"] for m in doc["models"]] == [
        "flat_kahler", "round_sphere", "hyperbolic", "product_K",
        "fubini_study", "s6_nearly_kahler"]


def test_models_emit_roundtrip(tmp_path, capsys):
    out_path = tmp_path / "fs.json"
    code, _, _ = run_cli(capsys, "models", "emit", "fubini_study",
                         "--param", "m=2", "--out", str(out_path))
    assert code == 0
    chart, immersion = reportio.load_manifold_file(str(out_path))
    assert chart.dim == 4 and chart.has_j() and immersion is None


def test_models_emit_unknown(capsys):
    code, _, err = run_cli(capsys, "models", "emit", "not_a_model")
    assert code == 2
    assert "unknown model" in err


def test_analyze_round_sphere(tmp_path, capsys):
    path = write_model(tmp_path, "round_sphere", n=4, r=1.0)
    code, out, _ = run_cli(capsys, "analyze", path, "--point", "0.1,0.2,0.0,-0.1")
    assert code == 0
    doc = json.loads(out)
    entry = doc["points"][0]
    assert entry["scalar_curvature"] == pytest.approx(12.0, abs=1e-8)
    assert entry["weyl_norm"] <= 1e-10


def test_analyze_hermitian_fields(tmp_path, capsys):
    path = write_model(tmp_path, "fubini_study", m=2)
    code, out, _ = run_cli(capsys, "analyze", path)
    assert code == 0
    doc = json.loads(out)
    entry = doc["points"][0]
    assert entry["holomorphic_sectional"]["mean"] == pytest.approx(4.0, abs=1e-8)
    assert entry["constant_type"]["mean"] == pytest.approx(0.0, abs=1e-8)
    assert "checks" in doc and "identity_residuals" in doc
    # pass flags agree with residual-vs-tolerance comparison in the report
    for check in doc["checks"]:
        assert check["pass"] == (check["residual"] <= check["tolerance"])


def test_analyze_weyl_dim_too_low(tmp_path, capsys):
    path = write_model(tmp_path, "hyperbolic", n=2)
    code, _, err = run_cli(capsys, "analyze", path, "--weyl")
    assert code == 3
    assert "dimension" in err


def test_analyze_bad_point(tmp_path, capsys):
    path = write_model(tmp_path, "round_sphere")
    code, _, err = run_cli(capsys, "analyze", path, "--point", "1,2")
    assert code == 2


def test_analyze_missing_file(capsys):
    code, _, err = run_cli(capsys, "analyze", "/nonexistent.json")
    assert code == 2


def test_analyze_malformed_metric(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({
        "name": "bad", "dim": 2, "coordinates": ["x", "y"],
        "metric": [["1", "0"], ["0", "sin("]],
    }), encoding="utf-8")
    code, _, err = run_cli(capsys, "analyze", str(path))
    assert code == 2


def test_analyze_singular_metric(tmp_path, capsys):
    path = tmp_path / "sing.json"
    path.write_text(json.dumps({
        "name": "sing", "dim": 2, "coordinates": ["x", "y"],
        "metric": [["x", "0"], ["0", "1"]],
    }), encoding="utf-8")
    code, _, err = run_cli(capsys, "analyze", str(path), "--point", "0,0")
    assert code == 3


def test_classify_product(tmp_path, capsys):
    path = write_model(tmp_path, "product_K", K=1.0)
    code, out, _ = run_cli(capsys, "classify", path,
                           "--point", "0.1,-0.2,0.07,0.03")
    assert code == 0
    checks = {c["name"]: c for c in json.loads(out)["checks"]}
    assert checks["kahler"]["pass"]
    assert checks["conformally_flat"]["pass"]


def test_classify_no_structure(tmp_path, capsys):
    path = write_model(tmp_path, "round_sphere")
    code, _, err = run_cli(capsys, "classify", path)
    assert code == 2
    assert "almost complex structure" in err


def test_submanifold_sphere(tmp_path, capsys):
    path = write_sphere_immersion(tmp_path, r=2.0)
    code, out, _ = run_cli(capsys, "submanifold", path, "--point", "0.8,0.4")
    assert code == 0
    entry = json.loads(out)["points"][0]
    assert entry["mean_curvature_norm"] == pytest.approx(0.5, abs=1e-8)
    assert entry["umbilicity_residual"] <= 1e-10
    assert entry["totally_umbilical"] and not entry["totally_geodesic"]
    assert entry["parallel_mean_curvature"]
    assert entry["codazzi_2_2_residual"] <= 1e-6


def test_submanifold_requires_block(tmp_path, capsys):
    path = write_model(tmp_path, "round_sphere")
    code, _, err = run_cli(capsys, "submanifold", path)
    assert code == 2
    assert "immersion" in err


def test_verify_theorem(capsys):
    code, out, _ = run_cli(capsys, "verify-theorem", "--m", "2", "--frames", "32")
    assert code == 0
    doc = json.loads(out)
    assert doc["theorem"]["pass"] and doc["schouten"]["pass"]
    assert doc["theorem"]["nullspace_dim"] == 10
    assert doc["containment_residual"] <= 1e-9


def test_verify_theorem_bad_m(capsys):
    code, _, err = run_cli(capsys, "verify-theorem", "--m", "9")
    assert code == 2


def test_usage_error_no_command(capsys):
    assert cli.main([]) == 2


def test_reports_byte_identical(tmp_path, capsys):
    path = write_model(tmp_path, "s6_nearly_kahler")
    _, out_a, _ = run_cli(capsys, "analyze", path, "--seed", "3",
                          "--point", "0.1,0.0,-0.2,0.3,0.05,0.0")
    _, out_b, _ = run_cli(capsys, "analyze", path, "--seed", "3",
                          "--point", "0.1,0.0,-0.2,0.3,0.05,0.0")
    assert out_a == out_b
    _, out_c, _ = run_cli(capsys, "verify-theorem", "--m", "2", "--frames", "16")
    _, out_d, _ = run_cli(capsys, "verify-theorem", "--m", "2", "--frames", "16")
    assert out_c == out_d


def test_report_floats_survive_roundtrip(tmp_path, capsys):
    path = write_model(tmp_path, "fubini_study", m=2)
    _, out, _ = run_cli(capsys, "classify", path, "--point", "0.1,0.2,0.0,-0.1")
    doc = json.loads(out)
    # 17 significant digits: re-serializing the parsed floats is lossless
    assert reportio.dump_report(doc) == out
