"""End-to-end tests of the spirallab command line interface."""

import json

import pytest

from spirallab.cli import main
from spirallab.report import SCHEMA, determinism_hash


def run(tmp_path, *argv):
    out = tmp_path / "report.json"
    code = main([*argv, "--out", str(out)])
    payload = json.loads(out.read_text()) if out.exists() else None
    return code, payload


def test_covering_pass(tmp_path):
    code, rep = run(tmp_path, "covering", "--fn", "koebe",
                    "--x0", "0,0", "--alpha", "0.5")
    assert code == 0
    assert rep["schema"] == SCHEMA
    assert rep["pass"] is True
    assert abs(rep["predicted_radius"] - 0.125) < 1e-12
    assert rep["measured_radius_lower"] >= 0.125 - rep["tolerance"]


def test_covering_shifted(tmp_path):
    code, rep = run(tmp_path, "covering", "--fn", "identity",
                    "--x0", "0,0", "--alpha", "0.3", "--beta", "0.5,0")
    assert code == 0
    assert abs(rep["predicted_radius"] - 0.1) < 1e-12
    assert abs(rep["secondary_radius"] - 0.05) < 1e-12


def test_covering_region_csv(tmp_path):
    csv_path = tmp_path / "region.csv"
    code, rep = run(tmp_path, "covering", "--fn", "koebe", "--x0", "0,0",
                    "--alpha", "0.5", "--dump-region", str(csv_path))
    assert code == 0
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0] == "x_re,x_im,in_omega"
    assert len(lines) > 100


def test_koenigs(tmp_path):
    gen = tmp_path / "gen.json"
    gen.write_text(json.dumps(
        {"poly": [[0, 0], [1, 0], [-1, 0]], "kind": "dilation",
         "tau": [0, 0], "mu": [1, 0]}))
    csv_path = tmp_path / "h.csv"
    code, rep = run(tmp_path, "koenigs", "--gen", str(gen),
                    "--out-csv", str(csv_path))
    assert code == 0 and rep["pass"]
    assert rep["linearization_residual"] <= 1e-8
    assert csv_path.exists()


def test_flow_exponential(tmp_path):
    gen = tmp_path / "gen.json"
    gen.write_text(json.dumps(
        {"poly": [[0, 0], [1, 0]], "kind": "dilation",
         "tau": [0, 0], "mu": [1, 0]}))
    code, rep = run(tmp_path, "flow", "--gen", str(gen),
                    "--z0", "0.5,0", "--t", "1.0")
    assert code == 0
    import math
    assert abs(rep["endpoint"][0] - 0.5 * math.exp(-1)) < 1e-8
    assert abs(rep["endpoint"][1]) < 1e-10


def test_spiral_check(tmp_path):
    code, rep = run(tmp_path, "spiral-check", "--fn", "koebe", "--mu", "1,0")
    assert code == 0 and rep["margin"] > 0
    code, rep = run(tmp_path, "spiral-check", "--fn", "koebe",
                    "--mu", "0.05,1")
    assert code == 1 and rep["margin"] < 0


def test_sharp_bound(tmp_path):
    code, rep = run(tmp_path, "sharp-bound", "--lambda", "1,1", "--r", "1")
    assert code == 0 and rep["pass"]
    assert abs(rep["infimum"] - 0.5) < 1e-3
    assert abs(rep["limit_zero"] - 0.5) < 1e-12


def test_extend_and_determinism(tmp_path):
    q = tmp_path / "q.json"
    q.write_text(json.dumps(
        {"degree": 2, "terms": [{"exps": [2], "coef": [0.25, 0]}]}))
    args = ("extend", "--fn", "koebe", "--r", "2", "--m", "1",
            "--Q", str(q), "--mu", "1,0", "--lambda", "1,0",
            "--samples", "300", "--times", "0.5,2", "--seed", "11")
    code1, rep1 = run(tmp_path, *args)
    code2, rep2 = run(tmp_path, *args)
    assert code1 == code2 == 0
    assert rep1["failures"] == 0
    assert rep1["determinism_hash"] == rep2["determinism_hash"]
    # and the hash actually covers the payload
    assert rep1["determinism_hash"] == determinism_hash(
        {k: v for k, v in rep1.items() if k != "determinism_hash"})


def test_gen_extend(tmp_path):
    gen = tmp_path / "gen.json"
    gen.write_text(json.dumps(
        {"poly": [[0, 0], [1, 0], [-1, 0]], "kind": "dilation",
         "tau": [0, 0], "mu": [1, 0]}))
    q = tmp_path / "q.json"
    q.write_text(json.dumps(
        {"degree": 2, "terms": [{"exps": [2], "coef": [0.25, 0]}]}))
    code, rep = run(tmp_path, "gen-extend", "--gen", str(gen),
                    "--lambda", "1,0", "--r", "2", "--Q", str(q),
                    "--samples", "40", "--flows", "3", "--T", "2")
    assert code == 0 and rep["pass"]
    assert rep["conjugation_residual"] <= 1e-8
    assert rep["dh_identity_residual"] <= 1e-9
    assert rep["ball_exits"] == 0


def test_usage_errors_exit_2(tmp_path):
    assert main(["covering", "--fn", "koebe", "--x0", "2,0",
                 "--alpha", "0.5"]) == 2
    assert main(["covering", "--fn", "koebe", "--x0", "0,0",
                 "--alpha", "0.9", "--beta", "0.5,0"]) == 2
    assert main(["flow", "--gen", "/nonexistent.json",
                 "--z0", "0,0", "--t", "1"]) == 2


def test_complex_encoding_is_re_im_pairs(tmp_path):
    code, rep = run(tmp_path, "covering", "--fn", "koebe",
                    "--x0", "0.2,0.1", "--alpha", "0.4")
    assert code == 0
    assert isinstance(rep["center"], list) and len(rep["center"]) == 2
