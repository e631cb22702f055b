import json
import math
import subprocess
import sys

import numpy as np
import pytest

from projray import jsonio
from projray.cli import main

S = 1 / math.sqrt(2)


def run(tmp_path, command, payload=None, *extra):
    out = tmp_path / "out.json"
    argv = [command, "--output", str(out), *extra]
    if payload is not None:
        inp = tmp_path / "in.json"
        inp.write_text(json.dumps(payload))
        argv += ["--input", str(inp)]
    code = main(argv)
    text = out.read_text() if out.exists() else None
    return code, text


def mat(M):
    return jsonio.matrix_to_json(np.asarray(M, dtype=complex))


def test_metric_example(tmp_path):
    code, text = run(tmp_path, "metric", {"x": [1, 0], "y": [0, 1]})
    assert code == 0
    r = json.loads(text)
    assert r["chordal"] == pytest.approx(1.41421356, abs=1e-8)
    assert r["riemannian"] == pytest.approx(1.57079632, abs=1e-8)
    assert r["projector"] == pytest.approx(2.0)


def test_separation_example(tmp_path):
    frame = [[1, 0], [0, 1], [S, S], [S, [0, S]]]
    code, text = run(tmp_path, "separation-test", {"vectors": frame})
    r = json.loads(text)
    assert code == 0 and r["rank"] == 4 and r["separates_ball"] is True


def test_counterexample_emits_certificate(tmp_path):
    code, text = run(tmp_path, "counterexample", [[1, 0], [S, S], [S, [0, S]]])
    r = json.loads(text)
    assert code == 0 and r["status"] == "witness"
    A = jsonio.parse_matrix(r["witness"]["certificate"])
    assert A.shape == (2, 2) and r["h_gap"] < 1e-9


def test_ba_split_example(tmp_path):
    e = np.eye(2)
    algebra = [mat(np.kron(np.outer(e[i], e[j]), e)) for i in range(2) for j in range(2)]
    H = np.kron(np.diag([0.0, 1.0]), e) + np.kron(e, np.diag([1.0, 3.0]))
    code, text = run(tmp_path, "ba-split", {"H": mat(H), "algebra": algebra})
    r = json.loads(text)
    assert code == 0
    assert max(r["residuals"].values()) < 1e-9
    np.testing.assert_allclose(jsonio.parse_matrix(r["B"]), np.kron(e, np.diag([1.0, 3.0])), atol=1e-12)


def test_matrix_commands(tmp_path):
    X = [[0, 1], [1, 0]]
    Z = [[1, 0], [0, -1]]
    code, text = run(tmp_path, "commutant", {"generators": [X, Z]})
    assert code == 0 and json.loads(text)["commutant_dim"] == 1
    code, text = run(tmp_path, "min-energy", {"H": [[-1, 0], [0, 2]]})
    assert code == 0 and json.loads(text)["mu0"] == 1.0
    code, text = run(tmp_path, "descent-check", {"generators": [X, Z], "H": [[1, 0], [0, 1]]})
    assert code == 0 and json.loads(text)["implication_holds"] is True
    code, text = run(tmp_path, "rigidity-check", {"X": [[[0, 1], 0], [0, [0, 2]]], "Y": [[[0, 3], 0], [0, 0]]})
    assert code == 0 and json.loads(text)["claim_holds"] is True


def test_geometry_commands(tmp_path):
    code, text = run(tmp_path, "midpoint", {"x": [1, 0], "y": [S, S]})
    m = jsonio.parse_vector(json.loads(text)["midpoint"])
    assert code == 0 and abs(m[0]) == pytest.approx(math.cos(math.pi / 8))
    code, text = run(tmp_path, "chain", {"x": [1, 0], "y": [S, S], "depth": 2})
    assert code == 0 and len(json.loads(text)["rays"]) == 5
    code, text = run(tmp_path, "section", {"g": [[[0, 1], 0], [0, [0, 1]]], "v0": [1, 0]})
    np.testing.assert_allclose(jsonio.parse_matrix(json.loads(text)["section"]), np.eye(2), atol=1e-15)


def test_components_command(tmp_path):
    code, text = run(tmp_path, "components", [[1, 0, 0], [0, 1, 0], [0, 0, 1], [0, S, S]])
    r = json.loads(text)
    assert code == 0 and r["partition"] == [[0], [1, 2, 3]]


def test_continuity_probe_command(tmp_path):
    spec = {"blocks": [{"dim": 1, "mode": "continuous", "theta": "0"},
                       {"dim": 1, "mode": "twisted", "character": 1}],
            "ray": [S, S], "sequence": {"length": 12}}
    code, text = run(tmp_path, "continuity-probe", spec)
    r = json.loads(text)
    assert code == 0 and r["verdict"] == "DISCONTINUITY_WITNESS"
    assert len(r["components"]) == 2 and r["ray_component"] is None


def test_precondition_violation_exit_2(tmp_path):
    code, text = run(tmp_path, "midpoint", {"x": [1, 0], "y": [0, 1]})
    err = json.loads(text)
    assert code == 2
    assert err["code"] == "orthogonal_rays" and "overlap" in err["context"]
    code, text = run(tmp_path, "ba-split", {"H": [[0, 1], [1, 0]], "generators": [[[1, 0], [0, 2]]]})
    err = json.loads(text)
    assert code == 2 and err["code"] == "algebra_not_invariant" and err["context"]["residual"] > 0


def test_parse_and_io_errors_exit_1(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["metric", "--input", str(bad)]) == 1
    assert main(["metric", "--input", str(tmp_path / "missing.json")]) == 1
    assert run(tmp_path, "metric", {"x": [1, 0]})[0] == 1
    assert main(["metric"]) == 1


def test_unknown_command_rejected():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code != 0


def test_sweep_is_deterministic(tmp_path):
    a = run(tmp_path, "sweep", None, "--trials", "5", "--seed", "11", "--dims", "2,3")[1]
    b = run(tmp_path, "sweep", None, "--trials", "5", "--seed", "11", "--dims", "2,3")[1]
    assert a == b
    r = json.loads(a)
    assert r["all_passed"] and set(r) == {"descent", "rigidity", "witness", "all_passed"}
    c = run(tmp_path, "sweep", {"seed": 11, "trials": 5, "dims": [2, 3],
                                "suites": ["descent", "rigidity", "witness"]})[1]
    assert c == a


def test_sweep_config_suites(tmp_path):
    code, text = run(tmp_path, "sweep", {"suites": ["metric", "hull", "split"], "trials": 5})
    r = json.loads(text)
    assert code == 0 and r["all_passed"] and r["split"]["trials"] == 5


def test_reports_reparse_and_roundtrip():
    v = np.array([1 / 3, -2j / 7, 1e-300 + 0.1j])
    text = jsonio.dumps({"v": v, "M": np.outer(v, v), "x": 0.1, "k": 3, "ok": True, "none": None})
    back = json.loads(text)
    np.testing.assert_array_equal(jsonio.parse_vector(back["v"]), v)
    np.testing.assert_array_equal(jsonio.parse_matrix(back["M"]), np.outer(v, v))
    assert back["x"] == 0.1 and back["k"] == 3 and back["ok"] is True and back["none"] is None
    assert jsonio.dumps(back) == jsonio.dumps(json.loads(jsonio.dumps(back)))


def test_jsonio_rejects_malformed():
    with pytest.raises(ValueError):
        jsonio.parse_complex([1, 2, 3])
    with pytest.raises(ValueError):
        jsonio.parse_matrix([[1, 2], [3]])


def test_module_entry_point(tmp_path):
    inp = tmp_path / "in.json"
    inp.write_text('{"x": [1, 0], "y": [1, 0]}')
    proc = subprocess.run([sys.executable, "-m", "projray", "metric", "--input", str(inp)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["riemannian"] == 0.0
