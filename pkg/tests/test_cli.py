import json
import math
from pathlib import Path

import numpy as np
import pytest

import lagcat
from lagcat import io
from lagcat.cli import main, run_sweep
from lagcat.composition import Correspondence
from lagcat.polarization import PolarizedSpace
from lagcat.sampling import correspondence_unitary, type2_unitary
from lagcat.superspace import SuperSpace

ROTATION = Path(lagcat.__file__).parent / "data" / "rotation.json"


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(io.dumps(obj))
    return str(path)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip().startswith("{") else out)


def test_golden_rotation(capsys):
    code, rep = run(["check", "-i", str(ROTATION)], capsys)
    assert code == 0
    T = io.matrix_from_json(rep["T"])
    np.testing.assert_allclose(T, [[-math.sqrt(2), 1], [-1, math.sqrt(2)]], atol=1e-12)
    assert rep["lagrangian_graph"]


def test_check_fails_on_non_isotropic(tmp_path, capsys):
    V = SuperSpace(1, 1)
    bad = {"repr": "frame", "space0": io.space_to_json(V), "matrix": io.matrix_to_json(np.eye(2)[:, :1])}
    code, rep = run(["check", "-i", write(tmp_path, "bad.json", bad)], capsys)
    assert code == 1 and not rep["passed"]


def test_malformed_input(tmp_path, capsys):
    path = tmp_path / "junk.json"
    path.write_text("[")
    assert main(["check", "-i", str(path)]) == 2
    assert main(["check", "-i", write(tmp_path, "x.json", {"repr": "nope"})]) == 2
    assert main(["check"]) == 2
    capsys.readouterr()


def test_compose_and_convert(tmp_path, capsys):
    rng = np.random.default_rng(0)
    V = SuperSpace(2, 2)
    files = [write(tmp_path, f"L{i}.json",
                   io.lagrangian_to_json(Correspondence.from_u(V, V, correspondence_unitary(V, V, rng, True))))
             for i in range(2)]
    code, rep = run(["compose", "--left", files[0], "--right", files[1]], capsys)
    assert code == 0 and rep["distance"] <= 1e-8
    code, rep = run(["convert", "u-to-t", "-i", files[0]], capsys)
    assert code == 0 and rep["repr"] == "graph_T"
    back = write(tmp_path, "T.json", rep)
    code, rep = run(["convert", "t-to-u", "-i", back], capsys)
    assert code == 0 and rep["repr"] == "graph_u"


def test_classify_and_cat_compose(tmp_path, capsys):
    V = SuperSpace(2, 2)
    P = PolarizedSpace.from_w(V, np.eye(2))
    p = write(tmp_path, "P.json", io.polarized_to_json(P))
    C = Correspondence.from_u(V, V, type2_unitary(P.w, P.w))
    c = write(tmp_path, "C.json", io.lagrangian_to_json(C))
    code, rep = run(["classify", "--p0", p, "--p1", p, "-i", c, "--hs-threshold", "1e-9"], capsys)
    assert code == 0 and rep["kind"] == "type2"
    code, rep = run(["cat-compose", "--p0", p, "--p1", p, "--p2", p, "--left", c, "--right", c,
                     "--hs-threshold", "1e-9"], capsys)
    assert code == 0 and rep["consistent"] and rep["predicted"] == "type2"


def test_index(tmp_path, capsys):
    V = SuperSpace(3, 2)
    P = {"space": io.space_to_json(V), "w": io.matrix_to_json(np.eye(2, 3))}
    code, rep = run(["index", "-i", write(tmp_path, "P.json", P)], capsys)
    assert code == 0 and rep["value"] == 1 and rep["group"] == "Z"


def test_demos(capsys):
    code, rep = run(["demo", "cylinder", "--modes", "8"], capsys)
    assert code == 0 and rep["method"] == "formula"
    code, rep = run(["demo", "counterexample", "--ladder", "4", "8"], capsys)
    assert code == 0 and rep["result"] == "NotClosed"
    assert rep["symbol"] == "1"
    code, out = run(["demo", "counterexample", "--alpha2", "2", "--format", "text"], capsys)
    assert code == 0 and "result: ClosedLagrangian" in out


def test_sweep_is_seeded(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["sweep", "index", "--seed", "3", "--cases", "5", "-o", str(a)]) == 0
    assert main(["sweep", "index", "--seed", "3", "--cases", "5", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rep = run_sweep("compose", 1, 10, 4)
    assert rep["passed"] and len(rep["sweeps"]["compose"]["cases"]) == 20


def test_tolerance_flag_is_scoped(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("LAGCAT_TOL", raising=False)
    V = SuperSpace(1, 1)
    # a frame that is isotropic only up to ~1e-4
    v = np.array([[1.0], [1.0 + 1e-4]])
    f = {"repr": "frame", "space0": io.space_to_json(V), "matrix": io.matrix_to_json(v / np.linalg.norm(v))}
    path = write(tmp_path, "near.json", f)
    assert main(["check", "-i", path]) == 1
    assert main(["check", "-i", path, "--tol", "1e-3"]) == 0
    assert "LAGCAT_TOL" not in __import__("os").environ
    monkeypatch.setenv("LAGCAT_TOL", "1e-3")
    assert main(["check", "-i", path]) == 0
    capsys.readouterr()


@pytest.mark.parametrize("argv", [["sweep", "bogus"], ["demo"], ["convert", "sideways", "-i", "x"]])
def test_usage_errors(argv, capsys):
    assert main(argv) == 2
    capsys.readouterr()
