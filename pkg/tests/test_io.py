import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lagcat import io
from lagcat.clifford import build_clifford
from lagcat.composition import Correspondence, distance
from lagcat.lagrangian import GraphIsometry
from lagcat.polarization import PolarizedSpace
from lagcat.sampling import correspondence_unitary, gaussian
from lagcat.sequence import StructuredOp, T_alpha, TailSymbol, symbols_equal
from lagcat.superspace import SuperSpace

seeds = st.integers(0, 2**32 - 1)
fields = st.sampled_from(["R", "C"])


@given(seeds, fields, st.integers(0, 4), st.integers(0, 4))
def test_matrix_roundtrip(seed, field, m, n):
    A = gaussian((m, n), field, np.random.default_rng(seed))
    B = io.matrix_from_json(io.matrix_to_json(A, field))
    np.testing.assert_array_equal(A, B)
    assert B.dtype == A.dtype


@pytest.mark.parametrize("bad", [
    {"rows": 1, "cols": 1, "entries": [[float("nan"), 0]]},
    {"rows": 1, "cols": 1, "field": "R", "entries": [[1, 1]]},
    {"rows": 2, "cols": 1, "entries": [[1, 0]]},
    {"rows": 1, "entries": []},
    [1, 2],
])
def test_malformed_matrices(bad):
    with pytest.raises(io.MalformedInput):
        io.matrix_from_json(bad)


def test_space_roundtrip():
    E = build_clifford(3, "R").module
    assert io.space_from_json(io.space_to_json(E)) == E
    with pytest.raises(io.MalformedInput):
        io.space_from_json({"dim_plus": 1})


@pytest.mark.parametrize("rep", ["frame", "graph_u", "graph_T"])
@pytest.mark.parametrize("field", ["R", "C"])
def test_correspondence_roundtrip(rep, field):
    rng = np.random.default_rng(3)
    V = SuperSpace(2, 1, field)
    C = Correspondence.from_u(V, V, correspondence_unitary(V, V, rng, general=True))
    D = io.lagrangian_from_json(io.lagrangian_to_json(C, rep))
    assert distance(C, D) <= 1e-10


def test_subspace_forms():
    V = SuperSpace(2, 2)
    g = GraphIsometry(V, np.diag([1.0, 0.0]))
    space, h = io.lagrangian_from_json(io.lagrangian_to_json(g))
    np.testing.assert_array_equal(h.u, g.u)
    with pytest.raises(io.MalformedInput):
        io.lagrangian_from_json({"repr": "graph_T", "space0": io.space_to_json(V), "matrix": io.matrix_to_json(g.u)})


def test_polarized_roundtrip():
    V = SuperSpace(2, 2)
    P = PolarizedSpace.from_w(V, np.eye(2))
    Q = io.polarized_from_json(io.polarized_to_json(P))
    np.testing.assert_array_equal(Q.w, P.w)


@pytest.mark.parametrize("sym", [
    TailSymbol.exp(0.5, 2),
    TailSymbol.aps_exp(1.25, 1, "pos"),
    TailSymbol("const", 3),
    TailSymbol("zero"),
])
def test_symbol_roundtrip(sym):
    assert symbols_equal(io.symbol_from_json(io.symbol_to_json(sym)), sym)


def test_structured_roundtrip():
    op = T_alpha(0.5, 1)
    back = io.structured_from_json(io.structured_to_json(op))
    assert isinstance(back, StructuredOp)
    np.testing.assert_array_equal(back.core, op.core)
    with pytest.raises(io.MalformedInput):
        io.symbol_from_json({"kind": "sine"})


def test_dumps_is_deterministic(tmp_path):
    text = io.dumps({"b": 1, "a": [1.5, 2]})
    assert text.endswith("\n") and text.index('"a"') < text.index('"b"')
    (tmp_path / "x.json").write_text("{not json")
    with pytest.raises(io.MalformedInput):
        io.load(tmp_path / "x.json")


def test_rotation_example_is_exact():
    d = io.rotation_example(math.pi / 3)
    np.testing.assert_array_equal(io.matrix_from_json(d["matrix"]), io.rotation_unitary(math.pi / 3))
    C = io.lagrangian_from_json(d)
    np.testing.assert_allclose(C.u, io.rotation_unitary(math.pi / 3), atol=1e-15)
