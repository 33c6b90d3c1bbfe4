import numpy as np
import pytest
from hypothesis import given, strategies as st

from lagcat.clifford import build_clifford
from lagcat.errors import DegreeMismatch, FieldMismatch
from lagcat.linalg import Frame, orthonormalize
from lagcat.sampling import gaussian
from lagcat.superspace import (
    SuperSpace,
    b_form,
    clifford_invariant,
    clifford_relation_defect,
    direct_sum,
    embed_frames,
    embedding,
    opposite,
    restrict_action,
)

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(0, 5)


def test_gamma_and_parts():
    V = SuperSpace(2, 1)
    np.testing.assert_array_equal(V.gamma(), np.diag([1.0, 1.0, -1.0]))
    x = np.arange(3.0)
    assert list(V.plus(x)) == [0, 1] and list(V.minus(x)) == [2]


def test_rejects_bad_generators():
    with pytest.raises(ValueError):
        SuperSpace(1, 1, "R", (np.eye(2),))
    with pytest.raises(ValueError):
        SuperSpace(-1, 0)


@given(seeds, st.sampled_from(["R", "C"]), dims, dims)
def test_b_form_hermitian(seed, field, p, q):
    rng = np.random.default_rng(seed)
    V = SuperSpace(p, q, field)
    x, y = gaussian((V.dim,), field, rng), gaussian((V.dim,), field, rng)
    assert np.isclose(b_form(V, x, y), np.conj(b_form(V, y, x)))


@given(dims, dims)
def test_opposite_is_an_involution(p, q):
    V = SuperSpace(p, q)
    W = opposite(V)
    assert (W.dim_plus, W.dim_minus) == (q, p)
    assert opposite(W) == V


@pytest.mark.parametrize("d", [1, 2, 3])
def test_opposite_keeps_a_module(d):
    E = build_clifford(d, "R").module
    assert clifford_relation_defect(opposite(E)) < 1e-12


def test_direct_sum_layout():
    A, B = SuperSpace(1, 2), SuperSpace(2, 1)
    S = direct_sum(A, B)
    assert (S.dim_plus, S.dim_minus) == (3, 3)
    J0, J1 = embedding(S, 0), embedding(S, 1)
    # plus parts first, then minus parts
    np.testing.assert_array_equal(J0.T @ S.gamma() @ J0, A.gamma())
    np.testing.assert_array_equal(J1.T @ S.gamma() @ J1, B.gamma())
    F = embed_frames(S, [Frame(np.eye(3)[:, :1]), Frame(np.eye(3)[:, 2:])])
    assert F.dim == 2


def test_direct_sum_checks():
    with pytest.raises(FieldMismatch):
        direct_sum(SuperSpace(1, 0, "R"), SuperSpace(1, 0, "C"))
    with pytest.raises(DegreeMismatch):
        direct_sum(SuperSpace(1, 1), build_clifford(1).module)


def test_invariance_and_restriction():
    E = build_clifford(2, "R").module
    S = direct_sum(E, E)
    F = embed_frames(S, [Frame(np.eye(E.dim)), Frame.empty(E.dim)])
    assert clifford_invariant(S, F)
    assert not clifford_invariant(S, orthonormalize(np.eye(S.dim)[:, :1]))
    plus = np.eye(S.dim_plus)[:, : E.dim_plus]
    minus = np.eye(S.dim_minus)[:, : E.dim_minus]
    R = restrict_action(S, plus, minus)
    assert (R.dim_plus, R.dim_minus, R.degree) == (E.dim_plus, E.dim_minus, 2)
    assert clifford_relation_defect(R) < 1e-12
