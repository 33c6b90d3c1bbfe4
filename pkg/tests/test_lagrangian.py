import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lagcat.errors import NotIsotropic, SingularBlock
from lagcat.lagrangian import (
    GraphIsometry,
    LagKind,
    T_to_u,
    canonical_to_pairs,
    classify,
    correspondence_space,
    defect_frame,
    from_graph_isometry,
    gamma_image,
    general_position,
    graph_frame,
    is_isotropic,
    is_lagrangian_graph,
    lagrangian_graph_residual,
    pairs_to_canonical,
    projection_formula,
    to_graph_isometry,
    u_frame,
    u_to_T,
)
from lagcat.linalg import orthonormalize, projection_onto, projector_distance
from lagcat.sampling import correspondence_unitary, indefinite_unitary, random_partial_isometry
from lagcat.superspace import SuperSpace

seeds = st.integers(0, 2**32 - 1)
fields = st.sampled_from(["R", "C"])
dims = st.integers(0, 5)


@st.composite
def graph_isometries(draw):
    p, q = draw(dims), draw(dims)
    field = draw(fields)
    rng = np.random.default_rng(draw(seeds))
    r = int(rng.integers(0, min(p, q) + 1))
    V = SuperSpace(p, q, field)
    return GraphIsometry(V, random_partial_isometry(q, p, r, field, rng))


@given(graph_isometries())
def test_restricted_graph_is_isotropic(g):
    F = from_graph_isometry(g)
    assert is_isotropic(g.space, F)
    assert F.dim == g.rank


@given(graph_isometries())
def test_graph_isometry_roundtrip(g):
    h = to_graph_isometry(g.space, from_graph_isometry(g))
    np.testing.assert_allclose(h.u, g.u, atol=1e-10)


@given(graph_isometries())
def test_projection_formula(g):
    P = projection_onto(from_graph_isometry(g))
    np.testing.assert_allclose(projection_formula(g), P, atol=1e-10)


@given(graph_isometries())
def test_defect_is_both_kernels(g):
    D = defect_frame(g.space, from_graph_isometry(g))
    assert D.dim == g.defect_dim
    ker_u, ker_uh = g.kernels()
    assert ker_u.shape[1] + ker_uh.shape[1] == D.dim


@given(graph_isometries())
def test_gamma_image_is_orthogonal(g):
    F = from_graph_isometry(g)
    G = from_graph_isometry(gamma_image(g))
    np.testing.assert_allclose(F.basis.conj().T @ G.basis, 0, atol=1e-10)
    np.testing.assert_allclose(g.space.gamma() @ F.basis @ F.basis.conj().T @ g.space.gamma(),
                               projection_onto(G), atol=1e-10)


def test_classify():
    V = SuperSpace(2, 2)
    assert classify(V, from_graph_isometry(GraphIsometry(V, np.eye(2)))) is LagKind.LAGRANGIAN
    assert classify(V, from_graph_isometry(GraphIsometry(V, np.diag([1.0, 0])))) is LagKind.SUBLAGRANGIAN
    with pytest.raises(NotIsotropic):
        classify(V, orthonormalize(np.eye(4)[:, :1]))


def test_pair_coordinates_roundtrip():
    V0, V1 = SuperSpace(2, 1), SuperSpace(1, 3)
    M = np.arange(7.0 * 2).reshape(7, 2)
    np.testing.assert_array_equal(canonical_to_pairs(pairs_to_canonical(M, V0, V1), V0, V1), M)


@given(seeds, fields, st.integers(1, 5), st.integers(1, 5))
def test_u_T_roundtrip(seed, field, p, q):
    rng = np.random.default_rng(seed)
    V = SuperSpace(p, q, field)
    u = correspondence_unitary(V, V, rng, general=True)
    T = u_to_T(u, V, V)
    assert is_lagrangian_graph(T, V, V)
    np.testing.assert_allclose(T_to_u(T, V, V), u, atol=1e-9)
    assert projector_distance(graph_frame(T, V, V), u_frame(u, V, V)) <= 1e-9


@given(seeds, fields, st.integers(0, 5), st.integers(0, 5))
def test_indefinite_unitaries_give_lagrangian_graphs(seed, field, p, q):
    T = indefinite_unitary(p, q, field, np.random.default_rng(seed))
    V = SuperSpace(p, q, field)
    assert is_lagrangian_graph(T, V, V)
    F = graph_frame(T, V, V)
    W = correspondence_space(V, V)
    assert classify(W, F) is LagKind.LAGRANGIAN
    assert general_position(V, V, F)


@pytest.mark.parametrize("alpha", [math.pi / 6, math.pi / 4, math.pi / 3, 1.0])
def test_rotation_graph(alpha):
    V = SuperSpace(1, 1)
    u = np.array([[math.cos(alpha), -math.sin(alpha)], [math.sin(alpha), math.cos(alpha)]])
    cot, csc = 1 / math.tan(alpha), 1 / math.sin(alpha)
    T = u_to_T(u, V, V)
    np.testing.assert_allclose(T, [[-csc, cot], [-cot, csc]], atol=1e-12)
    assert lagrangian_graph_residual(T, V, V) < 1e-12


def test_displayed_rotation_matrix_is_not_lagrangian():
    alpha = math.pi / 4
    cot, csc = 1 / math.tan(alpha), 1 / math.sin(alpha)
    T = np.array([[cot, -csc], [csc, cot]])
    G = np.diag([1.0, -1.0])
    # the off-diagonal entry of T^T G T is -2 cot csc in any diagonal grading
    assert abs((T.T @ G @ T)[0, 1]) > 1
    assert not is_lagrangian_graph(T, SuperSpace(1, 1), SuperSpace(1, 1))


def test_singular_block():
    V = SuperSpace(1, 1)
    with pytest.raises(SingularBlock):
        u_to_T(np.eye(2), V, V)
    with pytest.raises(SingularBlock):
        T_to_u(np.diag([0.0, 1.0]), V, V)
