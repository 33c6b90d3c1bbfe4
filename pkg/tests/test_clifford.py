import numpy as np
import pytest
from hypothesis import given, strategies as st

from lagcat.clifford import (
    KO_GROUPS,
    GradedModuleClass,
    IndexClass,
    abs_class,
    build_clifford,
    commutant_of_copies,
    decompose_module,
    drop_last_generator,
    extension_lagrangian,
    graded_commutant,
    group_of,
    irreducible,
    module_sum,
    random_equivariant_unitary,
    random_invariant_lagrangian,
    reduce_class,
    relation_residuals,
    sublagrangian_index,
)
from lagcat.errors import DegreeMismatch, FieldMismatch, NotInvariant, UnsupportedDegree
from lagcat.lagrangian import GraphIsometry, LagKind, classify
from lagcat.superspace import SuperSpace, clifford_invariant

real_degrees = st.integers(0, 8)
complex_degrees = st.integers(0, 6)
degrees = st.one_of(st.tuples(st.integers(0, 7), st.just("R")), st.tuples(st.integers(0, 5), st.just("C")))


def test_degree_one_is_a_quarter_turn():
    (e,) = build_clifford(1, "R").generators
    np.testing.assert_array_equal(e, [[0, -1], [1, 0]])


def test_degree_limit():
    with pytest.raises(UnsupportedDegree):
        build_clifford(9, "R")


@given(real_degrees)
def test_real_modules_are_odd_and_skew(d):
    res = relation_residuals(build_clifford(d, "R").module)
    assert max(res.values()) <= 1e-12


@given(complex_degrees)
def test_complex_modules_are_odd_and_skew(d):
    res = relation_residuals(build_clifford(d, "C").module)
    assert max(res.values()) <= 1e-12


def test_groups():
    assert [group_of(d, "R") for d in range(10)] == list(KO_GROUPS) + ["Z", "Z2"]
    assert [group_of(d, "C") for d in range(4)] == ["Z", "0", "Z", "0"]


@pytest.mark.parametrize("d,field", [(4, "R"), (8, "R"), (2, "C"), (4, "C")])
def test_two_irreducibles_are_told_apart(d, field):
    alg = build_clifford(d, field)
    assert alg.omega_sign in (1, -1)
    a, b = irreducible(d, field), irreducible(d, field, "other")
    assert decompose_module(alg, module_sum(a, b, b)).multiplicities == (1, 2)


@pytest.mark.parametrize("d", [1, 2, 3, 5])
def test_single_irreducible(d):
    with pytest.raises(ValueError):
        irreducible(d, "R", "other")
    alg = build_clifford(d, "R")
    E = alg.module
    assert decompose_module(alg, module_sum(E, E, E)).multiplicities == (3,)


def test_decompose_guards():
    alg = build_clifford(2, "R")
    with pytest.raises(DegreeMismatch):
        decompose_module(alg, build_clifford(1, "R").module)
    with pytest.raises(FieldMismatch):
        decompose_module(alg, build_clifford(2, "C").module)


@given(degrees)
def test_restrictions_have_trivial_class(df):
    d, field = df
    E = build_clifford(d + 1, field).module
    alg = build_clifford(d, field)
    assert abs_class(decompose_module(alg, drop_last_generator(E))).value == 0


@given(degrees)
def test_irreducible_generates(df):
    d, field = df
    E = irreducible(d, field)
    idx = sublagrangian_index(E, GraphIsometry(E, np.zeros((E.dim_minus, E.dim_plus))))
    assert idx.value == (0 if group_of(d, field) == "0" else 1)


@given(degrees, st.integers(0, 2**32 - 1))
def test_extension_lagrangian_is_invariant(df, seed):
    d, field = df
    V, F = random_invariant_lagrangian(d, field, 2, np.random.default_rng(seed))
    assert clifford_invariant(V, F)
    assert classify(V, F) is LagKind.LAGRANGIAN


def test_copies_commutant_matches_direct_solve():
    E = drop_last_generator(build_clifford(3, "R").module)
    M = module_sum(E, E)
    assert len(commutant_of_copies(M, E)) == len(graded_commutant(M))
    U = random_equivariant_unitary(M, np.random.default_rng(0), commutant_of_copies(M, E))
    for e in M.generators:
        np.testing.assert_allclose(U @ e, e @ U, atol=1e-12)
    np.testing.assert_allclose(U.T @ U, np.eye(M.dim), atol=1e-12)


def test_extension_lagrangian_needs_a_generator():
    with pytest.raises(DegreeMismatch):
        extension_lagrangian(SuperSpace(1, 1))


def test_index_needs_invariance():
    E = build_clifford(1, "R").module
    V = module_sum(E, E)
    u = np.array([[1.0, 0.0], [0.0, 0.0]])
    with pytest.raises(NotInvariant):
        sublagrangian_index(V, GraphIsometry(V, u))


def test_d0_examples():
    V = SuperSpace(3, 3)
    assert sublagrangian_index(V, GraphIsometry(V, np.diag([1.0, 1.0, 0.0]))).value == 0
    W = SuperSpace(3, 2)
    u = np.eye(2, 3)
    assert sublagrangian_index(W, GraphIsometry(W, u)).value == 1
    assert sublagrangian_index(W, GraphIsometry(W, np.zeros((2, 3)))).value == 1


def test_class_arithmetic():
    assert reduce_class(1, "R", 3) == IndexClass(1, reduce_class(1, "R", 0).field, "Z2", 1)
    assert str(reduce_class(1, "R", 3)) == "1 in Z2"
    assert str(reduce_class(4, "R", -2)) == "-2 in Z"
    assert str(reduce_class(3, "R", 5)) == "0"
    assert (reduce_class(2, "R", 1) + reduce_class(2, "R", 1)).value == 0
    m = GradedModuleClass(4, reduce_class(4, "R", 0).field, (2, 1))
    assert (m - m).multiplicities == (0, 0)
    assert abs_class(m).value == 1


@pytest.mark.parametrize("d,field", [(1, "R"), (2, "R"), (4, "R"), (2, "C")])
def test_composition_keeps_invariance(d, field):
    from lagcat.composition import Correspondence, compose_bruteforce

    rng = np.random.default_rng(d)
    E = build_clifford(d, field).module
    V = module_sum(E, E)
    S, T = (random_equivariant_unitary(V, rng) for _ in range(2))
    A, B = Correspondence.from_T(V, V, S), Correspondence.from_T(V, V, T)
    for C in (Correspondence.identity(V), A, B):
        assert clifford_invariant(C.space, C.frame)
    F = compose_bruteforce(A, B)
    assert clifford_invariant(A.space, F)
