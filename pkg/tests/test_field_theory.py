import numpy as np
import pytest

from lagcat.clifford import sublagrangian_index
from lagcat.errors import NotComposableKinds
from lagcat.field_theory import (
    Cylinder,
    DiscPair,
    HalfDisc,
    Identity,
    SpectralObject,
    Sphere,
    aps_polarized,
    bordism_lagrangian,
    closeness_ladder,
    closeness_to_aps,
    cylinder_symbol,
    disjoint_union,
    glue,
    glued_kind,
    type2_residual,
)
from lagcat.lagrangian import from_graph_isometry
from lagcat.sequence import TailSymbol, symbols_equal
from lagcat.superspace import clifford_invariant

OUT, IN = HalfDisc("out"), HalfDisc("in")
GLUINGS = [
    (Cylinder(0.3), Cylinder(0.7), Cylinder(1.0)),
    (Identity(), Cylinder(0.5), Cylinder(0.5)),
    (OUT, Cylinder(0.5), OUT),
    (Cylinder(0.5), IN, IN),
    (OUT, IN, Sphere()),
    (IN, OUT, DiscPair()),
    (DiscPair(), Cylinder(1.0), DiscPair()),
    (OUT, DiscPair(), OUT),
    (DiscPair(), IN, IN),
]


@pytest.mark.parametrize("first,second,result", GLUINGS)
def test_gluing(first, second, result):
    assert glued_kind(first, second) == result
    r = glue(first, second, SpectralObject("half", 6))
    assert r.passed, r.as_dict()


def test_gluing_uses_the_formula():
    r = glue(Cylinder(1.0), Cylinder(1.0), SpectralObject("half", 16))
    assert r.method == "formula"
    assert r.gap >= 1 - 1e-12


def test_mismatched_ends():
    with pytest.raises(NotComposableKinds):
        glued_kind(Cylinder(1.0), OUT)
    with pytest.raises(NotComposableKinds):
        glued_kind(Sphere(), Cylinder(1.0))


def test_discs_need_a_bounding_spectrum():
    with pytest.raises(ValueError):
        bordism_lagrangian(OUT, SpectralObject("integer", 4))
    with pytest.raises(ValueError):
        Cylinder(0.0)


def test_cylinder_symbols_add_exactly():
    for spectrum in ("half", "integer"):
        obj = SpectralObject(spectrum, 4)
        prod = cylinder_symbol(0.1, obj) * cylinder_symbol(0.2, obj)
        assert symbols_equal(prod, cylinder_symbol(0.3, obj))
    assert str(cylinder_symbol(1.2, SpectralObject())) == "1*exp(1.2*(n+1/2))"


@pytest.mark.parametrize("spectrum", ["half", "integer"])
def test_closeness(spectrum):
    obj = SpectralObject(spectrum, 8)
    assert closeness_to_aps(Cylinder(0.25), obj)
    assert not closeness_to_aps(Identity(), obj)
    hs = [r["hs"] for r in closeness_ladder(Identity(), obj, (8, 16, 32))]
    assert hs[0] < hs[1] < hs[2]
    cyl = [r["hs"] for r in closeness_ladder(Cylinder(1.0), obj, (8, 16, 32))]
    assert max(cyl) - min(cyl) < 1e-6


def test_discs_are_the_aps_half():
    obj = SpectralObject("half", 6)
    assert closeness_to_aps(OUT, obj)
    assert type2_residual(OUT, obj) <= 1e-12
    assert type2_residual(DiscPair(), obj) <= 1e-12


@pytest.mark.parametrize("kind", [Cylinder(0.5), Identity(), OUT, IN, DiscPair()])
def test_bordism_lagrangians_are_clifford_invariant(kind):
    C = bordism_lagrangian(kind, SpectralObject("half", 4))
    assert clifford_invariant(C.space, C.frame)


def test_aps_indices():
    assert sublagrangian_index(aps_polarized(SpectralObject("half", 6))).value == 0
    idx = sublagrangian_index(aps_polarized(SpectralObject("integer", 6)))
    assert str(idx) == "1 in Z2"
    idx = sublagrangian_index(aps_polarized(SpectralObject("integer", 6, clifford=False)))
    assert str(idx) == "1 in Z"
    idx = sublagrangian_index(aps_polarized(SpectralObject("integer", 6, multiplicity=2)))
    assert idx.value == 0


def test_opposite_object():
    obj = SpectralObject("half", 4)
    P, Q = aps_polarized(obj), aps_polarized(obj.opposite())
    assert (Q.space.dim_plus, Q.space.dim_minus) == (P.space.dim_minus, P.space.dim_plus)
    np.testing.assert_allclose(Q.w, -P.w.T)
    assert clifford_invariant(Q.space, from_graph_isometry(Q.ref))


def test_disjoint_union():
    a, b = SpectralObject("half", 2), SpectralObject("integer", 3)
    V = disjoint_union(a, b)
    assert V.dim == a.space.dim + b.space.dim
    assert V.degree == 1


def test_symbols_are_one_sided_for_closeness():
    obj = SpectralObject("half", 4)
    assert TailSymbol.aps_exp(1, 2, "pos").is_square_summable()
    assert not closeness_to_aps(Identity(), obj)


def test_identity_is_type1():
    from lagcat.polarization import MorphismKind, classify_morphism

    obj = SpectralObject("half", 6)
    P = aps_polarized(obj)
    m = classify_morphism(P, P, bordism_lagrangian(Identity(), obj), hs_threshold=1e-9)
    assert m.kind is MorphismKind.TYPE1


@pytest.mark.parametrize("N", [8, 16, 32])
@pytest.mark.parametrize("spectrum", ["half", "integer"])
def test_bordism_lagrangians_are_isotropic(N, spectrum):
    from lagcat.lagrangian import is_lagrangian_graph, isotropy_defect

    obj = SpectralObject(spectrum, N)
    kinds = [Cylinder(0.1), Cylinder(1.0), Identity()]
    if spectrum == "half":
        kinds += [OUT, IN, DiscPair()]
    for kind in kinds:
        C = bordism_lagrangian(kind, obj)
        assert isotropy_defect(C.space, C.frame) <= 1e-9
    T = np.diag(np.exp(0.1 * obj.mode_eigenvalues()))
    G = obj.gamma_modes()
    assert is_lagrangian_graph(T, G, G, tol=1e-9)


def test_gluing_is_monoidal():
    from lagcat.composition import compose_bruteforce, direct_sum_correspondence
    from lagcat.linalg import projector_distance

    a, b = SpectralObject("half", 3), SpectralObject("integer", 2)

    def pair(l):
        return direct_sum_correspondence(bordism_lagrangian(Cylinder(l), a), bordism_lagrangian(Cylinder(l), b))

    first, second = pair(0.5), pair(0.7)
    assert first.V0 == disjoint_union(a, b)
    assert projector_distance(compose_bruteforce(first, second), pair(1.2).frame) <= 1e-9
