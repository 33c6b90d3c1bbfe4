"""Clifford algebras as matrix algebras, graded module classes and the index.

Conventions: generators satisfy ``e_j e_k + e_k e_j = -2 δ_jk``, are
skew-adjoint and odd.  A graded ``Cl_d``-module ``E`` is analysed through
its even part ``E+``, an ungraded ``Cl_{d-1}``-module under
``f_j = e_d e_j``.  When ``Cl_{d-1}`` has two irreducibles they are told
apart by the sign of the (normalised) volume element ``f_1 ... f_{d-1}``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import DegreeMismatch, FieldMismatch, NotAModule, NotInvariant, UnsupportedDegree
from .lagrangian import GraphIsometry, from_graph_isometry, is_isotropic
from .linalg import Field, Frame, as_field, orthonormalize
from .superspace import SuperSpace, clifford_invariant, clifford_relation_defect, restrict_action

MAX_REAL_DEGREE = 8

# dimension of an irreducible *ungraded* module of Cl_k (e^2 = -1), k = 0..8:
# R, C, H, H+H, M2(H), M4(C), M8(R), M8(R)+M8(R), M16(R)
REAL_UNGRADED_DIM = (1, 2, 4, 4, 8, 8, 8, 8, 16)
# dimension of an irreducible *graded* module of Cl_d, d = 0..8
REAL_GRADED_DIM = (1, 2, 4, 8, 8, 16, 16, 16, 16)

KO_GROUPS = ("Z", "Z2", "Z2", "0", "Z", "0", "0", "0")

RELATION_TOL = 1e-10


def ungraded_dim(k: int, field) -> int:
    if as_field(field) is Field.COMPLEX:
        return 2 ** (k // 2)
    return REAL_UNGRADED_DIM[k]


def graded_dim(d: int, field) -> int:
    if as_field(field) is Field.COMPLEX:
        return 1 if d == 0 else 2 ** ((d + 1) // 2)
    return REAL_GRADED_DIM[d]


def graded_irreducible_count(d: int, field) -> int:
    """Number of graded irreducibles of Cl_d (two exactly when Cl_{d-1} is not simple)."""
    if as_field(field) is Field.COMPLEX:
        return 2 if d % 2 == 0 else 1
    return 2 if d % 4 == 0 else 1


def group_of(d: int, field) -> str:
    if as_field(field) is Field.COMPLEX:
        return "Z" if d % 2 == 0 else "0"
    return KO_GROUPS[d % 8]


@dataclass(frozen=True)
class CliffordAlgebra:
    d: int
    field: Field
    module: SuperSpace  # the standard irreducible graded module

    @property
    def generators(self):
        return self.module.generators

    @property
    def omega_sign(self) -> int:
        """Volume-element sign on the standard irreducible (0 when it is not needed)."""
        if self.d == 0 or graded_irreducible_count(self.d, self.field) == 1:
            return 0
        w = np.linalg.eigvalsh(_volume_on_even(self.module))
        return 1 if w[0] > 0 else -1


# --- construction --------------------------------------------------------------


def _to_canonical(gamma_diag, gens, field):
    """Reorder coordinates so that the +1 eigenvectors of a diagonal grading come first."""
    plus = np.flatnonzero(gamma_diag > 0)
    minus = np.flatnonzero(gamma_diag < 0)
    perm = np.r_[plus, minus].astype(int)
    return SuperSpace(len(plus), len(minus), field, tuple(e[np.ix_(perm, perm)] for e in gens))


def _pauli_module(d: int) -> SuperSpace:
    """Complex graded irreducible from Jordan-Wigner products of Pauli matrices."""
    m = (d + 1) // 2
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]])
    sz = np.diag([1.0, -1.0]).astype(complex)
    I2 = np.eye(2, dtype=complex)

    def kron_all(mats):
        out = np.eye(1, dtype=complex)
        for a in mats:
            out = np.kron(out, a)
        return out

    gens = []
    for l in range(m):
        for s in (sx, sy):
            gens.append(1j * kron_all([sz] * l + [s] + [I2] * (m - l - 1)))
    gamma = np.real(np.diag(kron_all([sz] * m)))
    return _to_canonical(gamma, gens[:d], Field.COMPLEX)


def _double(E: SuperSpace) -> SuperSpace:
    """``E ⊕ ΠE`` with one extra generator ``[[0, -Γ], [Γ, 0]]``."""
    n = E.dim
    G = E.gamma()
    Z = np.zeros((n, n), dtype=E.dtype)
    gens = [np.block([[e, Z], [Z, e]]) for e in E.generators]
    gens.append(np.block([[Z, -G], [G, Z]]))
    gamma = np.r_[np.diag(G).real, -np.diag(G).real]
    return _to_canonical(gamma, gens, E.field)


def graded_commutant(space: SuperSpace) -> list:
    """Basis of the even operators commuting with every generator."""
    n = space.dim
    I = np.eye(n)
    ops = [space.gamma()] + list(space.generators)
    # vec(A X - X A) = (I ⊗ A - A^T ⊗ I) vec(X), column-major vec
    K = sum((np.kron(I, A) - np.kron(A.T, I)).conj().T @ (np.kron(I, A) - np.kron(A.T, I)) for A in ops)
    w, Vec = np.linalg.eigh(K)
    keep = w <= 1e-9 * max(1.0, w[-1])
    return [Vec[:, i].reshape(n, n, order="F") for i in np.flatnonzero(keep)]


def split_off_irreducible(space: SuperSpace, rng=None) -> SuperSpace:
    """A graded irreducible submodule (the space itself when already irreducible).

    A module is irreducible exactly when every self-adjoint element of its
    graded commutant is scalar.  Otherwise an eigenspace of such an
    element is a proper graded submodule, and we recurse into it.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    while True:
        n = space.dim
        herm = []
        for X in graded_commutant(space):
            for H in (X + X.conj().T, 1j * (X - X.conj().T)):
                if space.field is Field.REAL:
                    H = H.real
                H = H - np.trace(H).real / n * np.eye(n)
                if np.linalg.norm(H) > 1e-8:
                    herm.append(H)
        if not herm:
            return space
        H = sum(rng.standard_normal() * h for h in herm)
        w, V = np.linalg.eigh(H)
        top = V[:, np.abs(w - w[-1]) <= 1e-8 * max(1.0, abs(w[-1]))]
        p = space.dim_plus
        plus = orthonormalize(top[:p]).basis
        minus = orthonormalize(top[p:]).basis
        space = restrict_action(space, plus, minus)


@functools.lru_cache(maxsize=None)
def _standard_module(d: int, field: Field) -> SuperSpace:
    if field is Field.COMPLEX:
        return _pauli_module(d)
    E = SuperSpace(1, 0, Field.REAL)
    for _ in range(d):
        E = split_off_irreducible(_double(E))
    return E


def build_clifford(d: int, field="R") -> CliffordAlgebra:
    """``Cl_d`` (or its complexification) acting on a standard irreducible graded module."""
    field = as_field(field)
    if d < 0 or (field is Field.REAL and d > MAX_REAL_DEGREE):
        raise UnsupportedDegree(f"real Clifford algebras are built for 0 <= d <= {MAX_REAL_DEGREE}, got {d}")
    return CliffordAlgebra(d, field, _standard_module(d, field))


def relation_residuals(space: SuperSpace) -> dict:
    gens = space.generators
    G = space.gamma()
    n = space.dim
    anti = skew = odd = 0.0
    for j, e in enumerate(gens):
        skew = max(skew, np.abs(e.conj().T + e).max())
        odd = max(odd, np.abs(e @ G + G @ e).max())
        for k, f in enumerate(gens):
            target = -2 * np.eye(n) if j == k else 0
            anti = max(anti, np.abs(e @ f + f @ e - target).max())
    return {"anticommutation": float(anti), "skew": float(skew), "odd": float(odd)}


# --- module classes ------------------------------------------------------------


def _even_generators(space: SuperSpace):
    """``f_j = e_d e_j`` restricted to ``E+``: an ungraded Cl_{d-1} action."""
    p = space.dim_plus
    *rest, ed = space.generators
    return [(ed @ e)[:p, :p] for e in rest]


def _volume_on_even(space: SuperSpace) -> np.ndarray:
    fs = _even_generators(space)
    k = len(fs)
    p = space.dim_plus
    omega = np.eye(p, dtype=complex)
    for f in fs:
        omega = omega @ f
    omega = omega * (1j ** ((k + 1) // 2) if space.field is Field.COMPLEX else 1)
    # for real Cl_k with k = 3 mod 4 the volume element already squares to one
    omega = 0.5 * (omega + omega.conj().T)
    return omega


@dataclass(frozen=True)
class GradedModuleClass:
    """Multiplicities of the graded irreducibles, standard one first."""

    d: int
    field: Field
    multiplicities: tuple

    def __add__(self, other: "GradedModuleClass") -> "GradedModuleClass":
        if (self.d, self.field) != (other.d, other.field):
            raise DegreeMismatch("classes of different algebras")
        return GradedModuleClass(self.d, self.field,
                                 tuple(a + b for a, b in zip(self.multiplicities, other.multiplicities)))

    def __neg__(self):
        return GradedModuleClass(self.d, self.field, tuple(-a for a in self.multiplicities))

    def __sub__(self, other):
        return self + (-other)


def decompose_module(alg: CliffordAlgebra, space: SuperSpace, tol: float = RELATION_TOL) -> GradedModuleClass:
    """Count graded irreducibles in ``space`` by dimension and volume-element characters."""
    if space.field is not alg.field:
        raise FieldMismatch("module and algebra over different fields")
    if space.degree != alg.d:
        raise DegreeMismatch(f"module has {space.degree} generators, algebra has degree {alg.d}")
    if clifford_relation_defect(space) > tol:
        raise NotAModule("Clifford relations violated")
    d = alg.d
    if d == 0:
        return GradedModuleClass(0, alg.field, (space.dim_plus, space.dim_minus))
    if space.dim_plus != space.dim_minus:
        raise NotAModule("an odd generator forces dim E+ = dim E-")
    a = ungraded_dim(d - 1, alg.field)
    p = space.dim_plus
    if graded_irreducible_count(d, alg.field) == 1:
        if p % a:
            raise NotAModule(f"dim E+ = {p} is not a multiple of {a}")
        return GradedModuleClass(d, alg.field, (p // a,))
    if p == 0:
        return GradedModuleClass(d, alg.field, (0, 0))
    w = np.linalg.eigvalsh(_volume_on_even(space))
    if np.max(np.abs(np.abs(w) - 1)) > 1e-8:
        raise NotAModule("volume element is not an involution on E+")
    pos = int(np.count_nonzero(w > 0))
    neg = p - pos
    if pos % a or neg % a:
        raise NotAModule("eigenspace dimensions are not multiples of the irreducible dimension")
    std, other = (pos // a, neg // a) if alg.omega_sign > 0 else (neg // a, pos // a)
    return GradedModuleClass(d, alg.field, (std, other))


@dataclass(frozen=True)
class IndexClass:
    d: int
    field: Field
    group: str
    value: int

    def __add__(self, other: "IndexClass") -> "IndexClass":
        if (self.d, self.field) != (other.d, other.field):
            raise DegreeMismatch("index classes of different degrees")
        return reduce_class(self.d, self.field, self.value + other.value)

    def __str__(self):
        if self.group == "0":
            return "0"
        return f"{self.value} in {self.group}"


def reduce_class(d: int, field, value: int) -> IndexClass:
    group = group_of(d, field)
    if group == "Z2":
        value %= 2
    elif group == "0":
        value = 0
    return IndexClass(d, as_field(field), group, int(value))


def abs_class(m: GradedModuleClass) -> IndexClass:
    """Image in the quotient by modules restricted from one degree higher."""
    mult = m.multiplicities
    group = group_of(m.d, m.field)
    if group == "Z":
        return reduce_class(m.d, m.field, mult[0] - mult[1])
    return reduce_class(m.d, m.field, mult[0])


def defect_module(space: SuperSpace, L) -> SuperSpace:
    """``(L ⊕ ΓL)^⊥ = ker(u) ⊕ ker(u^H)`` with the restricted Clifford action."""
    g = L if isinstance(L, GraphIsometry) else None
    if g is None:
        from .lagrangian import to_graph_isometry

        g = to_graph_isometry(space, L)
    F = from_graph_isometry(g)
    if space.degree and not clifford_invariant(space, F):
        raise NotInvariant("sub-Lagrangian is not invariant under the Clifford action")
    ker_u, ker_uh = g.kernels()
    return restrict_action(space, ker_u, ker_uh)


def sublagrangian_index(space_or_polarized, L=None) -> IndexClass:
    """Index of a Clifford-invariant sub-Lagrangian, or of a polarized space."""
    if L is None:
        space, L = space_or_polarized.space, space_or_polarized.ref
    else:
        space = space_or_polarized
    if isinstance(L, Frame) and not is_isotropic(space, L):
        from .errors import NotIsotropic

        raise NotIsotropic("index needs an isotropic subspace")
    D = defect_module(space, L)
    alg = build_clifford(space.degree, space.field)
    return abs_class(decompose_module(alg, D))


# --- modules with extra structure --------------------------------------------


def module_sum(*modules: SuperSpace) -> SuperSpace:
    from .superspace import direct_sum

    return direct_sum(*modules)


def drop_last_generator(space: SuperSpace) -> SuperSpace:
    """Restriction along ``Cl_{d-1} -> Cl_d``."""
    return SuperSpace(space.dim_plus, space.dim_minus, space.field, space.generators[:-1])


def extension_lagrangian(module: SuperSpace):
    """Lagrangian cut out by the last generator of a ``Cl_{d+1}``-module.

    ``S = Γ e_{d+1}`` is a self-adjoint involution that commutes with
    ``e_1..e_d`` and anticommutes with ``Γ``; its ``+1`` eigenspace is a
    ``Cl_d``-invariant Lagrangian of the restricted module.
    """
    if module.degree == 0:
        raise DegreeMismatch("need at least one generator")
    V = drop_last_generator(module)
    S = module.gamma() @ module.generators[-1]
    P = 0.5 * (np.eye(module.dim) + S)
    return V, orthonormalize(P)


def cayley(A: np.ndarray) -> np.ndarray:
    """Unitary Cayley transform of a skew-adjoint matrix."""
    I = np.eye(A.shape[0])
    return (I - A) @ np.linalg.inv(I + A)


def random_equivariant_unitary(space: SuperSpace, rng, basis=None) -> np.ndarray:
    """Random even unitary commuting with the Clifford action."""
    basis = graded_commutant(space) if basis is None else basis
    n = space.dim
    X = np.zeros((n, n), dtype=complex)
    for B in basis:
        X = X + (rng.standard_normal() + 1j * rng.standard_normal()) * B
    A = X - X.conj().T
    if space.field is Field.REAL:
        A = A.real
    return cayley(A)


def commutant_of_copies(total: SuperSpace, single: SuperSpace) -> list:
    """Graded commutant of ``total``, a direct sum of copies of ``single``.

    It is the commutant of one copy placed in every block ``(i, j)``,
    which avoids a linear solve in ``dim(total)^2`` unknowns.
    """
    from .superspace import embedding_indices

    copies = [single] * len(total.summands)
    basis = []
    for B in graded_commutant(single):
        for i in range(len(copies)):
            for j in range(len(copies)):
                X = np.zeros((total.dim, total.dim), dtype=B.dtype)
                X[np.ix_(embedding_indices(copies, i), embedding_indices(copies, j))] = B
                basis.append(X)
    return basis


def random_invariant_lagrangian(d: int, field, copies: int, rng):
    """A random ``Cl_d``-invariant Lagrangian in a sum of ``copies`` irreducible ``Cl_{d+1}``-modules."""
    field = as_field(field)
    E = build_clifford(d + 1, field).module
    M = module_sum(*([E] * copies)) if copies > 1 else E
    V0 = drop_last_generator(M)
    basis = commutant_of_copies(M, drop_last_generator(E)) if copies > 1 else None
    U = random_equivariant_unitary(V0, rng, basis)
    rotated = SuperSpace(M.dim_plus, M.dim_minus, field,
                         V0.generators + (U @ M.generators[-1] @ U.conj().T,))
    return extension_lagrangian(rotated)


def irreducible(d: int, field, which: str = "standard") -> SuperSpace:
    """Standard or non-standard graded irreducible of Cl_d."""
    E = build_clifford(d, field).module
    if which == "standard":
        return E
    if graded_irreducible_count(d, field) == 1:
        raise ValueError("Cl_d has a single graded irreducible")
    if d == 0:
        return SuperSpace(0, 1, field)
    # flipping one generator swaps the sign of the volume element on E+
    gens = list(E.generators)
    gens[0] = -gens[0]
    return SuperSpace(E.dim_plus, E.dim_minus, E.field, tuple(gens))


__all__ = [
    "CliffordAlgebra",
    "GradedModuleClass",
    "IndexClass",
    "REAL_GRADED_DIM",
    "REAL_UNGRADED_DIM",
    "abs_class",
    "build_clifford",
    "decompose_module",
    "defect_module",
    "drop_last_generator",
    "extension_lagrangian",
    "graded_dim",
    "graded_irreducible_count",
    "group_of",
    "irreducible",
    "random_invariant_lagrangian",
    "relation_residuals",
    "sublagrangian_index",
    "ungraded_dim",
]
