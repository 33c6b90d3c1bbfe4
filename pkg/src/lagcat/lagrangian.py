"""Isotropic subspaces, Lagrangians and their partial-isometry encoding.

An isotropic subspace ``L`` of ``V = V+ ⊕ V-`` is the graph of a unique
partial isometry ``u: V+ -> V-`` restricted to ``ker(u)^⊥``.  ``L`` is a
Lagrangian exactly when ``u`` is unitary.

Correspondences ``V0 -> V1`` live in ``ΠV0 ⊕ V1``, whose canonical
coordinates are ``[x0-, x1+, x0+, x1-]``.  Their unitary ``u`` then has
the block form

    u = [[u00, u01],      u00: V0- -> V0+    u01: V1+ -> V0+
         [u10, u11]]      u10: V0- -> V1-    u11: V1+ -> V1-

and an operator ``T: V0 -> V1`` is written ``[[T++, T+-], [T-+, T--]]``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import NotIsotropic, NotPartialIsometry, Singular, SingularBlock
from .linalg import (
    RANK_CUTOFF,
    Frame,
    eps_proj,
    generalized_inverse,
    hs_norm,
    null_space,
    orthonormalize,
    svd,
)
from .superspace import SuperSpace, direct_sum, opposite


class LagKind(enum.Enum):
    ISOTROPIC = "isotropic"
    SUBLAGRANGIAN = "sub-Lagrangian"
    LAGRANGIAN = "Lagrangian"


@dataclass(frozen=True)
class GraphIsometry:
    """Partial isometry ``u: V+ -> V-`` standing for ``graph'(u)``."""

    space: SuperSpace
    u: np.ndarray

    def __post_init__(self):
        u = self.space.field.cast(self.u)
        if u.shape != (self.space.dim_minus, self.space.dim_plus):
            raise ValueError(
                f"u must be {self.space.dim_minus}x{self.space.dim_plus}, got {u.shape}"
            )
        u = u.copy()
        u.setflags(write=False)
        object.__setattr__(self, "u", u)

    def partial_isometry_defect(self) -> float:
        u = self.u
        return hs_norm(u @ u.conj().T @ u - u)

    @property
    def rank(self) -> int:
        return orthonormalize(self.u.conj().T).dim

    def kernels(self):
        """Orthonormal bases of ``ker(u)`` in V+ and ``ker(u^H)`` in V-."""
        return null_space(self.u), null_space(self.u.conj().T)

    @property
    def defect_dim(self) -> int:
        p, q = self.space.dim_plus, self.space.dim_minus
        return p + q - 2 * self.rank

    def is_unitary(self, tol: float | None = None) -> bool:
        tol = eps_proj() if tol is None else tol
        p, q = self.space.dim_plus, self.space.dim_minus
        if p != q:
            return False
        return hs_norm(self.u.conj().T @ self.u - np.eye(p)) <= tol


def isotropy_defect(space: SuperSpace, F: Frame) -> float:
    B = F.basis
    return hs_norm(B.conj().T @ space.gamma() @ B)


def is_isotropic(space: SuperSpace, F: Frame, tol: float | None = None) -> bool:
    tol = eps_proj() if tol is None else tol
    return isotropy_defect(space, F) <= tol


def _require_isotropic(space, F):
    if F.ambient_dim != space.dim:
        raise ValueError(f"frame of ambient dimension {F.ambient_dim} in a space of dimension {space.dim}")
    if not is_isotropic(space, F):
        raise NotIsotropic(f"frame is not isotropic (residual {isotropy_defect(space, F):.3e})")


def defect_frame(space: SuperSpace, F: Frame) -> Frame:
    """Orthonormal basis of ``(L ⊕ ΓL)^⊥``."""
    _require_isotropic(space, F)
    LG = np.hstack([F.basis, space.gamma() @ F.basis])
    return Frame(null_space(LG.conj().T))


def classify(space: SuperSpace, F: Frame) -> LagKind:
    """Lagrangian when ``L + ΓL`` is everything, sub-Lagrangian otherwise."""
    _require_isotropic(space, F)
    codim = space.dim - 2 * F.dim
    return LagKind.LAGRANGIAN if codim == 0 else LagKind.SUBLAGRANGIAN


def to_graph_isometry(space: SuperSpace, F: Frame) -> GraphIsometry:
    """The partial isometry whose restricted graph is ``span(F)``."""
    _require_isotropic(space, F)
    p = space.dim_plus
    A = F.basis[:p]
    B = F.basis[p:]
    if F.dim == 0:
        return GraphIsometry(space, np.zeros((space.dim_minus, p), dtype=space.dtype))
    return GraphIsometry(space, B @ generalized_inverse(A))


def from_graph_isometry(g: GraphIsometry, tol: float | None = None) -> Frame:
    """Frame ``(x+, u x+)/sqrt(2)`` over an orthonormal basis of ``ker(u)^⊥``."""
    tol = eps_proj() if tol is None else tol
    defect = g.partial_isometry_defect()
    if defect > tol:
        raise NotPartialIsometry(f"u u^H u != u (residual {defect:.3e})")
    Q = orthonormalize(g.u.conj().T).basis
    basis = np.vstack([Q, g.u @ Q]) / np.sqrt(2)
    # re-orthonormalise to absorb the tolerated partial-isometry defect
    return orthonormalize(basis) if Q.shape[1] else Frame(basis)


def gamma_image(g: GraphIsometry) -> GraphIsometry:
    """``ΓL`` is the restricted graph of ``-u``."""
    return GraphIsometry(g.space, -g.u)


def projection_formula(g: GraphIsometry) -> np.ndarray:
    u = g.u
    uh = u.conj().T
    return 0.5 * np.block([[uh @ u, uh], [u, u @ uh]])


# --- correspondences -------------------------------------------------------


def correspondence_space(V0: SuperSpace, V1: SuperSpace) -> SuperSpace:
    return direct_sum(opposite(V0), V1)


def pair_permutation(V0: SuperSpace, V1: SuperSpace) -> np.ndarray:
    """Index map from pair coordinates ``[x0; x1]`` to ``ΠV0 ⊕ V1`` coordinates."""
    p0, q0, p1, q1 = V0.dim_plus, V0.dim_minus, V1.dim_plus, V1.dim_minus
    n0 = p0 + q0
    return np.r_[
        np.arange(p0, n0), n0 + np.arange(p1), np.arange(p0), n0 + np.arange(p1, p1 + q1)
    ].astype(int)


def pairs_to_canonical(M, V0: SuperSpace, V1: SuperSpace) -> np.ndarray:
    """Rows of ``M`` in pair coordinates, reordered to canonical coordinates."""
    return np.asarray(M)[pair_permutation(V0, V1)]


def canonical_to_pairs(M, V0: SuperSpace, V1: SuperSpace) -> np.ndarray:
    perm = pair_permutation(V0, V1)
    M = np.asarray(M)
    out = np.empty_like(M)
    out[perm] = M
    return out


def split_u(u, V0: SuperSpace, V1: SuperSpace):
    """``(u00, u01, u10, u11)`` of a correspondence unitary."""
    p0, q0 = V0.dim_plus, V0.dim_minus
    u = np.asarray(u)
    if u.shape != (p0 + V1.dim_minus, q0 + V1.dim_plus):
        raise ValueError(f"u has shape {u.shape}, expected {(p0 + V1.dim_minus, q0 + V1.dim_plus)}")
    return u[:p0, :q0], u[:p0, q0:], u[p0:, :q0], u[p0:, q0:]


def join_u(u00, u01, u10, u11) -> np.ndarray:
    return np.block([[u00, u01], [u10, u11]])


def split_T(T, V0: SuperSpace, V1: SuperSpace):
    """``(T++, T+-, T-+, T--)`` of an operator ``V0 -> V1``."""
    p0, p1 = V0.dim_plus, V1.dim_plus
    T = np.asarray(T)
    if T.shape != (V1.dim, V0.dim):
        raise ValueError(f"T has shape {T.shape}, expected {(V1.dim, V0.dim)}")
    return T[:p1, :p0], T[:p1, p0:], T[p1:, :p0], T[p1:, p0:]


def _checked_inverse(A, name, cutoff=RANK_CUTOFF):
    m, n = A.shape
    if m != n:
        raise SingularBlock(f"{name} is {m}x{n}, not square")
    if m == 0:
        return A.copy()
    _, S, _ = svd(A)
    if S[-1] <= cutoff * max(1.0, S[0]):
        raise SingularBlock(f"{name} is numerically singular (smallest singular value {S[-1]:.3e})")
    return np.linalg.inv(A)


def u_to_T(u, V0: SuperSpace, V1: SuperSpace, cutoff: float = RANK_CUTOFF) -> np.ndarray:
    """The operator ``T`` with ``graph(T) = graph(u)`` for a general-position ``u``."""
    u00, u01, u10, u11 = split_u(u, V0, V1)
    a = _checked_inverse(u01, "u01", cutoff)
    return np.block([[a, -a @ u00], [u11 @ a, u10 - u11 @ a @ u00]])


def T_to_u(T, V0: SuperSpace, V1: SuperSpace, cutoff: float = RANK_CUTOFF) -> np.ndarray:
    """The unitary ``u`` of the correspondence ``graph(T)``."""
    Tpp, Tpm, Tmp, Tmm = split_T(T, V0, V1)
    a = _checked_inverse(Tpp, "T++", cutoff)
    return np.block([[-a @ Tpm, a], [Tmm - Tmp @ a @ Tpm, Tmp @ a]])


def _grading(V):
    if isinstance(V, SuperSpace):
        return V.gamma()
    return np.asarray(V)


def lagrangian_graph_residual(T, V0, V1) -> float:
    """``‖T^H Γ1 T − Γ0‖_F``, which vanishes iff ``T^{-1} = Γ0 T^H Γ1``."""
    G0 = _grading(V0)
    G1 = _grading(V1)
    T = np.asarray(T)
    return hs_norm(T.conj().T @ G1 @ T - G0)


def is_lagrangian_graph(T, V0, V1, tol: float | None = None) -> bool:
    """Whether ``graph(T)`` is a Lagrangian correspondence.

    ``V0`` and ``V1`` may be spaces or explicit grading matrices (for
    operators written in a non-canonical basis).  The residual is scaled
    by ``max(1, ‖T‖²)``, which equals the condition number for graphs of
    this kind.
    """
    tol = eps_proj() if tol is None else tol
    T = np.asarray(T)
    if T.shape[0] != T.shape[1]:
        raise Singular(f"T is {T.shape[0]}x{T.shape[1]}, not square")
    if T.size == 0:
        return True
    _, S, _ = svd(T)
    if S[-1] == 0:
        raise Singular("T has a nontrivial kernel")
    return lagrangian_graph_residual(T, V0, V1) <= tol * max(1.0, S[0] ** 2)


def graph_frame_pairs(T) -> Frame:
    """Orthonormal frame of ``graph(T)`` in pair coordinates.

    Built from the SVD of ``T`` so that very large singular values do not
    swamp the small ones.
    """
    T = np.asarray(T)
    m, n = T.shape
    if n == 0:
        return Frame(np.zeros((m, 0), dtype=T.dtype))
    if m == n and not np.any(T - np.diag(np.diag(T))):
        # diagonal operators are handled exactly: LAPACK loses the small
        # singular values of a diagonal with a wide dynamic range
        t = np.diag(T)
        r = np.hypot(1.0, np.abs(t))
        return Frame(np.vstack([np.diag(1 / r), np.diag(t / r)]))
    U, S, V = svd(T, full_matrices=True)
    sig = np.zeros(n)
    sig[: len(S)] = S
    r = np.hypot(1.0, sig)
    top = V / r
    bottom = np.zeros((m, n), dtype=np.result_type(T, U))
    k = min(m, n)
    bottom[:, :k] = U[:, :k] * (sig[:k] / r[:k])
    return Frame(np.vstack([top, bottom]))


def graph_frame(T, V0: SuperSpace, V1: SuperSpace) -> Frame:
    """Frame of ``graph(T)`` in ``ΠV0 ⊕ V1`` coordinates."""
    return Frame(pairs_to_canonical(graph_frame_pairs(T).basis, V0, V1))


def u_frame(u, V0: SuperSpace, V1: SuperSpace) -> Frame:
    W = correspondence_space(V0, V1)
    return from_graph_isometry(GraphIsometry(W, u))


def general_position(V0: SuperSpace, V1: SuperSpace, F: Frame, margin: float = 1e-8) -> bool:
    """Whether ``span(F)`` meets neither ``V0 ⊕ 0`` nor ``0 ⊕ V1``."""
    p0, q0, p1 = V0.dim_plus, V0.dim_minus, V1.dim_plus
    n = F.ambient_dim
    block0 = np.r_[np.arange(q0), np.arange(q0 + p1, q0 + p1 + p0)].astype(int)
    block1 = np.setdiff1d(np.arange(n), block0)
    for idx in (block0, block1):
        if F.dim and len(idx) and np.linalg.norm(F.basis[idx], 2) >= 1 - margin:
            return False
    return True


__all__ = [
    "GraphIsometry",
    "LagKind",
    "T_to_u",
    "canonical_to_pairs",
    "classify",
    "correspondence_space",
    "defect_frame",
    "from_graph_isometry",
    "gamma_image",
    "general_position",
    "graph_frame",
    "graph_frame_pairs",
    "is_isotropic",
    "is_lagrangian_graph",
    "join_u",
    "pair_permutation",
    "pairs_to_canonical",
    "projection_formula",
    "split_T",
    "split_u",
    "to_graph_isometry",
    "u_frame",
    "u_to_T",
]
