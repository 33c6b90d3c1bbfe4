"""Lagrangian correspondences and their composition.

Two independent routes compute ``L12 ∘ L01``: a relational brute force
(kernel of the matching condition on the middle space) and the
closed-form unitary ``w`` assembled from the blocks of ``u`` and ``v``
with generalized inverses of ``1 - v11 u11`` and ``1 - u11 v11``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import GapWarning, NotLagrangian, NotUnitaryResult, SpaceMismatch
from .linalg import (
    RANK_CUTOFF,
    Frame,
    eps_proj,
    generalized_inverse,
    hs_norm,
    null_space,
    orthonormalize,
    projection_onto,
    svd,
)
from .lagrangian import (
    GraphIsometry,
    canonical_to_pairs,
    correspondence_space,
    from_graph_isometry,
    general_position,
    graph_frame,
    isotropy_defect,
    join_u,
    pairs_to_canonical,
    split_u,
    to_graph_isometry,
    u_to_T,
)
from .superspace import SuperSpace, embedding


@dataclass(frozen=True)
class Correspondence:
    """A Lagrangian ``L ⊂ ΠV0 ⊕ V1`` read as a relation ``V0 -> V1``."""

    V0: SuperSpace
    V1: SuperSpace
    frame: Frame
    u: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        W = self.space
        F = self.frame
        if F.ambient_dim != W.dim:
            raise ValueError(f"frame of ambient dimension {F.ambient_dim}, expected {W.dim}")
        if W.dim_plus != W.dim_minus or 2 * F.dim != W.dim:
            raise NotLagrangian(f"{F.dim}-dimensional subspace of {W} cannot be Lagrangian")
        u = to_graph_isometry(W, F).u
        if hs_norm(u.conj().T @ u - np.eye(W.dim_plus)) > eps_proj():
            raise NotLagrangian("graph isometry is not unitary")
        u.setflags(write=False)
        object.__setattr__(self, "u", u)

    @property
    def space(self) -> SuperSpace:
        return correspondence_space(self.V0, self.V1)

    @property
    def blocks(self):
        return split_u(self.u, self.V0, self.V1)

    def projector(self) -> np.ndarray:
        return projection_onto(self.frame)

    def pair_basis(self) -> np.ndarray:
        """Frame columns in pair coordinates ``[x0; x1]``."""
        return canonical_to_pairs(self.frame.basis, self.V0, self.V1)

    def T(self, cutoff: float = RANK_CUTOFF) -> np.ndarray:
        return u_to_T(self.u, self.V0, self.V1, cutoff)

    def in_general_position(self) -> bool:
        return general_position(self.V0, self.V1, self.frame)

    @classmethod
    def from_u(cls, V0: SuperSpace, V1: SuperSpace, u) -> "Correspondence":
        W = correspondence_space(V0, V1)
        return cls(V0, V1, from_graph_isometry(GraphIsometry(W, u)))

    @classmethod
    def from_T(cls, V0: SuperSpace, V1: SuperSpace, T) -> "Correspondence":
        return cls(V0, V1, graph_frame(T, V0, V1))

    @classmethod
    def identity(cls, V: SuperSpace) -> "Correspondence":
        return cls.from_T(V, V, np.eye(V.dim, dtype=V.dtype))


def distance(C: Correspondence, D: Correspondence) -> float:
    """Projector distance between two correspondences on the same spaces."""
    if C.space.dim != D.space.dim:
        raise SpaceMismatch("correspondences live in different spaces")
    return hs_norm(C.projector() - D.projector())


def _check_composable(L01: Correspondence, L12: Correspondence):
    if L01.V1 != L12.V0:
        raise SpaceMismatch(f"cannot compose {L01.V0}->{L01.V1} with {L12.V0}->{L12.V1}")


def compose_bruteforce(L01: Correspondence, L12: Correspondence,
                       cutoff: float = RANK_CUTOFF) -> Frame:
    """``{(x0, x2) : (x0, x1) ∈ L01 and (x1, x2) ∈ L12 for some x1}``.

    The result is returned as a frame in ``ΠV0 ⊕ V2`` coordinates.
    """
    _check_composable(L01, L12)
    V0, V1, V2 = L01.V0, L01.V1, L12.V1
    n0, n1 = V0.dim, V1.dim
    A = L01.pair_basis()
    B = L12.pair_basis()
    A0, A1 = A[:n0], A[n0:]
    B1, B2 = B[:n1], B[n1:]
    K = null_space(np.hstack([A1, -B1]), cutoff)
    ka = A.shape[1]
    image = np.vstack([A0 @ K[:ka], B2 @ K[ka:]])
    F = orthonormalize(image, cutoff)
    return Frame(pairs_to_canonical(F.basis, V0, V2))


def spectral_gap(u_blocks, v_blocks, cutoff: float = RANK_CUTOFF):
    """Smallest nonzero singular values of ``1 - v11 u11`` and ``1 - u11 v11``."""
    u11 = u_blocks[3]
    v11 = v_blocks[0]
    gaps = []
    for M in (np.eye(u11.shape[1]) - v11 @ u11, np.eye(u11.shape[0]) - u11 @ v11):
        if M.size == 0:
            gaps.append(np.inf)
            continue
        S = svd(M)[1]
        nonzero = S[S > cutoff * S[0]] if S[0] > 0 else S[:0]
        gaps.append(float(nonzero[-1]) if nonzero.size else np.inf)
    return tuple(gaps)


def v_blocks(v, V1: SuperSpace, V2: SuperSpace):
    """``(v11, v12, v21, v22)`` of the second factor's unitary."""
    return split_u(v, V1, V2)


def compose_unitary(u, v, V0, V1, V2, cutoff: float = RANK_CUTOFF) -> np.ndarray:
    """The closed-form unitary ``w`` of the composite correspondence."""
    u00, u01, u10, u11 = split_u(u, V0, V1)
    v11, v12, v21, v22 = split_u(v, V1, V2)
    X = generalized_inverse(np.eye(V1.dim_plus) - v11 @ u11, cutoff)
    Y = generalized_inverse(np.eye(V1.dim_minus) - u11 @ v11, cutoff)
    return join_u(
        u00 + u01 @ X @ v11 @ u10,
        u01 @ X @ v12,
        v21 @ Y @ u10,
        v22 + v21 @ Y @ u11 @ v12,
    )


def compose_formula(L01: Correspondence, L12: Correspondence,
                    cutoff: float = RANK_CUTOFF, fallback: bool = True) -> Correspondence:
    """Compose via the closed-form unitary.

    When ``1 - v11 u11`` has a nonzero singular value within ``10*cutoff``
    of zero the closed-range surrogate is considered violated; a
    :class:`GapWarning` is issued and the brute-force result returned
    instead (or the warning alone when ``fallback`` is false).
    """
    _check_composable(L01, L12)
    V0, V1, V2 = L01.V0, L01.V1, L12.V1
    gap = min(spectral_gap(L01.blocks, split_u(L12.u, V1, V2), cutoff))
    if gap <= 10 * cutoff:
        warnings.warn(f"spectral gap {gap:.3e} below 10*cutoff; using brute force", GapWarning,
                      stacklevel=2)
        if fallback:
            return Correspondence(V0, V2, compose_bruteforce(L01, L12, cutoff))
    w = compose_unitary(L01.u, L12.u, V0, V1, V2, cutoff)
    n = w.shape[0]
    defect = max(hs_norm(w.conj().T @ w - np.eye(n)), hs_norm(w @ w.conj().T - np.eye(n)))
    if defect > eps_proj():
        raise NotUnitaryResult(f"assembled w is not unitary (residual {defect:.3e})")
    return Correspondence.from_u(V0, V2, w)


def compose(L01: Correspondence, L12: Correspondence, method: str = "formula") -> Correspondence:
    if method == "formula":
        return compose_formula(L01, L12)
    if method == "bruteforce":
        return Correspondence(L01.V0, L12.V1, compose_bruteforce(L01, L12))
    raise ValueError(f"unknown composition method {method!r}")


def composition_isotropy_defect(L01: Correspondence, L12: Correspondence) -> float:
    W = correspondence_space(L01.V0, L12.V1)
    return isotropy_defect(W, compose_bruteforce(L01, L12))


@dataclass
class KernelReport:
    dim_ker_x: int
    dim_ker_y: int
    inclusion_violation: float
    orthogonality_violation: float
    proper_x: bool
    proper_y: bool

    @property
    def max_violation(self) -> float:
        return max(self.inclusion_violation, self.orthogonality_violation)

    def as_dict(self):
        return {
            "dim_ker_1_minus_v11u11": self.dim_ker_x,
            "dim_ker_1_minus_u11v11": self.dim_ker_y,
            "inclusion_violation": self.inclusion_violation,
            "orthogonality_violation": self.orthogonality_violation,
            "max_violation": self.max_violation,
            "proper_inclusion": self.proper_x or self.proper_y,
        }


def _norm(A) -> float:
    return float(np.linalg.norm(A, 2)) if A.size else 0.0


def check_kernel_inclusions(u, v, V0, V1, V2, cutoff: float = RANK_CUTOFF) -> KernelReport:
    """Verify the kernel inclusions and orthogonality relations of the middle blocks.

    ``ker(1 - v11 u11) ⊆ ker(u01) ∩ ker(v21 u11)`` and the kernel is
    orthogonal to ``ran(v12) + ran(v11 u10)``; symmetrically for
    ``1 - u11 v11``.  ``proper_*`` records whether an inclusion is strict.
    """
    u00, u01, u10, u11 = split_u(u, V0, V1)
    v11, v12, v21, v22 = split_u(v, V1, V2)
    Kx = null_space(np.eye(V1.dim_plus) - v11 @ u11, cutoff)
    Ky = null_space(np.eye(V1.dim_minus) - u11 @ v11, cutoff)
    inclusion = max(_norm(u01 @ Kx), _norm(v21 @ u11 @ Kx), _norm(v21 @ Ky), _norm(u01 @ v11 @ Ky))
    orth = max(
        _norm(Kx.conj().T @ v12),
        _norm(Kx.conj().T @ v11 @ u10),
        _norm(Ky.conj().T @ u10),
        _norm(Ky.conj().T @ u11 @ v12),
    )
    big_x = null_space(np.vstack([u01, v21 @ u11]), cutoff).shape[1]
    big_y = null_space(np.vstack([v21, u01 @ v11]), cutoff).shape[1]
    return KernelReport(Kx.shape[1], Ky.shape[1], inclusion, orth,
                        big_x > Kx.shape[1], big_y > Ky.shape[1])


def find_proper_inclusion_witness(rng, field="R", dims=((1, 1), (1, 1), (1, 1)), tries: int = 2000):
    """Search sparse random unitaries for a strict kernel inclusion.

    Haar-random blocks almost surely have trivial kernels, so candidates
    are direct sums of small random unitaries under random row and column
    permutations.  Returns ``(u, v, spaces, report)`` or ``None``.
    """
    from .sampling import haar_unitary

    V0, V1, V2 = (SuperSpace(p, q, field) for p, q in dims)

    def sparse_unitary(n):
        sizes = []
        left = n
        while left:
            s = int(rng.integers(1, left + 1))
            sizes.append(s)
            left -= s
        U = np.zeros((n, n), dtype=V0.dtype)
        at = 0
        for s in sizes:
            U[at:at + s, at:at + s] = haar_unitary(s, field, rng)
            at += s
        return U[rng.permutation(n)][:, rng.permutation(n)]

    nu = V0.dim_minus + V1.dim_plus
    nv = V1.dim_minus + V2.dim_plus
    for _ in range(tries):
        u = sparse_unitary(nu)
        v = sparse_unitary(nv)
        rep = check_kernel_inclusions(u, v, V0, V1, V2)
        if rep.proper_x or rep.proper_y:
            return u, v, (V0, V1, V2), rep
    return None


def direct_sum_correspondence(C: Correspondence, D: Correspondence) -> Correspondence:
    """``C ⊕ D`` as a correspondence ``V0 ⊕ V0' -> V1 ⊕ V1'``."""
    from .superspace import direct_sum

    V0 = direct_sum(C.V0, D.V0)
    V1 = direct_sum(C.V1, D.V1)
    cols = []
    for i, X in enumerate((C, D)):
        P = X.pair_basis()
        n0 = X.V0.dim
        cols.append(np.vstack([embedding(V0, i) @ P[:n0], embedding(V1, i) @ P[n0:]]))
    pairs = np.hstack(cols)
    return Correspondence(V0, V1, Frame(pairs_to_canonical(pairs, V0, V1)))


__all__ = [
    "Correspondence",
    "KernelReport",
    "check_kernel_inclusions",
    "compose",
    "compose_bruteforce",
    "compose_formula",
    "compose_unitary",
    "composition_isotropy_defect",
    "direct_sum_correspondence",
    "distance",
    "find_proper_inclusion_witness",
    "spectral_gap",
]
