"""Dense linear algebra kernels shared by the rest of the package.

Every subspace is carried as a :class:`Frame` (orthonormal columns) and
every rank decision goes through one relative cutoff on singular values.
Real and complex arithmetic share the same code; the field is a tag.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass

import numpy as np

from .errors import NonConvergence

RANK_CUTOFF = 1e-10
EPS_ORTHO = 1e-10
EPS_PROJ = 1e-8


def eps_proj() -> float:
    """Subspace tolerance, overridable with the ``LAGCAT_TOL`` variable."""
    value = os.environ.get("LAGCAT_TOL")
    if value is None or value == "":
        return EPS_PROJ
    return float(value)


class Field(enum.Enum):
    REAL = "R"
    COMPLEX = "C"

    @property
    def dtype(self):
        return np.float64 if self is Field.REAL else np.complex128

    @classmethod
    def of(cls, A) -> "Field":
        return cls.COMPLEX if np.iscomplexobj(A) else cls.REAL

    def cast(self, A) -> np.ndarray:
        A = np.asarray(A)
        if self is Field.REAL:
            if np.iscomplexobj(A):
                if np.any(A.imag != 0):
                    raise ValueError("complex entries in a real matrix")
                A = A.real
            return A.astype(np.float64)
        return A.astype(np.complex128)


def as_field(field) -> Field:
    if isinstance(field, Field):
        return field
    if field in ("R", "real", "REAL"):
        return Field.REAL
    if field in ("C", "complex", "COMPLEX"):
        return Field.COMPLEX
    raise ValueError(f"unknown field {field!r}")


@dataclass(frozen=True)
class Frame:
    """Orthonormal basis (columns) of a subspace of a finite-dimensional space."""

    basis: np.ndarray

    def __post_init__(self):
        B = np.asarray(self.basis)
        if B.ndim != 2:
            raise ValueError("frame basis must be a 2d array")
        if not np.all(np.isfinite(B)):
            raise ValueError("frame basis has non-finite entries")
        n, k = B.shape
        if k > n:
            raise ValueError(f"{k} orthonormal columns cannot live in dimension {n}")
        if k:
            defect = np.linalg.norm(B.conj().T @ B - np.eye(k))
            if defect > EPS_ORTHO:
                raise ValueError(f"frame columns not orthonormal (defect {defect:.3e})")
        B = B.copy()
        B.setflags(write=False)
        object.__setattr__(self, "basis", B)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def field(self) -> Field:
        return Field.of(self.basis)

    @classmethod
    def empty(cls, n: int, field: Field = Field.REAL) -> "Frame":
        return cls(np.zeros((n, 0), dtype=field.dtype))

    def __repr__(self):
        return f"Frame(ambient_dim={self.ambient_dim}, dim={self.dim})"


def svd(A, full_matrices: bool = False):
    """Singular value decomposition ``A = U @ diag(S) @ V^H``.

    Returns ``(U, S, V)`` with ``V`` (not ``V^H``) so that the columns of
    ``V`` are right singular vectors.
    """
    A = np.asarray(A)
    if not np.all(np.isfinite(A)):
        raise NonConvergence("svd input has non-finite entries")
    try:
        U, S, Vh = np.linalg.svd(A, full_matrices=full_matrices)
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(str(exc)) from exc
    return U, S, Vh.conj().T


def _rank(S, cutoff: float) -> int:
    if S.size == 0 or S[0] == 0:
        return 0
    # a singular value sitting exactly on the threshold counts as zero
    return int(np.count_nonzero(S > cutoff * S[0]))


def generalized_inverse(A, cutoff: float = RANK_CUTOFF) -> np.ndarray:
    """Inverse on ``ran(A)``, zero on ``ran(A)^⊥``.

    Singular values at or below ``cutoff * max(S)`` are treated as zero,
    so the zero matrix maps to the zero matrix of transposed shape.
    """
    A = np.asarray(A)
    m, n = A.shape
    if A.size == 0:
        return np.zeros((n, m), dtype=A.dtype)
    U, S, V = svd(A)
    r = _rank(S, cutoff)
    return (V[:, :r] / S[:r]) @ U[:, :r].conj().T


def null_space(A, cutoff: float = RANK_CUTOFF) -> np.ndarray:
    """Orthonormal basis of ``ker(A)`` under the relative rank cutoff."""
    A = np.asarray(A)
    m, n = A.shape
    if n == 0:
        return np.zeros((0, 0), dtype=A.dtype)
    if m == 0:
        return np.eye(n, dtype=A.dtype)
    _, S, V = svd(A, full_matrices=True)
    return V[:, _rank(S, cutoff):]


def orthonormalize(A, cutoff: float = RANK_CUTOFF) -> Frame:
    """Frame for the column space of ``A``; rank decided by the SVD cutoff."""
    A = np.asarray(A)
    n = A.shape[0]
    if A.size == 0:
        return Frame(np.zeros((n, 0), dtype=A.dtype))
    U, S, _ = svd(A)
    return Frame(U[:, :_rank(S, cutoff)])


def projection_onto(F: Frame) -> np.ndarray:
    B = F.basis
    return B @ B.conj().T


def hs_norm(A) -> float:
    """Hilbert-Schmidt (Frobenius) norm."""
    A = np.asarray(A)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A))


def projector_distance(F: Frame, G: Frame) -> float:
    """Frobenius distance of the orthogonal projectors onto two frames."""
    if F.ambient_dim != G.ambient_dim:
        raise ValueError("frames live in different dimensions")
    return hs_norm(projection_onto(F) - projection_onto(G))


def frame_of(A, cutoff: float = RANK_CUTOFF) -> Frame:
    """Accept a Frame or a raw matrix of spanning columns."""
    if isinstance(A, Frame):
        return A
    return orthonormalize(A, cutoff)
