"""Reproducible random instances: unitaries, partial isometries, correspondences."""

from __future__ import annotations

import numpy as np

from .linalg import Field, as_field, svd
from .superspace import SuperSpace


def gaussian(shape, field, rng: np.random.Generator) -> np.ndarray:
    field = as_field(field)
    if field is Field.REAL:
        return rng.standard_normal(shape)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def haar_unitary(n: int, field, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthogonal/unitary matrix (QR with phase correction)."""
    field = as_field(field)
    if n == 0:
        return np.zeros((0, 0), dtype=field.dtype)
    Q, R = np.linalg.qr(gaussian((n, n), field, rng))
    d = np.diag(R)
    phases = d / np.abs(d)
    return Q * phases


def random_partial_isometry(rows: int, cols: int, rank: int, field, rng) -> np.ndarray:
    """A ``rows x cols`` partial isometry of the given rank."""
    if rank > min(rows, cols):
        raise ValueError("rank exceeds the smaller dimension")
    U = haar_unitary(rows, field, rng)[:, :rank]
    V = haar_unitary(cols, field, rng)[:, :rank]
    return U @ V.conj().T


def random_space(rng, field, max_dim: int = 8, min_dim: int = 0, degree: int = 0) -> SuperSpace:
    p, q = rng.integers(min_dim, max_dim + 1, size=2)
    return SuperSpace(int(p), int(q), field)


def correspondence_unitary(V0: SuperSpace, V1: SuperSpace, rng, general: bool = False,
                           min_sv: float = 0.05, max_tries: int = 10_000) -> np.ndarray:
    """Random unitary ``u: V0- ⊕ V1+ -> V0+ ⊕ V1-``.

    With ``general=True`` the draw is rejected until both ``u01`` and
    ``u10`` have smallest singular value above ``min_sv``.
    """
    n_in = V0.dim_minus + V1.dim_plus
    n_out = V0.dim_plus + V1.dim_minus
    if n_in != n_out:
        raise ValueError(f"no Lagrangian correspondence between {V0} and {V1}")
    p0, q0 = V0.dim_plus, V0.dim_minus
    for _ in range(max_tries):
        u = haar_unitary(n_in, V0.field, rng)
        if not general:
            return u
        ok = True
        for block in (u[:p0, q0:], u[p0:, :q0]):
            if block.shape[0] != block.shape[1]:
                raise ValueError("general position needs V0 and V1 of equal dimensions")
            if block.size and svd(block)[1][-1] <= min_sv:
                ok = False
        if ok:
            return u
    raise RuntimeError("rejection sampling did not find a general-position unitary")


def _psd_sqrt(A):
    w, Q = np.linalg.eigh(A)
    return (Q * np.sqrt(np.clip(w, 0, None))) @ Q.conj().T


def indefinite_unitary(p: int, q: int, field, rng, scale: float = 0.7) -> np.ndarray:
    """Random ``T`` with ``T^H Γ T = Γ`` for ``Γ = diag(I_p, -I_q)``.

    A hyperbolic boost built from a Gaussian ``Y`` is sandwiched between
    grading-preserving unitaries.  Such ``T`` are exactly the operators
    whose graphs are Lagrangian correspondences ``(p|q) -> (p|q)``.
    """
    Y = scale * gaussian((p, q), field, rng)
    boost = np.block([
        [_psd_sqrt(np.eye(p) + Y @ Y.conj().T), Y],
        [Y.conj().T, _psd_sqrt(np.eye(q) + Y.conj().T @ Y)],
    ])

    def even_unitary():
        U = np.zeros((p + q, p + q), dtype=as_field(field).dtype)
        U[:p, :p] = haar_unitary(p, field, rng)
        U[p:, p:] = haar_unitary(q, field, rng)
        return U

    return even_unitary() @ boost @ even_unitary()


# --- polarized spaces and morphisms of a prescribed type -----------------------------


def random_polarized(V: SuperSpace, rng):
    """``V`` (with ``dim V+ = dim V-``) polarized by the graph of a random unitary."""
    from .polarization import PolarizedSpace

    if V.dim_plus != V.dim_minus:
        raise ValueError("a Lagrangian polarization needs dim V+ = dim V-")
    return PolarizedSpace.from_w(V, haar_unitary(V.dim_plus, V.field, rng))


def _off_diagonal(u01, u10):
    p, q = u01.shape[0], u10.shape[1]
    return np.block([[np.zeros((p, q), dtype=u01.dtype), u01], [u10, np.zeros((u10.shape[0], u01.shape[1]), dtype=u01.dtype)]])


def type1_unitary(w0, w1, rng, field) -> np.ndarray:
    """Off-diagonal ``u`` with ``u01 w1^H u10 = w0^H``: the graph of a polarization-preserving unitary."""
    u01 = haar_unitary(w0.shape[1], field, rng)
    u10 = w1 @ u01.conj().T @ w0.conj().T
    return _off_diagonal(u01, u10)


def type2_unitary(w0, w1) -> np.ndarray:
    """``u = diag(-w0^H, w1)``, the unitary of ``L0^⊥ ⊕ L1``."""
    a = -w0.conj().T
    z01 = np.zeros((a.shape[0], w1.shape[1]), dtype=np.result_type(a, w1))
    z10 = np.zeros((w1.shape[0], a.shape[1]), dtype=z01.dtype)
    return np.block([[a, z01], [z10, w1]])


def random_cellular_space(core: int, cell: int, field, rng):
    """Cellular polarized space with ``(core|core)`` core and ``(cell|cell)`` cell."""
    from .polarization import CellularPolarizedSpace

    return CellularPolarizedSpace(
        random_polarized(SuperSpace(core, core, field), rng),
        random_polarized(SuperSpace(cell, cell, field), rng),
    )


def random_cellular_morphism(kind: str, P0, P1, rng):
    """Random cellular correspondence of type ``'1'`` or ``'2'`` between cellular spaces.

    Type (1): off-diagonal everywhere and polarization preserving on the
    cell.  Type (2): exactly ``L0^⊥ ⊕ L1`` on the cell, arbitrary on the
    core.
    """
    from .composition import Correspondence
    from .polarization import CellularCorrespondence

    field = P0.core.space.field
    parts = []
    for a, b, is_cell in ((P0.core, P1.core, False), (P0.cell, P1.cell, True)):
        if kind == "1":
            if is_cell:
                u = type1_unitary(a.w, b.w, rng, field)
            else:
                u = _off_diagonal(haar_unitary(a.w.shape[1], field, rng), haar_unitary(b.w.shape[0], field, rng))
        elif kind == "2":
            u = type2_unitary(a.w, b.w) if is_cell else correspondence_unitary(a.space, b.space, rng)
        else:
            raise ValueError("kind must be '1' or '2'")
        parts.append(Correspondence.from_u(a.space, b.space, u))
    return CellularCorrespondence(*parts)
