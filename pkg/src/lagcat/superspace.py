"""Finite-dimensional super Hilbert spaces.

Coordinates are always ordered ``[x+; x-]``, so the grading operator is
``diag(I_p, -I_q)``.  A space may carry a right Clifford action, stored
as explicit generator matrices in those coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import DegreeMismatch, DimensionMismatch, FieldMismatch
from .linalg import EPS_PROJ, Field, Frame, as_field, eps_proj, projection_onto

RELATION_TOL = 1e-10


@dataclass(frozen=True)
class SuperSpace:
    dim_plus: int
    dim_minus: int
    field: Field = Field.REAL
    generators: tuple = ()
    summands: tuple = dc_field(default=(), compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "field", as_field(self.field))
        if self.dim_plus < 0 or self.dim_minus < 0:
            raise ValueError("dimensions must be nonnegative")
        gens = tuple(self.field.cast(e) for e in self.generators)
        n = self.dim
        for e in gens:
            if e.shape != (n, n):
                raise DimensionMismatch(f"generator of shape {e.shape} on a space of dimension {n}")
            e.setflags(write=False)
        object.__setattr__(self, "generators", gens)
        bad = clifford_relation_defect(self)
        if bad > RELATION_TOL:
            raise ValueError(f"Clifford relations violated (residual {bad:.3e})")

    @property
    def dim(self) -> int:
        return self.dim_plus + self.dim_minus

    @property
    def degree(self) -> int:
        return len(self.generators)

    @property
    def dtype(self):
        return self.field.dtype

    def gamma(self) -> np.ndarray:
        return np.diag(np.r_[np.ones(self.dim_plus), -np.ones(self.dim_minus)]).astype(self.dtype)

    def plus(self, x):
        return np.asarray(x)[: self.dim_plus]

    def minus(self, x):
        return np.asarray(x)[self.dim_plus:]

    def with_generators(self, generators) -> "SuperSpace":
        return SuperSpace(self.dim_plus, self.dim_minus, self.field, tuple(generators))

    def __eq__(self, other):
        if not isinstance(other, SuperSpace):
            return NotImplemented
        if (self.dim_plus, self.dim_minus, self.field, self.degree) != (
            other.dim_plus, other.dim_minus, other.field, other.degree
        ):
            return False
        return all(np.array_equal(a, b) for a, b in zip(self.generators, other.generators))

    def __hash__(self):
        return hash((self.dim_plus, self.dim_minus, self.field, self.degree))

    def __repr__(self):
        return f"SuperSpace({self.dim_plus}|{self.dim_minus}, {self.field.value}, d={self.degree})"


def clifford_relation_defect(space: SuperSpace) -> float:
    """Largest residual among the Clifford, skewness and oddness relations."""
    gens = space.generators
    if not gens:
        return 0.0
    n = space.dim
    G = space.gamma()
    I = np.eye(n)
    worst = 0.0
    for j, e in enumerate(gens):
        worst = max(worst, np.linalg.norm(e.conj().T + e), np.linalg.norm(e @ G + G @ e))
        for k in range(j, len(gens)):
            f = gens[k]
            target = -2 * I if j == k else 0
            worst = max(worst, np.linalg.norm(e @ f + f @ e - target))
    return float(worst)


def b_form(space: SuperSpace, x, y):
    """``B(x, y) = <Γx, y>``, conjugate-linear in ``x``."""
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape[0] != space.dim or y.shape[0] != space.dim:
        raise DimensionMismatch(f"vectors of length {x.shape[0]}, {y.shape[0]} in a space of dimension {space.dim}")
    p = space.dim_plus
    return np.vdot(x[:p], y[:p]) - np.vdot(x[p:], y[p:])


def opposite_permutation(space: SuperSpace) -> np.ndarray:
    """Index map ``perm`` with ``x_opposite = x[perm]``."""
    p, q = space.dim_plus, space.dim_minus
    return np.r_[np.arange(p, p + q), np.arange(p)].astype(int)


def opposite(space: SuperSpace) -> SuperSpace:
    """The same space with the grading reversed.

    The Clifford action is unchanged (only reindexed), so that invariance
    of ``L ⊂ ΠV0 ⊕ V1`` means ``(x0 e, x1 e) ∈ L`` for ``(x0, x1) ∈ L``.
    """
    perm = opposite_permutation(space)
    gens = tuple(e[np.ix_(perm, perm)] for e in space.generators)
    return SuperSpace(space.dim_minus, space.dim_plus, space.field, gens)


def embedding_indices(spaces, i: int) -> np.ndarray:
    """Positions of summand ``i`` inside the canonical coordinates of the sum."""
    P = sum(s.dim_plus for s in spaces)
    off_p = sum(s.dim_plus for s in spaces[:i])
    off_m = sum(s.dim_minus for s in spaces[:i])
    s = spaces[i]
    return np.r_[np.arange(off_p, off_p + s.dim_plus), P + np.arange(off_m, off_m + s.dim_minus)].astype(int)


def embedding(space: SuperSpace, i: int) -> np.ndarray:
    """Isometric embedding of the ``i``-th summand of a direct sum."""
    if not space.summands:
        raise ValueError("space was not built by direct_sum")
    idx = embedding_indices(space.summands, i)
    J = np.zeros((space.dim, len(idx)), dtype=space.dtype)
    J[idx, np.arange(len(idx))] = 1
    return J


def direct_sum(*spaces: SuperSpace) -> SuperSpace:
    """Orthogonal direct sum, with ``(V0 ⊕ V1)^± = V0^± ⊕ V1^±``."""
    if not spaces:
        raise ValueError("direct_sum needs at least one space")
    f = spaces[0].field
    d = spaces[0].degree
    for s in spaces[1:]:
        if s.field is not f:
            raise FieldMismatch("summands over different fields")
        if s.degree != d:
            raise DegreeMismatch("summands of different Clifford degree")
    n = sum(s.dim for s in spaces)
    gens = []
    for j in range(d):
        e = np.zeros((n, n), dtype=f.dtype)
        for i, s in enumerate(spaces):
            idx = embedding_indices(spaces, i)
            e[np.ix_(idx, idx)] = s.generators[j]
        gens.append(e)
    return SuperSpace(
        sum(s.dim_plus for s in spaces),
        sum(s.dim_minus for s in spaces),
        f,
        tuple(gens),
        summands=tuple(spaces),
    )


def embed_frames(total: SuperSpace, frames) -> Frame:
    """Direct sum of frames living in the summands of ``total``."""
    cols = [embedding(total, i) @ F.basis for i, F in enumerate(frames)]
    if not cols:
        return Frame.empty(total.dim, total.field)
    return Frame(np.hstack(cols))


def clifford_invariant(space: SuperSpace, F: Frame, tol: float | None = None) -> bool:
    """True when ``span(F)`` is stable under every Clifford generator."""
    tol = eps_proj() if tol is None else tol
    if F.dim == 0 or F.dim == space.dim:
        return True
    P = projection_onto(F)
    Q = np.eye(space.dim) - P
    return all(np.linalg.norm(Q @ e @ P) <= tol for e in space.generators)


def restrict_action(space: SuperSpace, plus_basis, minus_basis) -> SuperSpace:
    """The Clifford action restricted to an invariant graded subspace.

    ``plus_basis`` and ``minus_basis`` are orthonormal bases of the
    subspace's intersections with ``V+`` and ``V-`` (in ``V+`` and ``V-``
    coordinates respectively).
    """
    p = space.dim_plus
    a = plus_basis.shape[1]
    b = minus_basis.shape[1]
    Q = np.zeros((space.dim, a + b), dtype=space.dtype)
    Q[:p, :a] = plus_basis
    Q[p:, a:] = minus_basis
    gens = tuple(Q.conj().T @ e @ Q for e in space.generators)
    return SuperSpace(a, b, space.field, gens)


__all__ = [
    "EPS_PROJ",
    "SuperSpace",
    "b_form",
    "clifford_invariant",
    "clifford_relation_defect",
    "direct_sum",
    "embed_frames",
    "embedding",
    "opposite",
    "opposite_permutation",
    "restrict_action",
]
