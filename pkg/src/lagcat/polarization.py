"""Polarized spaces and the two kinds of morphisms between them.

Closeness of sub-Lagrangians is Hilbert-Schmidt closeness of their
partial isometries.  In finite dimensions every operator is
Hilbert-Schmidt, so dense routines take an explicit ``hs_threshold``
(default ``inf``, i.e. the vacuous finite-dimensional reading).  The
*cellular* model below is a non-vacuous stand-in: a dense core plus one
cell repeated infinitely often, where a difference is Hilbert-Schmidt
exactly when its cell component vanishes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .composition import Correspondence, compose_formula, spectral_gap
from .errors import NotAMorphism, NotInvariant, SpaceMismatch
from .lagrangian import GraphIsometry, from_graph_isometry, split_u
from .linalg import RANK_CUTOFF, eps_proj, hs_norm
from .sequence import TailSymbol
from .superspace import SuperSpace, clifford_invariant, direct_sum, opposite


@dataclass(frozen=True)
class PolarizedSpace:
    space: SuperSpace
    ref: GraphIsometry

    def __post_init__(self):
        if self.ref.space != self.space:
            raise SpaceMismatch("reference sub-Lagrangian lives in another space")
        if self.space.degree and not clifford_invariant(self.space, from_graph_isometry(self.ref)):
            raise NotInvariant("reference sub-Lagrangian is not Clifford invariant")

    @property
    def w(self) -> np.ndarray:
        return self.ref.u

    @classmethod
    def from_w(cls, space: SuperSpace, w) -> "PolarizedSpace":
        return cls(space, GraphIsometry(space, w))


class MorphismKind(enum.Enum):
    TYPE1 = "type1"
    TYPE2 = "type2"
    BOTH = "both"
    NEITHER = "neither"

    @property
    def is_type1(self) -> bool:
        return self in (MorphismKind.TYPE1, MorphismKind.BOTH)

    @property
    def is_type2(self) -> bool:
        return self in (MorphismKind.TYPE2, MorphismKind.BOTH)


@dataclass
class MorphismType:
    kind: MorphismKind
    T: object = None
    residuals: dict = field(default_factory=dict)

    @classmethod
    def from_flags(cls, t1: bool, t2: bool, T=None, residuals=None) -> "MorphismType":
        kind = {
            (True, True): MorphismKind.BOTH,
            (True, False): MorphismKind.TYPE1,
            (False, True): MorphismKind.TYPE2,
            (False, False): MorphismKind.NEITHER,
        }[(t1, t2)]
        return cls(kind, T if t1 else None, residuals or {})


def close(space: SuperSpace, L1: GraphIsometry, L2: GraphIsometry, hs_threshold: float = math.inf) -> bool:
    if L1.space != space or L2.space != space:
        raise SpaceMismatch("sub-Lagrangians of different spaces")
    return hs_norm(L1.u - L2.u) <= hs_threshold


def _type_residuals(u_blocks, w0, w1):
    u00, u01, u10, u11 = u_blocks
    u = np.block([[u00, u01], [u10, u11]])
    target = np.zeros_like(u)
    p0 = u00.shape[0]
    q0 = u00.shape[1]
    target[:p0, :q0] = -w0.conj().T
    target[p0:, q0:] = w1
    return {
        "diagonal_blocks": max(hs_norm(u00), hs_norm(u11)),
        "type1": hs_norm(u01 @ w1.conj().T @ u10 - w0.conj().T),
        "type2": hs_norm(u - target),
    }


def _check_spaces(P0, P1, C):
    if C.V0 != P0.space or C.V1 != P1.space:
        raise SpaceMismatch("correspondence does not connect the polarized spaces")


def classify_morphism(P0: PolarizedSpace, P1: PolarizedSpace, C: Correspondence,
                      hs_threshold: float = math.inf) -> MorphismType:
    """Type (1): graph of a polarization-preserving grading-preserving unitary.
    Type (2): close to ``L0^⊥ ⊕ L1``.
    """
    _check_spaces(P0, P1, C)
    res = _type_residuals(C.blocks, P0.w, P1.w)
    t1 = res["diagonal_blocks"] <= eps_proj() and res["type1"] <= hs_threshold
    t2 = res["type2"] <= hs_threshold
    T = C.T() if t1 else None
    return MorphismType.from_flags(t1, t2, T, res)


def opposite_polarized(P: PolarizedSpace) -> PolarizedSpace:
    """``ΠV`` polarized by ``ΓL``, which over ``V-`` is the graph of ``-w^H``."""
    Vop = opposite(P.space)
    return PolarizedSpace(Vop, GraphIsometry(Vop, -P.w.conj().T))


def direct_sum_polarized(P0: PolarizedSpace, P1: PolarizedSpace) -> PolarizedSpace:
    V = direct_sum(P0.space, P1.space)
    w = np.zeros((V.dim_minus, V.dim_plus), dtype=V.dtype)
    w[: P0.space.dim_minus, : P0.space.dim_plus] = P0.w
    w[P0.space.dim_minus:, P0.space.dim_plus:] = P1.w
    return PolarizedSpace(V, GraphIsometry(V, w))


@dataclass
class CategoryComposition:
    correspondence: object
    predicted: MorphismKind
    result: MorphismType
    left: MorphismType
    right: MorphismType
    gap: float

    @property
    def consistent(self) -> bool:
        if self.predicted is MorphismKind.TYPE1:
            return self.result.kind.is_type1
        return self.result.kind.is_type2


def _dispatch(m: MorphismType) -> MorphismKind:
    if m.kind is MorphismKind.NEITHER:
        raise NotAMorphism("correspondence is neither of type (1) nor of type (2)")
    # ambiguous inputs take the type (2) path
    return MorphismKind.TYPE1 if m.kind is MorphismKind.TYPE1 else MorphismKind.TYPE2


def _predict(a: MorphismKind, b: MorphismKind) -> MorphismKind:
    if a is MorphismKind.TYPE1 and b is MorphismKind.TYPE1:
        return MorphismKind.TYPE1
    return MorphismKind.TYPE2


def compose_in_category(P0, P1, P2, C01, C12, hs_threshold: float = math.inf,
                        cutoff: float = RANK_CUTOFF) -> CategoryComposition:
    """Compose two morphisms and classify the result.

    Works for dense :class:`PolarizedSpace` inputs and for the cellular
    model alike.  ``consistent`` on the result says whether the output
    type agrees with the composition table.
    """
    cellular = isinstance(P0, CellularPolarizedSpace)
    classify_ = classify_cellular if cellular else (
        lambda a, b, c: classify_morphism(a, b, c, hs_threshold))
    left = classify_(P0, P1, C01)
    right = classify_(P1, P2, C12)
    predicted = _predict(_dispatch(left), _dispatch(right))
    if cellular:
        parts = [(C01.core, C12.core), (C01.cell, C12.cell)]
        gap = min(min(spectral_gap(a.blocks, split_u(b.u, b.V0, b.V1), cutoff)) for a, b in parts)
        C = CellularCorrespondence(*(compose_formula(a, b, cutoff) for a, b in parts))
    else:
        gap = min(spectral_gap(C01.blocks, split_u(C12.u, C12.V0, C12.V1), cutoff))
        C = compose_formula(C01, C12, cutoff)
    result = classify_(P0, P2, C)
    return CategoryComposition(C, predicted, result, left, right, gap)


# --- cellular model ----------------------------------------------------------


@dataclass(frozen=True)
class CellularPolarizedSpace:
    """``core ⊕ cell ⊕ cell ⊕ ...`` with the polarization repeated on every cell."""

    core: PolarizedSpace
    cell: PolarizedSpace


@dataclass(frozen=True)
class CellularCorrespondence:
    core: Correspondence
    cell: Correspondence


def _cell_hs(residual: float) -> bool:
    """A constant cell entry is square-summable over infinitely many cells iff it is zero."""
    c = 0.0 if residual <= eps_proj() else residual
    sym = TailSymbol("zero") if c == 0 else TailSymbol("const", coeff=c, side="pos")
    return sym.is_square_summable()


def classify_cellular(P0: CellularPolarizedSpace, P1: CellularPolarizedSpace,
                      C: CellularCorrespondence) -> MorphismType:
    """Exact classification: the core never matters for Hilbert-Schmidt membership."""
    _check_spaces(P0.core, P1.core, C.core)
    _check_spaces(P0.cell, P1.cell, C.cell)
    core = _type_residuals(C.core.blocks, P0.core.w, P1.core.w)
    cell = _type_residuals(C.cell.blocks, P0.cell.w, P1.cell.w)
    off = max(core["diagonal_blocks"], cell["diagonal_blocks"]) <= eps_proj()
    t1 = off and _cell_hs(cell["type1"])
    t2 = _cell_hs(cell["type2"])
    T = (C.core.T(), C.cell.T()) if t1 else None
    residuals = {f"core_{k}": v for k, v in core.items()}
    residuals.update({f"cell_{k}": v for k, v in cell.items()})
    return MorphismType.from_flags(t1, t2, T, residuals)


__all__ = [
    "CategoryComposition",
    "CellularCorrespondence",
    "CellularPolarizedSpace",
    "MorphismKind",
    "MorphismType",
    "PolarizedSpace",
    "classify_cellular",
    "classify_morphism",
    "close",
    "compose_in_category",
    "direct_sum_polarized",
    "opposite_polarized",
]
