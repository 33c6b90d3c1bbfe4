"""Lagrangian correspondences between polarized super Hilbert spaces, numerically."""

from .clifford import build_clifford, decompose_module, sublagrangian_index
from .composition import Correspondence, compose, compose_bruteforce, compose_formula
from .errors import GapWarning, LagcatError
from .lagrangian import GraphIsometry, T_to_u, is_lagrangian_graph, u_to_T
from .linalg import Field, Frame
from .polarization import MorphismKind, PolarizedSpace, classify_morphism, compose_in_category
from .sequence import StructuredOp, T_alpha, TailSymbol, compose_structured
from .superspace import SuperSpace, direct_sum, opposite

__version__ = "0.1.0"

__all__ = [
    "Correspondence",
    "Field",
    "Frame",
    "GapWarning",
    "GraphIsometry",
    "LagcatError",
    "MorphismKind",
    "PolarizedSpace",
    "StructuredOp",
    "SuperSpace",
    "T_alpha",
    "T_to_u",
    "TailSymbol",
    "build_clifford",
    "classify_morphism",
    "compose",
    "compose_bruteforce",
    "compose_formula",
    "compose_in_category",
    "compose_structured",
    "decompose_module",
    "direct_sum",
    "is_lagrangian_graph",
    "opposite",
    "sublagrangian_index",
    "u_to_T",
]
