"""JSON encodings of matrices, spaces, Lagrangians and structured operators.

Every loader raises :class:`MalformedInput` on anything it cannot read;
the command line maps that to exit status 2.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .composition import Correspondence
from .lagrangian import GraphIsometry
from .linalg import Field, Frame, as_field, orthonormalize
from .polarization import PolarizedSpace
from .sequence import StructuredOp, TailSymbol
from .superspace import SuperSpace


class MalformedInput(ValueError):
    pass


def _require(cond, msg):
    if not cond:
        raise MalformedInput(msg)


# --- matrices ----------------------------------------------------------------------


def matrix_to_json(A, field=None) -> dict:
    A = np.atleast_2d(np.asarray(A))
    if A.size == 0:
        A = A.reshape(A.shape[0] if A.ndim == 2 else 0, A.shape[1] if A.ndim == 2 else 0)
    field = Field.of(A) if field is None else as_field(field)
    flat = A.reshape(-1)
    entries = [[float(np.real(x)), float(np.imag(x))] for x in flat]
    return {"rows": int(A.shape[0]), "cols": int(A.shape[1]), "field": field.value, "entries": entries}


def matrix_from_json(d) -> np.ndarray:
    _require(isinstance(d, dict), "matrix must be an object")
    try:
        rows, cols = int(d["rows"]), int(d["cols"])
        field = as_field(d.get("field", "R"))
        entries = d["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad matrix header: {exc}") from None
    _require(rows >= 0 and cols >= 0, "negative matrix dimensions")
    _require(isinstance(entries, list) and len(entries) == rows * cols,
             f"expected {rows * cols} entries, got {len(entries) if isinstance(entries, list) else 'none'}")
    vals = []
    for e in entries:
        if isinstance(e, (int, float)):
            e = [e, 0.0]
        _require(isinstance(e, list) and len(e) == 2, "entries are [re, im] pairs")
        re, im = float(e[0]), float(e[1])
        _require(math.isfinite(re) and math.isfinite(im), "matrix entries must be finite")
        _require(field is Field.COMPLEX or im == 0, "real matrix with a nonzero imaginary part")
        vals.append(complex(re, im))
    A = np.array(vals, dtype=complex).reshape(rows, cols)
    return field.cast(A)


# --- spaces ------------------------------------------------------------------------


def space_to_json(V: SuperSpace) -> dict:
    return {
        "dim_plus": V.dim_plus,
        "dim_minus": V.dim_minus,
        "field": V.field.value,
        "degree": V.degree,
        "generators": [matrix_to_json(e, V.field) for e in V.generators],
    }


def space_from_json(d) -> SuperSpace:
    _require(isinstance(d, dict), "space must be an object")
    try:
        p, q = int(d["dim_plus"]), int(d["dim_minus"])
        field = as_field(d.get("field", "R"))
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad space: {exc}") from None
    gens = tuple(matrix_from_json(g) for g in d.get("generators", []))
    _require(int(d.get("degree", len(gens))) == len(gens), "degree disagrees with the generator count")
    try:
        return SuperSpace(p, q, field, tuple(field.cast(g) for g in gens))
    except ValueError as exc:
        raise MalformedInput(str(exc)) from None


# --- Lagrangians ---------------------------------------------------------------------


def lagrangian_to_json(obj, repr: str = "frame", space=None) -> dict:
    """Encode a :class:`Correspondence`, a :class:`GraphIsometry` or a ``(space, Frame)`` pair."""
    if isinstance(obj, Correspondence):
        d = {"space0": space_to_json(obj.V0), "space1": space_to_json(obj.V1), "repr": repr}
        if repr == "frame":
            d["matrix"] = matrix_to_json(obj.frame.basis, obj.space.field)
        elif repr == "graph_u":
            d["matrix"] = matrix_to_json(obj.u, obj.space.field)
        elif repr == "graph_T":
            d["matrix"] = matrix_to_json(obj.T(), obj.space.field)
        else:
            raise ValueError(f"unknown repr {repr!r}")
        return d
    if isinstance(obj, GraphIsometry):
        return {"repr": "graph_u", "space0": space_to_json(obj.space), "matrix": matrix_to_json(obj.u, obj.space.field)}
    if isinstance(obj, Frame):
        if space is None:
            raise ValueError("a bare frame needs its space")
        return {"repr": "frame", "space0": space_to_json(space), "matrix": matrix_to_json(obj.basis, space.field)}
    raise TypeError(f"cannot encode {type(obj).__name__}")


def lagrangian_from_json(d):
    """Decode to a :class:`Correspondence` when ``space1`` is present, otherwise to ``(space, Frame)``.

    A ``frame`` matrix only has to span the subspace; it is orthonormalised.
    """
    _require(isinstance(d, dict), "Lagrangian must be an object")
    rep = d.get("repr")
    _require(rep in ("frame", "graph_u", "graph_T"), f"unknown repr {rep!r}")
    _require("space0" in d and "matrix" in d, "Lagrangian needs space0 and matrix")
    V0 = space_from_json(d["space0"])
    M = matrix_from_json(d["matrix"])
    if "space1" not in d:
        _require(rep != "graph_T", "graph_T needs two spaces")
        if rep == "frame":
            _require(M.shape[0] == V0.dim, "frame rows must match the space dimension")
            return V0, orthonormalize(M)
        _require(M.shape == (V0.dim_minus, V0.dim_plus), "graph_u has shape dim_minus x dim_plus")
        return V0, GraphIsometry(V0, M)
    V1 = space_from_json(d["space1"])
    if rep == "frame":
        from .lagrangian import correspondence_space

        W = correspondence_space(V0, V1)
        _require(M.shape[0] == W.dim, "frame rows must match dim V0 + dim V1")
        return Correspondence(V0, V1, orthonormalize(M))
    if rep == "graph_u":
        n = V0.dim_plus + V1.dim_minus
        _require(M.shape == (V0.dim_plus + V1.dim_minus, V0.dim_minus + V1.dim_plus), f"graph_u must be {n} square")
        return Correspondence.from_u(V0, V1, M)
    _require(M.shape == (V1.dim, V0.dim), "graph_T maps V0 to V1")
    return Correspondence.from_T(V0, V1, M)


# --- polarized spaces and structured operators --------------------------------------


def polarized_to_json(P: PolarizedSpace) -> dict:
    return {"space": space_to_json(P.space), "w": matrix_to_json(P.w, P.space.field)}


def polarized_from_json(d) -> PolarizedSpace:
    _require(isinstance(d, dict) and "space" in d and "w" in d, "polarized space needs space and w")
    V = space_from_json(d["space"])
    w = matrix_from_json(d["w"])
    _require(w.shape == (V.dim_minus, V.dim_plus), "w has shape dim_minus x dim_plus")
    return PolarizedSpace(V, GraphIsometry(V, w))


def symbol_to_json(s: TailSymbol) -> dict:
    s = s.normal()
    return {"kind": s.kind, "params": s.params()}


def symbol_from_json(d) -> TailSymbol:
    _require(isinstance(d, dict) and "kind" in d, "tail needs a kind")
    p = d.get("params", {})
    side = p.get("side", "both")
    try:
        if d["kind"] == "exp":
            return TailSymbol.exp(p["alpha"], p.get("c", 1), side)
        if d["kind"] == "aps_exp":
            return TailSymbol.aps_exp(p["l"], p.get("c", 1), side)
        if d["kind"] == "const":
            return TailSymbol("const", p.get("c", 1), 0, side).normal()
        if d["kind"] == "zero":
            return TailSymbol("zero", 0, 0, side)
    except (KeyError, ValueError) as exc:
        raise MalformedInput(f"bad tail: {exc}") from None
    raise MalformedInput(f"unknown tail kind {d['kind']!r}")


def structured_to_json(op: StructuredOp) -> dict:
    return {"N0": op.N0, "core": matrix_to_json(op.core, "R"), "tail": symbol_to_json(op.tail), "half": op.half}


def structured_from_json(d) -> StructuredOp:
    _require(isinstance(d, dict) and {"N0", "core", "tail"} <= set(d), "structured op needs N0, core, tail")
    try:
        return StructuredOp(int(d["N0"]), matrix_from_json(d["core"]).real, symbol_from_json(d["tail"]),
                            bool(d.get("half", False)))
    except ValueError as exc:
        raise MalformedInput(str(exc)) from None


# --- files -----------------------------------------------------------------------


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=True) + "\n"


def load(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from None


def rotation_unitary(alpha: float) -> np.ndarray:
    return np.array([[math.cos(alpha), -math.sin(alpha)], [math.sin(alpha), math.cos(alpha)]])


def rotation_example(alpha: float = math.pi / 4) -> dict:
    """The rotation correspondence between two copies of ``R^{1|1}``, as ``graph_u``."""
    V = space_to_json(SuperSpace(1, 1))
    return {"repr": "graph_u", "space0": V, "space1": V, "matrix": matrix_to_json(rotation_unitary(alpha), "R"),
            "alpha": alpha}


__all__ = [
    "MalformedInput",
    "dumps",
    "lagrangian_from_json",
    "lagrangian_to_json",
    "load",
    "matrix_from_json",
    "matrix_to_json",
    "polarized_from_json",
    "polarized_to_json",
    "rotation_example",
    "rotation_unitary",
    "space_from_json",
    "space_to_json",
    "structured_from_json",
    "structured_to_json",
    "symbol_from_json",
    "symbol_to_json",
]
