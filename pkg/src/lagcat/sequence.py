"""Structured operators on a sequence space indexed by the integers.

An operator is a finite dense *core* on the modes near zero plus a
diagonal *tail* described by a closed-form symbol.  The symbol grammar is
small on purpose, so that square-summability and closedness questions
have exact answers:

    exp      c * exp(alpha * n)
    aps_exp  c * exp(-l * (n + 1/2))
    const    c
    zero     0

Modes come in two flavours.  Integer spectra use modes ``-N..N`` and the
grading ``Γ e_n = e_{-n}``; half-integer spectra use ``-N-1..N`` and
``Γ e_n = e_{-n-1}`` (eigenvalue ``n + 1/2`` goes to its negative).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .composition import Correspondence, spectral_gap
from .errors import UnsupportedSymbols
from .lagrangian import graph_frame_pairs, pairs_to_canonical, split_u
from .linalg import RANK_CUTOFF, Frame, eps_proj, hs_norm, svd
from .superspace import SuperSpace

KINDS = ("exp", "aps_exp", "const", "zero")
SIDES = ("both", "pos", "neg")


def exact(x):
    """Rational numbers stay exact; floats are read through their decimal repr."""
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, float) and math.isfinite(x):
        return Fraction(repr(x))
    return x


@dataclass(frozen=True)
class TailSymbol:
    kind: str
    coeff: object = 1
    rate: object = 0
    side: str = "both"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown tail kind {self.kind!r}")
        if self.side not in SIDES:
            raise ValueError(f"unknown side {self.side!r}")
        object.__setattr__(self, "coeff", exact(self.coeff))
        object.__setattr__(self, "rate", exact(self.rate))

    @classmethod
    def exp(cls, alpha, c=1, side="both"):
        return cls("exp", c, alpha, side).normal()

    @classmethod
    def aps_exp(cls, l, c=1, side="both"):
        return cls("aps_exp", c, l, side).normal()

    def normal(self) -> "TailSymbol":
        """Canonical form: vanishing coefficients become ``zero``, flat exponentials ``const``."""
        if self.kind == "zero" or self.coeff == 0:
            return TailSymbol("zero", 0, 0, self.side)
        if self.kind in ("exp", "aps_exp") and self.rate == 0:
            return TailSymbol("const", self.coeff, 0, self.side)
        if self.kind == "const":
            return TailSymbol("const", self.coeff, 0, self.side)
        return self

    def __call__(self, n):
        n = np.asarray(n, dtype=float)
        c = complex(self.coeff) if isinstance(self.coeff, complex) else float(self.coeff)
        r = float(self.rate)
        if self.kind == "exp":
            val = c * np.exp(r * n)
        elif self.kind == "aps_exp":
            val = c * np.exp(-r * (n + 0.5))
        elif self.kind == "const":
            val = c * np.ones_like(n)
        else:
            val = np.zeros_like(n)
        mask = np.ones_like(n, dtype=bool)
        if self.side == "pos":
            mask = n >= 0
        elif self.side == "neg":
            mask = n < 0
        return np.where(mask, val, 0 * val)

    def growth(self, direction: int) -> float:
        """Exponential growth rate of ``|a_n|`` as ``n -> direction * inf``."""
        s = self.normal()
        if s.kind == "zero" or (s.side == "pos" and direction < 0) or (s.side == "neg" and direction > 0):
            return -math.inf
        if s.kind == "const":
            return 0.0
        r = float(s.rate)
        return r * direction if s.kind == "exp" else -r * direction

    def is_square_summable(self) -> bool:
        return all(self.growth(d) < 0 for d in (1, -1))

    def __mul__(self, other: "TailSymbol") -> "TailSymbol":
        a, b = self.normal(), other.normal()
        side = _meet(a.side, b.side)
        if side is None or "zero" in (a.kind, b.kind):
            return TailSymbol("zero", 0, 0, side or "pos")
        if a.kind == "const" or b.kind == "const":
            x, y = (a, b) if a.kind == "const" else (b, a)
            return TailSymbol(y.kind, x.coeff * y.coeff, y.rate, side).normal()
        if a.kind == b.kind:
            return TailSymbol(a.kind, a.coeff * b.coeff, a.rate + b.rate, side).normal()
        e, p = (a, b) if a.kind == "exp" else (b, a)
        # exp(alpha n) * exp(-l (n + 1/2)) = exp(-l/2) * exp((alpha - l) n)
        c = e.coeff * p.coeff * math.exp(-float(p.rate) / 2)
        return TailSymbol("exp", c, e.rate - p.rate, side).normal()

    def __add__(self, other: "TailSymbol") -> "TailSymbol":
        a, b = self.normal(), other.normal()
        if a.kind == "zero":
            return b
        if b.kind == "zero":
            return a
        if a.side != b.side or a.kind != b.kind or a.rate != b.rate:
            raise UnsupportedSymbols(f"cannot add {a} and {b} inside the grammar")
        return TailSymbol(a.kind, a.coeff + b.coeff, a.rate, a.side).normal()

    def inverse(self) -> "TailSymbol":
        s = self.normal()
        if s.kind == "zero":
            raise UnsupportedSymbols("zero symbol has no inverse")
        if s.side != "both":
            raise UnsupportedSymbols("a one-sided symbol vanishes on the other side")
        return TailSymbol(s.kind, 1 / s.coeff, -s.rate, s.side).normal()

    def params(self) -> dict:
        s = self.normal()
        p = {"side": s.side}
        if s.kind == "exp":
            p.update(c=_num(s.coeff), alpha=_num(s.rate))
        elif s.kind == "aps_exp":
            p.update(c=_num(s.coeff), l=_num(s.rate))
        elif s.kind == "const":
            p.update(c=_num(s.coeff))
        return p

    def __str__(self):
        s = self.normal()
        c, r = _num(s.coeff), _num(s.rate)
        body = {
            "exp": f"{c}*exp({r}*n)",
            "aps_exp": f"{c}*exp({_num(-s.rate)}*(n+1/2))",
            "const": f"{c}",
            "zero": "0",
        }[s.kind]
        return body if s.side == "both" else f"{body} [{s.side}]"


def _num(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else float(x)
    return x


def _meet(a: str, b: str):
    if a == "both":
        return b
    if b == "both" or a == b:
        return a
    return None


def symbols_equal(a: TailSymbol, b: TailSymbol) -> bool:
    return a.normal() == b.normal()


def dominated(a: TailSymbol, b: TailSymbol) -> bool:
    """Whether ``|a_n| <= C |b_n|`` on every tail direction, decided from growth rates."""
    for d in (1, -1):
        ga, gb = a.growth(d), b.growth(d)
        if ga > gb:
            return False
    return True


# --- modes and structured operators --------------------------------------


def modes(N: int, half: bool = False) -> np.ndarray:
    lo = -N - 1 if half else -N
    return np.arange(lo, N + 1)


def partner(n, half: bool = False):
    return -n - 1 if half else -n


@dataclass(frozen=True)
class StructuredOp:
    """Dense ``core`` on ``modes(N0)`` plus a diagonal ``tail`` outside it."""

    N0: int
    core: np.ndarray
    tail: TailSymbol
    half: bool = False

    def __post_init__(self):
        core = np.asarray(self.core, dtype=float)
        k = len(modes(self.N0, self.half))
        if core.shape != (k, k):
            raise ValueError(f"core must be {k}x{k} for N0={self.N0}")
        core = core.copy()
        core.setflags(write=False)
        object.__setattr__(self, "core", core)

    @classmethod
    def diagonal(cls, tail: TailSymbol, N0: int = 0, half: bool = False) -> "StructuredOp":
        """The multiplication operator whose symbol is ``tail`` on every mode."""
        return cls(N0, np.diag(tail(modes(N0, half))), tail, half)

    def dense(self, N: int) -> np.ndarray:
        """Matrix on ``modes(N)`` in the mode basis."""
        if N < self.N0:
            raise ValueError("truncation radius below the core radius")
        m = modes(N, self.half)
        M = np.diag(self.tail(m)).astype(float)
        k = N - self.N0
        M[k:k + self.core.shape[0], k:k + self.core.shape[0]] = self.core
        return M

    def resized(self, N0: int) -> "StructuredOp":
        return StructuredOp(N0, self.dense(N0), self.tail, self.half)

    def __matmul__(self, other: "StructuredOp") -> "StructuredOp":
        if self.half != other.half:
            raise ValueError("mixing integer and half-integer modes")
        N0 = max(self.N0, other.N0)
        return StructuredOp(N0, self.dense(N0) @ other.dense(N0), self.tail * other.tail, self.half)


def T_alpha(alpha, N0: int = 0) -> StructuredOp:
    """``T_alpha e_n = exp(alpha n) e_n``."""
    return StructuredOp.diagonal(TailSymbol.exp(alpha), N0)


def is_hilbert_schmidt(op) -> bool:
    """Exact: only the tail decides, the finite core never does."""
    tail = op.tail if isinstance(op, StructuredOp) else op
    return tail.is_square_summable()


def grading_matrix(N: int, half: bool = False) -> np.ndarray:
    m = modes(N, half)
    G = np.zeros((len(m), len(m)))
    lo = m[0]
    for i, n in enumerate(m):
        G[partner(n, half) - lo, i] = 1
    return G


def canonical_basis(N: int, half: bool = False) -> np.ndarray:
    """Orthogonal ``Q`` whose columns are the ``V+`` then ``V-`` basis vectors in mode coordinates."""
    m = modes(N, half)
    lo = m[0]
    plus, minus = [], []
    size = len(m)
    for n in m:
        j = partner(n, half)
        if j == n:
            v = np.zeros(size)
            v[n - lo] = 1
            plus.append(v)
        elif n > j:
            a = np.zeros(size)
            a[n - lo] = a[j - lo] = 1 / np.sqrt(2)
            b = np.zeros(size)
            b[n - lo] = 1 / np.sqrt(2)
            b[j - lo] = -1 / np.sqrt(2)
            plus.append(a)
            minus.append(b)
    return np.column_stack(plus + minus)


@dataclass(frozen=True)
class Truncation:
    """Dense shadow of a structured operator on ``modes(N)``."""

    N: int
    half: bool
    matrix: np.ndarray  # mode basis
    gamma: np.ndarray  # mode basis
    Q: np.ndarray  # mode coordinates of the canonical basis
    space: SuperSpace

    @property
    def canonical(self) -> np.ndarray:
        return self.Q.T @ self.matrix @ self.Q


def truncate(op: StructuredOp, N: int) -> Truncation:
    Q = canonical_basis(N, op.half)
    m = len(modes(N, op.half))
    p = (m + 1) // 2 if not op.half else m // 2
    space = SuperSpace(p, m - p)
    return Truncation(N, op.half, op.dense(N), grading_matrix(N, op.half), Q, space)


def graph_correspondence(matrix, Q, space: SuperSpace) -> Correspondence:
    """``graph(T)`` for ``T`` given in the mode basis, expressed in canonical coordinates."""
    F = graph_frame_pairs(matrix).basis
    m = Q.shape[0]
    pairs = np.vstack([Q.T @ F[:m], Q.T @ F[m:]])
    return Correspondence(space, space, Frame(pairs_to_canonical(pairs, space, space)))


def truncated_graph(op: StructuredOp, N: int) -> Correspondence:
    t = truncate(op, N)
    return graph_correspondence(t.matrix, t.Q, t.space)


def reflect(sym: TailSymbol, half: bool = False) -> TailSymbol:
    """The symbol ``n -> a_{partner(n)}``.

    Exact on the tail; for one-sided symbols on integer modes the
    self-partnered mode ``0`` may land on the other side.
    """
    s = sym.normal()
    side = {"both": "both", "pos": "neg", "neg": "pos"}[s.side]
    if s.kind in ("zero", "const"):
        return TailSymbol(s.kind, s.coeff, 0, side)
    r = float(s.rate)
    if s.kind == "exp":
        c = s.coeff * math.exp(-r) if half else s.coeff
    else:
        c = s.coeff if half else s.coeff * math.exp(-r)
    return TailSymbol(s.kind, c, -s.rate, side).normal()


def lagrangian_symbol(op: StructuredOp, tol: float | None = None) -> bool:
    """Whether ``graph(op)`` is Lagrangian, i.e. ``T^{-1} = Γ T^H Γ``.

    On the tail this says ``a_{partner(n)} * a_n = 1`` and is decided
    from the symbol; the finite core is checked numerically.
    """
    tol = eps_proj() if tol is None else tol
    prod = (op.tail * reflect(op.tail, op.half)).normal()
    if prod.kind != "const" or prod.side != "both":
        return False
    if prod.coeff != 1 and not math.isclose(complex(prod.coeff).real, 1, rel_tol=1e-14):
        return False
    core = op.core
    G = grading_matrix(op.N0, op.half)
    residual = hs_norm(core.T @ G @ core - G)
    return residual <= tol * max(1.0, np.linalg.norm(core, 2) ** 2)


@dataclass
class ClosedLagrangian:
    op: StructuredOp

    closed = True


@dataclass
class NotClosed:
    closure: StructuredOp
    reason: str

    closed = False


def compose_structured(outer: StructuredOp, inner: StructuredOp):
    """Relational composition ``graph(outer) ∘ graph(inner)``.

    The composite is the graph of ``outer @ inner`` on its natural domain
    ``{x : inner x and outer inner x square-summable}``.  That graph is
    closed exactly when ``|inner_n| <= C (1 + |(outer inner)_n|)``, which
    for exponential symbols is a comparison of growth rates on each side.
    """
    if inner.tail.normal().kind == "zero":
        raise UnsupportedSymbols("inner symbol vanishes; its graph is not a Lagrangian")
    product = outer @ inner
    ok = all(
        inner.tail.growth(d) <= max(0.0, product.tail.growth(d)) for d in (1, -1)
    )
    if ok:
        return ClosedLagrangian(product)
    ident = symbols_equal(product.tail, TailSymbol("const", 1)) and np.allclose(
        product.core, np.eye(product.core.shape[0]), rtol=0, atol=1e-12
    )
    if ident:
        reason = "composition is contained in the identity but is not everywhere defined"
    else:
        reason = f"composition is a non-closed restriction of the multiplication by {product.tail}"
    return NotClosed(product, reason)


def closed_range_ladder(alpha1, alpha2, Ns=(8, 16, 32), cutoff: float = RANK_CUTOFF):
    """Smallest nonzero singular values of ``1 - v11 u11`` on growing truncations.

    ``u`` is the unitary of ``graph(T_alpha2)`` and ``v`` that of
    ``graph(T_alpha1)``, so the composite is ``T_alpha1 T_alpha2``.
    """
    rows = []
    for N in Ns:
        L01 = truncated_graph(T_alpha(alpha2), N)
        L12 = truncated_graph(T_alpha(alpha1), N)
        V = L01.V0
        vb = split_u(L12.u, V, V)
        gx, gy = spectral_gap(L01.blocks, vb, cutoff)
        M = np.eye(V.dim_plus) - vb[0] @ L01.blocks[3]
        rows.append({
            "N": int(N),
            "sigma_min": float(svd(M)[1][-1]),
            "gap_x": gx,
            "gap_y": gy,
        })
    return rows


__all__ = [
    "ClosedLagrangian",
    "NotClosed",
    "StructuredOp",
    "T_alpha",
    "TailSymbol",
    "Truncation",
    "canonical_basis",
    "closed_range_ladder",
    "compose_structured",
    "dominated",
    "grading_matrix",
    "graph_correspondence",
    "is_hilbert_schmidt",
    "lagrangian_symbol",
    "reflect",
    "modes",
    "symbols_equal",
    "truncate",
    "truncated_graph",
]
