"""Block compressions of a relation with respect to the coordinate splitting H^- + H^+.

All helpers assume the relation is already expressed in the frame of the
decomposition under study (see ``relation.in_frame``), so that H^- and H^+ are
coordinate blocks and the Hilbert metric is the standard one.  Results are
relations between the coordinate spaces C^{kappa_minus} and C^{kappa_plus}.
"""

from __future__ import annotations

import numpy as np

from .numeric import Subspace, null, orth
from .relation import LinearRelation, Relation


def _rows(space, side):
    if side == "-":
        return space.minus
    if side == "+":
        return space.plus
    if side == "all":
        return slice(0, space.n)
    raise ValueError(f"unknown side {side!r}")


def _other(space, side):
    if side == "-":
        return space.plus
    if side == "+":
        return space.minus
    return slice(0, 0)


def compress(T: Relation, src: str, dst: str) -> LinearRelation:
    """P_dst T restricted to H_src, in block coordinates."""
    sp = T.space
    o = _other(sp, src)
    Fo = T.F[o]
    Z = null(Fo, scale=1.0) if Fo.shape[0] else np.eye(T.d)
    return LinearRelation(T.F[_rows(sp, src)] @ Z, T.G[_rows(sp, dst)] @ Z)


def family(T: Relation, sign: str, lam) -> LinearRelation:
    """The compression {(P x, P y) : (x, y) in T, y - lam x in H^sign}, P = P^sign."""
    sp = T.space
    o = _other(sp, sign)
    C = (T.G - lam * T.F)[o]
    Z = null(C, scale=1.0) if C.shape[0] else np.eye(T.d)
    r = _rows(sp, sign)
    return LinearRelation(T.F[r] @ Z, T.G[r] @ Z)


def family_lift(T: Relation, sign: str, lam):
    """Graph vectors (x, y) of T with y - lam x in H^sign (columns of X and Y)."""
    sp = T.space
    C = (T.G - lam * T.F)[_other(sp, sign)]
    Z = null(C, scale=1.0) if C.shape[0] else np.eye(T.d)
    return T.F @ Z, T.G @ Z


def op_matrix(R: LinearRelation) -> np.ndarray:
    """Matrix of an operator relation, zero on the orthogonal complement of its domain."""
    return R.matrix()


def coords(L: Subspace, rows) -> Subspace:
    """Block coordinates of a subspace known to lie in that block."""
    return Subspace(orth(L.basis[rows], scale=1.0))


def lift(space, side, L: Subspace) -> Subspace:
    """Embed a subspace of block coordinates into C^n."""
    B = np.zeros((space.n, L.dim), dtype=complex)
    B[_rows(space, side)] = L.basis
    return Subspace(B)


def block_subspace(space, side) -> Subspace:
    return space.H_minus if side == "-" else space.H_plus


def identity_rel(k) -> LinearRelation:
    return LinearRelation.graph(np.eye(k, dtype=complex))


def scalar_rel(k, lam) -> LinearRelation:
    return LinearRelation.graph(lam * np.eye(k, dtype=complex))
