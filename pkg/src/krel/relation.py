"""Linear relations (multivalued operators) given by graph bases.

A relation from C^m to C^p is the column space of the stacked matrix [F; G]
(``F`` is m x d, ``G`` is p x d); its elements are the pairs (F u, G u).  Bases
are kept orthonormal in the standard metric of C^m x C^p.  ``LinearRelation``
carries the Hilbert-space algebra; ``Relation`` adds the Krein structure of an
endorelation (adjoint in the Gamma-metric, class predicates).

At finite dimension every lineal is closed, so closures are identities and
"dense" means "equal to the whole space".
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import DimensionError, InvalidRelationBasis
from .krein import (Decomposition, KreinSpace, gamma_gram, reference_decomposition)
from .numeric import Subspace, as_cmatrix, gap, null, operator_norm, orth, rank_rtol

REL_TOL = 1e-9

__all__ = [
    "LinearRelation",
    "Relation",
    "RelationParts",
    "ClassFlags",
    "make_relation",
    "parts",
    "operator_part",
    "adjoint",
    "transform",
    "compose",
    "componentwise_sum",
    "intersect",
    "image",
    "classify",
    "in_frame",
    "graph_of",
    "check_image_identities",
    "check_adjoint_on_domain",
    "check_equality_criterion",
]


class LinearRelation:
    """Subspace of C^m x C^p spanned by the columns of [F; G]."""

    __slots__ = ("F", "G")

    def __init__(self, F, G, canonical=False):
        F = np.asarray(F, dtype=complex)
        G = np.asarray(G, dtype=complex)
        if F.ndim == 1:
            F = F.reshape(-1, 1)
        if G.ndim == 1:
            G = G.reshape(-1, 1)
        if F.shape[1] != G.shape[1]:
            raise DimensionError("F and G need the same number of columns")
        if not canonical:
            m = F.shape[0]
            W = orth(np.vstack([F, G]), scale=1.0)
            F, G = W[:m], W[m:]
        self.F = F
        self.G = G

    # -- construction helpers ---------------------------------------------

    def _new(self, F, G, canonical=False):
        return LinearRelation(F, G, canonical)

    @classmethod
    def graph(cls, A) -> "LinearRelation":
        """Graph {(x, A x)} of a p x m matrix."""
        A = np.asarray(A, dtype=complex)
        return cls(np.eye(A.shape[1], dtype=complex), A)

    @classmethod
    def multivalued(cls, m, L: Subspace) -> "LinearRelation":
        """The relation {0} x L."""
        return cls(np.zeros((m, L.dim), dtype=complex), L.basis, canonical=True)

    @classmethod
    def zero(cls, m, p) -> "LinearRelation":
        """The trivial relation {(0, 0)}."""
        return cls(np.zeros((m, 0), dtype=complex), np.zeros((p, 0), dtype=complex), True)

    # -- shape ----------------------------------------------------------------

    @property
    def in_dim(self) -> int:
        return self.F.shape[0]

    @property
    def out_dim(self) -> int:
        return self.G.shape[0]

    @property
    def d(self) -> int:
        return self.F.shape[1]

    @property
    def W(self) -> np.ndarray:
        return np.vstack([self.F, self.G])

    def graph_subspace(self) -> Subspace:
        return Subspace(self.W)

    # -- parts ----------------------------------------------------------------

    def domain(self) -> Subspace:
        return Subspace(orth(self.F, scale=1.0))

    def range(self) -> Subspace:
        return Subspace(orth(self.G, scale=1.0))

    def mul(self) -> Subspace:
        """Multivalued part {y : (0, y) in T}."""
        Z = null(self.F, scale=1.0)
        return Subspace(orth(self.G @ Z, scale=1.0))

    def ker(self) -> Subspace:
        Z = null(self.G, scale=1.0)
        return Subspace(orth(self.F @ Z, scale=1.0))

    def kernel_at(self, lam) -> Subspace:
        """Ker_lambda T = {x : (x, lambda x) in T}."""
        self._endo()
        Z = null(self.G - lam * self.F, scale=1.0)
        return Subspace(orth(self.F @ Z, scale=1.0))

    def is_operator(self, tol=REL_TOL) -> bool:
        if self.d == 0:
            return True
        s = sla.svdvals(self.F) if self.F.size else np.zeros(0)
        return s.size == self.d and s[-1] > rank_rtol() * max(self.F.shape) * 1.0

    def _endo(self):
        if self.in_dim != self.out_dim:
            raise DimensionError("operation needs an endorelation")

    # -- algebra --------------------------------------------------------------

    def inverse(self):
        return self._new(self.G, self.F, True)

    def scale(self, mu):
        """mu T = {(x, mu y)}."""
        return self._new(self.F, mu * self.G)

    def shift(self, lam):
        """T - lambda I."""
        self._endo()
        return self._new(self.F, self.G - lam * self.F)

    def left(self, A):
        """A T = {(x, A y)} for a matrix A."""
        return self._new(self.F, np.asarray(A, dtype=complex) @ self.G)

    def right(self, A):
        """T A = {(x, y) : (A x, y) in T} for a matrix A."""
        A = np.asarray(A, dtype=complex)
        return compose(self, LinearRelation.graph(A))

    def restrict(self, L: Subspace):
        """Domain restriction T|_L = T intersected with L x C^p."""
        C = L.complement().basis
        Z = null(C.conj().T @ self.F, scale=1.0) if C.shape[1] else np.eye(self.d)
        return self._new(self.F @ Z, self.G @ Z)

    def image(self, L: Subspace) -> Subspace:
        """T(L) = {y : (x, y) in T, x in L}."""
        C = L.complement().basis
        Z = null(C.conj().T @ self.F, scale=1.0) if C.shape[1] else np.eye(self.d)
        return Subspace(orth(self.G @ Z, scale=1.0))

    def preimage(self, L: Subspace) -> Subspace:
        """T^-1(L) = {x : (x, y) in T, y in L}."""
        return self.inverse().image(L)

    def hilbert_adjoint(self) -> "LinearRelation":
        """Adjoint in the standard metrics: {(u, v) : <y, u> = <x, v> for (x, y) in T}."""
        M = np.hstack([self.G.conj().T, -self.F.conj().T])
        Z = null(M, scale=1.0) if self.d else np.eye(self.in_dim + self.out_dim)
        return LinearRelation(Z[:self.out_dim], Z[self.out_dim:], True)

    # -- comparison -----------------------------------------------------------

    def gap(self, other) -> float:
        return gap(self.graph_subspace(), other.graph_subspace())

    def equals(self, other, tol=REL_TOL) -> bool:
        return self.d == other.d and self.gap(other) <= tol

    def contains(self, other, tol=REL_TOL) -> bool:
        """True when ``other`` is a subset of this relation."""
        return self.graph_subspace().residual(other.graph_subspace()) <= tol

    def matrix(self) -> np.ndarray:
        """Matrix A with T = graph(A) on D_T and A = 0 on the complement of D_T.

        Only meaningful for operators; the multivalued part is ignored.
        """
        return self.G @ np.linalg.pinv(self.F, rcond=1e-10)

    def __repr__(self):
        return f"{type(self).__name__}(in={self.in_dim}, out={self.out_dim}, d={self.d})"


def compose(S: LinearRelation, T: LinearRelation) -> LinearRelation:
    """ST = {(x, z) : (x, y) in T, (y, z) in S for some y}."""
    if T.out_dim != S.in_dim:
        raise DimensionError("relations cannot be composed")
    M = np.hstack([T.G, -S.F])
    Z = null(M, scale=1.0) if M.shape[1] else np.zeros((0, 0))
    return T._new(T.F @ Z[:T.d], S.G @ Z[T.d:])


def componentwise_sum(T: LinearRelation, N: LinearRelation) -> LinearRelation:
    """T (+) N: the span of the two graphs."""
    _same_shape(T, N)
    return T._new(np.hstack([T.F, N.F]), np.hstack([T.G, N.G]))


def intersect(T: LinearRelation, N: LinearRelation) -> LinearRelation:
    """Graph intersection of T and N."""
    _same_shape(T, N)
    if T.d == 0 or N.d == 0:
        return T._new(T.F[:, :0], T.G[:, :0], True)
    Z = null(np.hstack([T.W, -N.W]), scale=1.0)
    u = Z[:T.d]
    return T._new(T.F @ u, T.G @ u)


def operator_sum(T: LinearRelation, N: LinearRelation, a=1.0, b=1.0) -> LinearRelation:
    """a T + b N = {(x, a y + b z) : (x, y) in T, (x, z) in N}."""
    _same_shape(T, N)
    Z = null(np.hstack([T.F, -N.F]), scale=1.0)
    u, v = Z[:T.d], Z[T.d:]
    return T._new(T.F @ u, a * (T.G @ u) + b * (N.G @ v))


def _same_shape(T, N):
    if T.in_dim != N.in_dim or T.out_dim != N.out_dim:
        raise DimensionError("relations live in different spaces")


class Relation(LinearRelation):
    """Endorelation in a Krein space."""

    __slots__ = ("space",)

    def __init__(self, space: KreinSpace, F, G, canonical=False):
        super().__init__(F, G, canonical)
        if self.F.shape[0] != space.n or self.G.shape[0] != space.n:
            raise DimensionError(f"graph vectors must have length {space.n}")
        self.space = space

    def _new(self, F, G, canonical=False):
        F = np.asarray(F)
        if F.shape[0] == self.space.n and np.shape(G)[0] == self.space.n:
            return Relation(self.space, F, G, canonical)
        return LinearRelation(F, G, canonical)

    @property
    def n(self) -> int:
        return self.space.n

    def adjoint(self) -> "Relation":
        """T^c: all (u, v) with F^H J v = G^H J u."""
        J = self.space.J
        if self.d == 0:
            I = np.eye(2 * self.n, dtype=complex)
            return Relation(self.space, I[:self.n], I[self.n:], True)
        M = np.hstack([-self.G.conj().T @ J, self.F.conj().T @ J])
        Z = null(M, scale=1.0)
        return Relation(self.space, Z[:self.n], Z[self.n:], True)

    def times_J(self) -> "Relation":
        """JT = {(x, J y)}."""
        return Relation(self.space, self.F, self.space.J @ self.G, True)

    def J_times(self) -> "Relation":
        """TJ = {(x, y) : (J x, y) in T}."""
        return Relation(self.space, self.space.J @ self.F, self.G, True)

    def gamma_gram(self) -> np.ndarray:
        return gamma_gram(self.space, self.W, self.W)

    def orth_complement(self) -> "Relation":
        """T^perp in the standard metric of H x H."""
        C = self.graph_subspace().complement().basis
        return Relation(self.space, C[:self.n], C[self.n:], True)

    def operator_part(self):
        """(T_s, Ind T) with T_s = {(x, Q y)}, Q the orthogonal projection onto (Ind T)^perp."""
        M = self.mul()
        Q = np.eye(self.n) - M.projector()
        return Relation(self.space, self.F, Q @ self.G), M


def make_relation(space: KreinSpace, F, G) -> Relation:
    """Relation with graph spanned by the columns of [F; G]; the columns must be independent."""
    F = as_cmatrix(F, "F")
    G = as_cmatrix(G, "G")
    if F.shape != G.shape:
        raise DimensionError(f"F and G differ in shape: {F.shape} vs {G.shape}")
    if F.shape[0] != space.n:
        raise DimensionError(f"graph vectors must have length {space.n}")
    W = np.vstack([F, G])
    d = W.shape[1]
    if d:
        s = sla.svdvals(W)
        if d > W.shape[0] or s[-1] <= rank_rtol() * max(W.shape) * s[0]:
            raise InvalidRelationBasis("stacked graph columns are linearly dependent")
    return Relation(space, F, G)


def graph_of(space: KreinSpace, A) -> Relation:
    """Graph of an n x n matrix as a relation in ``space``."""
    return Relation(space, np.eye(space.n, dtype=complex), np.asarray(A, dtype=complex))


@dataclass(frozen=True)
class RelationParts:
    domain: Subspace
    range: Subspace
    mul: Subspace
    relation: LinearRelation

    def kernel_at(self, lam) -> Subspace:
        return self.relation.kernel_at(lam)


def parts(T: Relation) -> RelationParts:
    """Domain, range and multivalued part; ``kernel_at`` gives Ker_lambda T."""
    return RelationParts(T.domain(), T.range(), T.mul(), T)


def operator_part(T: Relation):
    return T.operator_part()


def adjoint(T: Relation) -> Relation:
    return T.adjoint()


def transform(T: Relation, kind: str, arg=None) -> Relation:
    """Elementary transforms: inverse, shift, scale, multiply_left_J, restrict_domain."""
    if kind == "inverse":
        return T.inverse()
    if kind == "shift":
        return T.shift(arg)
    if kind == "scale":
        return T.scale(arg)
    if kind == "multiply_left_J":
        return T.times_J()
    if kind == "restrict_domain":
        return T.restrict(arg)
    raise ValueError(f"unknown transform {kind!r}")


def image(T: LinearRelation, L: Subspace) -> Subspace:
    return T.image(L)


def in_frame(T: Relation, D: Decomposition) -> Relation:
    """Express T in coordinates adapted to D.

    The J-unitary frame of D carries H^-, H^+ onto H1^-, H1^+, so in the new
    coordinates D becomes the coordinate splitting and its Hilbert metric the
    standard one.  Krein-space notions (adjoint, symmetry) are unchanged.
    """
    if D.is_reference:
        return T
    Wi = D.frame_inv
    return Relation(T.space, Wi @ T.F, Wi @ T.G)


@dataclass(frozen=True)
class ClassFlags:
    symmetric: bool
    dissipative: bool
    selfadjoint: bool
    operator: bool
    maximal_dissipative: bool
    class_L: bool
    class_P: bool
    class_Pprime: bool
    class_LP: bool
    class_LPprime: bool
    L_T: Subspace

    def as_dict(self) -> dict:
        out = {k: getattr(self, k) for k in self.__dataclass_fields__ if k != "L_T"}
        out["dim_L_T"] = self.L_T.dim
        return out


def is_symmetric(T: Relation, tol=REL_TOL) -> bool:
    return T.d == 0 or bool(np.max(np.abs(T.gamma_gram())) <= tol)


def is_dissipative(T: Relation, tol=REL_TOL) -> bool:
    if T.d == 0:
        return True
    M = T.gamma_gram()
    return float(np.linalg.eigvalsh((M + M.conj().T) / 2)[0]) >= -tol


def is_selfadjoint(T: Relation, tol=REL_TOL) -> bool:
    return T.d == T.n and is_symmetric(T, tol) and T.equals(T.adjoint(), tol)


def class_P(T: Relation) -> bool:
    """D_T + R_T = H (the finite-dimensional reading of density)."""
    return (T.domain() + T.range()).is_full()


def class_Pprime(T: Relation) -> bool:
    """D_T + Ind T = H."""
    return (T.domain() + T.mul()).is_full()


def class_L(T: Relation, D: Decomposition | None = None) -> bool:
    """H1^- is contained in D_T."""
    D = D or reference_decomposition(T.space)
    return T.domain().contains(D.H1_minus)


def L_T(T: LinearRelation) -> Subspace:
    """L_T = T^-1(D_T), the domain of the range restriction."""
    return T.preimage(T.domain())


def classify(T: Relation, D: Decomposition | None = None, tol=REL_TOL) -> ClassFlags:
    """Class predicates of T relative to the decomposition D."""
    D = D or reference_decomposition(T.space)
    sym = is_symmetric(T, tol)
    dis = is_dissipative(T, tol)
    sa = sym and T.d == T.n and T.equals(T.adjoint(), tol)
    op = T.mul().is_zero()
    cL = class_L(T, D)
    cP = class_P(T)
    cPp = class_Pprime(T)
    return ClassFlags(sym, dis, sa, op, dis and T.d == T.n, cL, cP, cPp,
                      sym and cL and cP, sym and cL and cPp, L_T(T))


# -- structural identities ------------------------------------------------------

def _j_complement(space: KreinSpace, L: Subspace) -> Subspace:
    """L^[perp] = J (L^perp)."""
    return L.complement().map(space.J)


def check_image_identities(T: Relation, L: Subspace, tol=1e-9, instance=""):
    """Image identities for a (closed) relation and a subspace L.

    a) T(L)^[perp] = (T^c)^-1(L^[perp]);  b) T(L) agrees with the second
    projection of T meet (L x H);  c) T(L) = T(L + Ker T).
    """
    from .report import VerificationReport
    rep = VerificationReport("image_identities", instance=instance)
    sp = T.space
    TL = T.image(L)
    lhs = _j_complement(sp, TL)
    rhs = T.adjoint().preimage(_j_complement(sp, L))
    rep.expect_equal(lhs, rhs, tol, "a) T(L)^[perp] = (T^c)^-1(L^[perp])")
    box = LinearRelation(np.hstack([L.basis, np.zeros((sp.n, sp.n))]),
                         np.hstack([np.zeros((sp.n, L.dim)), np.eye(sp.n)]))
    meet = intersect(LinearRelation(T.F, T.G, True), box)
    rep.expect_equal(TL, meet.range(), tol, "b) T(L) from the graph intersection")
    rep.expect_equal(TL, T.image(L + T.ker()), tol, "c) T(L) = T(L + Ker T)")
    return rep


def check_adjoint_on_domain(T: Relation, tol=1e-9, instance=""):
    """T^c restricted to D_T equals T (+) ({0} x Ind T^c) for symmetric T."""
    from .report import VerificationReport
    rep = VerificationReport("adjoint_on_domain", instance=instance)
    Tc = T.adjoint()
    lhs = Tc.restrict(T.domain())
    rhs = componentwise_sum(T, Relation(T.space, np.zeros((T.n, 0)), np.zeros((T.n, 0)), True)
                            if Tc.mul().is_zero() else
                            Relation(T.space, np.zeros((T.n, Tc.mul().dim)), Tc.mul().basis, True))
    rep.expect_rel_equal(lhs, rhs, tol, "T^c|D_T = T (+) ({0} x Ind T^c)")
    return rep


def check_equality_criterion(S: LinearRelation, T: LinearRelation, tol=1e-9, instance=""):
    """For S inside T: S = T exactly when D_S = D_T and Ind S = Ind T."""
    from .report import VerificationReport
    rep = VerificationReport("equality_criterion", instance=instance)
    if not T.contains(S, tol):
        rep.note("S is not contained in T; criterion not applicable")
        return rep
    same = S.d == T.d and S.gap(T) <= tol
    parts_same = S.domain().equals(T.domain(), tol) and S.mul().equals(T.mul(), tol)
    rep.expect(same == parts_same, "S = T iff D_S = D_T and Ind S = Ind T",
               detail=f"equal={same}, parts equal={parts_same}")
    return rep
