"""Indefinite-metric geometry of a finite-dimensional Krein space.

The reference fundamental symmetry is ``J = diag(-1 (kappa_minus times), +1 (kappa_plus
times))``; coordinates are ordered negative block first.  The indefinite metric is
``[x, y] = x^H J y`` (conjugate-linear in the first factor) and the Hilbert metric
is the standard one.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg as sla

from .errors import DimensionError, InvalidInput, NotAngular, NotStrictContraction
from .numeric import Subspace, as_cmatrix, operator_norm, orth

__all__ = [
    "KreinSpace",
    "Decomposition",
    "SubspaceClass",
    "indefinite_gram",
    "gamma_space",
    "gamma_gram",
    "classify_subspace",
    "angular_operator",
    "decomposition_from_contraction",
    "reference_decomposition",
]


@dataclass(frozen=True)
class KreinSpace:
    """C^n with signature (kappa_minus, kappa_plus)."""

    kappa_minus: int
    kappa_plus: int

    def __post_init__(self):
        if self.kappa_minus < 0 or self.kappa_plus < 0:
            raise InvalidInput("signature entries must be non-negative")

    @property
    def n(self) -> int:
        return self.kappa_minus + self.kappa_plus

    @cached_property
    def J(self) -> np.ndarray:
        return np.diag(np.r_[-np.ones(self.kappa_minus), np.ones(self.kappa_plus)]).astype(complex)

    @property
    def minus(self) -> slice:
        return slice(0, self.kappa_minus)

    @property
    def plus(self) -> slice:
        return slice(self.kappa_minus, self.n)

    @cached_property
    def P_minus(self) -> np.ndarray:
        return (np.eye(self.n) - self.J) / 2

    @cached_property
    def P_plus(self) -> np.ndarray:
        return (np.eye(self.n) + self.J) / 2

    @cached_property
    def H_minus(self) -> Subspace:
        return Subspace.coordinate(self.n, range(self.kappa_minus))

    @cached_property
    def H_plus(self) -> Subspace:
        return Subspace.coordinate(self.n, range(self.kappa_minus, self.n))

    def bracket(self, x, y) -> complex:
        """Indefinite inner product [x, y]."""
        x = np.asarray(x, dtype=complex).ravel()
        y = np.asarray(y, dtype=complex).ravel()
        return complex(np.vdot(x, self.J @ y))

    def embed_minus(self, v) -> np.ndarray:
        """Lift H^- coordinates (rows) into C^n."""
        v = np.asarray(v, dtype=complex)
        out = np.zeros((self.n,) + v.shape[1:], dtype=complex)
        out[self.minus] = v
        return out

    def embed_plus(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        out = np.zeros((self.n,) + v.shape[1:], dtype=complex)
        out[self.plus] = v
        return out


def indefinite_gram(space: KreinSpace, X, Y) -> np.ndarray:
    """Matrix of [x_i, y_j] = x_i^H J y_j."""
    X = as_cmatrix(X, "X")
    Y = as_cmatrix(Y, "Y")
    if X.shape[0] != space.n or Y.shape[0] != space.n:
        raise DimensionError(f"vectors must have length {space.n}")
    return X.conj().T @ space.J @ Y


def gamma_space(space: KreinSpace):
    """Doubled space H x H with the metric -i([x1, y2] - [y1, x2]).

    Returns the signature (n, n) and the matrix J_Gamma = [[0, -iJ], [iJ, 0]].
    """
    n = space.n
    J = space.J
    JG = np.zeros((2 * n, 2 * n), dtype=complex)
    JG[:n, n:] = -1j * J
    JG[n:, :n] = 1j * J
    return KreinSpace(n, n), JG


def gamma_gram(space: KreinSpace, X, Y) -> np.ndarray:
    """Gram matrix of the Gamma-metric for stacked graph vectors (2n rows)."""
    X = np.asarray(X, dtype=complex)
    Y = np.asarray(Y, dtype=complex)
    n = space.n
    J = space.J
    x1, y1 = X[:n], X[n:]
    x2, y2 = Y[:n], Y[n:]
    return -1j * (x1.conj().T @ J @ y2 - y1.conj().T @ J @ x2)


@dataclass(frozen=True)
class SubspaceClass:
    tag: str
    definiteness_margin: float


def classify_subspace(space: KreinSpace, L: Subspace, tol=0.0) -> SubspaceClass:
    """Sign character of the indefinite metric restricted to ``L``."""
    if L.ambient_dim != space.n:
        raise DimensionError("subspace does not live in the space")
    if L.dim == 0:
        return SubspaceClass("neutral", 0.0)
    M = indefinite_gram(space, L.basis, L.basis)
    M = (M + M.conj().T) / 2
    if tol <= 0:
        tol = 1e-10 * (1 + operator_norm(M))
    if np.max(np.abs(M)) <= tol:
        return SubspaceClass("neutral", 0.0)
    w = np.linalg.eigvalsh(M)
    if w[0] > tol:
        return SubspaceClass("uniformly_positive", float(w[0]))
    if w[-1] < -tol:
        return SubspaceClass("uniformly_negative", float(-w[-1]))
    if w[0] >= -tol:
        return SubspaceClass("positive", 0.0)
    if w[-1] <= tol:
        return SubspaceClass("negative", 0.0)
    return SubspaceClass("indefinite", 0.0)


def angular_operator(space: KreinSpace, L: Subspace) -> np.ndarray:
    """The contraction K: H^+ -> H^- with L = {x+ + K x+ : x+ in P+(L)}.

    K vanishes on the orthogonal complement of P+(L) in H^+.
    """
    B = L.basis
    Bm, Bp = B[space.minus], B[space.plus]
    if L.dim == 0:
        return np.zeros((space.kappa_minus, space.kappa_plus), dtype=complex)
    s = sla.svdvals(Bp) if Bp.size else np.zeros(0)
    if s.size < L.dim or s[-1] <= 1e-10 * max(B.shape):
        raise NotAngular("subspace meets H^- nontrivially")
    return Bm @ np.linalg.pinv(Bp)


def _inv_sqrt_psd(A):
    w, V = np.linalg.eigh((A + A.conj().T) / 2)
    return (V / np.sqrt(w)) @ V.conj().T


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Canonical decomposition H = H1^- [+] H1^+ given by its angular contraction K.

    ``frame`` is a J-unitary matrix that maps H^-, H^+ onto H1^-, H1^+ and is an
    isometry from the standard metric onto the Hilbert metric [x, J1 y].
    """

    space: KreinSpace
    K: np.ndarray
    J1: np.ndarray
    P1_minus: np.ndarray
    P1_plus: np.ndarray
    H1_minus: Subspace
    H1_plus: Subspace
    frame: np.ndarray
    is_reference: bool = False

    @cached_property
    def frame_inv(self) -> np.ndarray:
        J = self.space.J
        return J @ self.frame.conj().T @ J

    def hilbert_gram(self, X, Y) -> np.ndarray:
        """Gram matrix of the Hilbert metric <x, y>_1 = [x, J1 y]."""
        return X.conj().T @ self.space.J @ self.J1 @ Y


def decomposition_from_contraction(space: KreinSpace, K) -> Decomposition:
    """Canonical decomposition whose positive part has angular operator K.

    J1 acts on x = x- + x+ as G x- + H x+ with

        G = -(I+ + K)(I+ - K*K)^-1 K* - (I- + K*)(I- - KK*)^-1
        H =  (I+ + K)(I+ - K*K)^-1 + (I- + K*)(I- - KK*)^-1 K

    where (I+ + K) is the map x+ -> K x+ + x+ into H and (I- + K*) likewise.
    """
    km, kp = space.kappa_minus, space.kappa_plus
    K = np.asarray(K, dtype=complex).reshape(km, kp)
    if not np.all(np.isfinite(K)):
        raise InvalidInput("K has non-finite entries")
    if operator_norm(K) >= 1.0:
        raise NotStrictContraction(f"||K|| = {operator_norm(K):.6g} >= 1")
    Ip, Im = np.eye(kp), np.eye(km)
    E_plus = np.vstack([K, Ip]).astype(complex)
    E_minus = np.vstack([Im, K.conj().T]).astype(complex)
    Rp = np.linalg.inv(Ip - K.conj().T @ K) if kp else np.zeros((0, 0))
    Rm = np.linalg.inv(Im - K @ K.conj().T) if km else np.zeros((0, 0))
    G = -E_plus @ Rp @ K.conj().T - E_minus @ Rm
    H = E_plus @ Rp + E_minus @ Rm @ K
    J1 = np.hstack([G, H])
    n = space.n
    P1m = (np.eye(n) - J1) / 2
    P1p = (np.eye(n) + J1) / 2
    W = np.hstack([E_minus @ _inv_sqrt_psd(Im - K @ K.conj().T) if km else E_minus,
                   E_plus @ _inv_sqrt_psd(Ip - K.conj().T @ K) if kp else E_plus])
    return Decomposition(space, K, J1, P1m, P1p,
                         Subspace(orth(E_minus)), Subspace(orth(E_plus)), W,
                         bool(not np.any(K)))


def reference_decomposition(space: KreinSpace) -> Decomposition:
    """The decomposition H = H^- [+] H^+ of the coordinate splitting."""
    return decomposition_from_contraction(
        space, np.zeros((space.kappa_minus, space.kappa_plus), dtype=complex))
