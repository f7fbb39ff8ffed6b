"""Dense complex linear algebra: numerical rank, subspaces, gaps and pencil spectra.

Every subspace is stored through an orthonormal basis in the standard Hermitian
metric of C^n.  Rank decisions use the threshold

    tau = rtol * max(rows, cols) * max(sigma_max, scale)

with ``rtol = 1e-10`` unless the environment variable ``KREL_TOL`` supplies a
different relative factor.  ``scale`` lets callers that know the natural size of
a matrix (for instance a block of an orthonormal basis) keep tiny blocks from
being measured against their own round-off.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import DimensionError, InvalidInput, InvalidRelationBasis

DEFAULT_RTOL = 1e-10
CLUSTER_TOL = 1e-8

__all__ = [
    "DEFAULT_RTOL",
    "Subspace",
    "SpectrumResult",
    "rank_rtol",
    "as_cmatrix",
    "svd",
    "orth",
    "null",
    "rank_reveal",
    "subspace_combine",
    "gap",
    "operator_norm",
    "pencil_point_spectrum",
]


def rank_rtol() -> float:
    """Relative rank tolerance, honouring ``KREL_TOL`` when set."""
    value = os.environ.get("KREL_TOL")
    if value:
        try:
            rtol = float(value)
        except ValueError as exc:
            raise InvalidInput(f"KREL_TOL is not a number: {value!r}") from exc
        if not np.isfinite(rtol) or rtol <= 0:
            raise InvalidInput(f"KREL_TOL must be a positive number, got {value!r}")
        return rtol
    return DEFAULT_RTOL


def as_cmatrix(M, name="matrix") -> np.ndarray:
    """Return ``M`` as a 2-D complex array, rejecting NaN and Inf."""
    A = np.asarray(M, dtype=complex)
    if A.ndim == 1:
        A = A.reshape(-1, 1)
    if A.ndim != 2:
        raise InvalidInput(f"{name} must be two-dimensional, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidInput(f"{name} has non-finite entries")
    return A


def svd(M, full_matrices=False):
    """SVD that also accepts empty matrices."""
    m, n = M.shape
    if m == 0 or n == 0:
        k = m if full_matrices else min(m, n)
        kn = n if full_matrices else min(m, n)
        return (np.eye(m, k, dtype=complex), np.zeros(0),
                np.eye(kn, n, dtype=complex))
    return np.linalg.svd(M, full_matrices=full_matrices)


def _threshold(s, shape, tol, scale):
    if tol and tol > 0:
        return float(tol)
    smax = float(s[0]) if s.size else 0.0
    return rank_rtol() * max(shape) * max(smax, scale)


def orth(M, tol=0.0, scale=0.0) -> np.ndarray:
    """Orthonormal basis of the column space of ``M``."""
    M = np.asarray(M, dtype=complex)
    if M.shape[1] == 0 or M.shape[0] == 0:
        return np.zeros((M.shape[0], 0), dtype=complex)
    U, s, _ = svd(M)
    r = int(np.sum(s > _threshold(s, M.shape, tol, scale)))
    return U[:, :r]


def null(M, tol=0.0, scale=0.0) -> np.ndarray:
    """Orthonormal basis of the null space of ``M``."""
    M = np.asarray(M, dtype=complex)
    m, n = M.shape
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    if m == 0:
        return np.eye(n, dtype=complex)
    _, s, Vh = svd(M, full_matrices=True)
    r = int(np.sum(s > _threshold(s, M.shape, tol, scale)))
    return Vh[r:].conj().T


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of C^n held through an orthonormal basis (columns)."""

    basis: np.ndarray
    tol: float = 0.0

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=complex)
        if b.ndim != 2:
            raise InvalidInput("subspace basis must be two-dimensional")
        if b.shape[1] > b.shape[0]:
            raise DimensionError("more basis vectors than the ambient dimension")
        object.__setattr__(self, "basis", b)

    @classmethod
    def span(cls, M, tol=0.0, scale=0.0) -> "Subspace":
        """Column space of an arbitrary matrix."""
        M = as_cmatrix(M, "spanning set") if np.size(M) else np.asarray(M, dtype=complex)
        if M.ndim == 1:
            M = M.reshape(-1, 1)
        return cls(orth(M, tol, scale), tol)

    @classmethod
    def zero(cls, n) -> "Subspace":
        return cls(np.zeros((n, 0), dtype=complex))

    @classmethod
    def full(cls, n) -> "Subspace":
        return cls(np.eye(n, dtype=complex))

    @classmethod
    def coordinate(cls, n, indices) -> "Subspace":
        """Span of the standard basis vectors listed in ``indices``."""
        return cls(np.eye(n, dtype=complex)[:, list(indices)])

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def complement(self) -> "Subspace":
        """Orthogonal complement in the standard metric."""
        n, k = self.basis.shape
        if k == 0:
            return Subspace.full(n)
        U, _, _ = svd(self.basis, full_matrices=True)
        return Subspace(U[:, k:])

    def residual(self, other: "Subspace") -> float:
        """Largest distance of a unit vector of ``other`` from this subspace."""
        _check_same_ambient(self, other)
        if other.dim == 0:
            return 0.0
        R = other.basis - self.basis @ (self.basis.conj().T @ other.basis)
        return operator_norm(R)

    def contains(self, other: "Subspace", tol=1e-9) -> bool:
        return self.residual(other) <= tol

    def equals(self, other: "Subspace", tol=1e-9) -> bool:
        return self.dim == other.dim and gap(self, other) <= tol

    def __add__(self, other):
        return subspace_combine(self, other, "sum")

    def __and__(self, other):
        return subspace_combine(self, other, "intersect")

    def map(self, A) -> "Subspace":
        """Image A(L) under a matrix A."""
        return Subspace.span(np.asarray(A) @ self.basis, scale=1.0)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def _check_same_ambient(A: Subspace, B: Subspace):
    if A.ambient_dim != B.ambient_dim:
        raise DimensionError(
            f"ambient dimensions differ: {A.ambient_dim} vs {B.ambient_dim}")


def rank_reveal(M, tol=0.0):
    """Numerical rank, range and kernel of ``M``.

    Returns
    -------
    rank : int
    range : Subspace
    kernel : Subspace
    """
    if tol < 0:
        raise InvalidInput("tol must be non-negative")
    M = as_cmatrix(M)
    m, n = M.shape
    if m == 0 or n == 0:
        return 0, Subspace.zero(m), Subspace.full(n)
    U, s, Vh = svd(M, full_matrices=True)
    r = int(np.sum(s > _threshold(s, M.shape, tol, 0.0)))
    return r, Subspace(U[:, :r], tol), Subspace(Vh[r:].conj().T, tol)


def subspace_combine(A: Subspace, B: Subspace, mode="sum", tol=0.0) -> Subspace:
    """Sum or intersection of two subspaces.

    The intersection is read off the kernel of ``[A | -B]``; its singular values
    behave like the principal angles, so the rank threshold is an angle threshold.
    """
    _check_same_ambient(A, B)
    if mode == "sum":
        return Subspace(orth(np.hstack([A.basis, B.basis]), tol, 1.0), tol)
    if mode == "intersect":
        if A.dim == 0 or B.dim == 0:
            return Subspace.zero(A.ambient_dim)
        Z = null(np.hstack([A.basis, -B.basis]), tol, 1.0)
        return Subspace(orth(A.basis @ Z[:A.dim], tol, 1.0), tol)
    raise InvalidInput(f"unknown mode {mode!r}")


def gap(L: Subspace, M: Subspace) -> float:
    """Gap between subspaces: the norm of the difference of the orthogonal projections."""
    _check_same_ambient(L, M)
    if L.dim == 0 and M.dim == 0:
        return 0.0
    return operator_norm(L.projector() - M.projector())


def operator_norm(M) -> float:
    """Largest singular value (0 for empty matrices)."""
    M = np.asarray(M, dtype=complex)
    if M.size == 0:
        return 0.0
    if not np.all(np.isfinite(M)):
        raise InvalidInput("matrix has non-finite entries")
    return float(sla.svdvals(M)[0])


# -- pencil spectra -----------------------------------------------------------

@dataclass(frozen=True)
class SpectrumResult:
    """Point spectrum of a relation given through its graph pencil.

    ``eigenvalues`` holds ``(lambda, geometric multiplicity)`` pairs.  When
    ``all_of_C`` is set every complex number is an eigenvalue and the list is
    empty.  ``has_infinite`` flags a nontrivial multivalued part.
    """

    eigenvalues: tuple = field(default_factory=tuple)
    all_of_C: bool = False
    has_infinite: bool = False

    @property
    def values(self) -> np.ndarray:
        return np.array([lam for lam, _ in self.eigenvalues], dtype=complex)

    def contains(self, lam, tol=1e-8) -> bool:
        if self.all_of_C:
            return True
        return any(abs(mu - lam) <= tol * max(1.0, abs(lam)) for mu, _ in self.eigenvalues)

    def multiplicity(self, lam, tol=1e-8) -> int:
        for mu, k in self.eigenvalues:
            if abs(mu - lam) <= tol * max(1.0, abs(lam)):
                return k
        return 0

    def nonreal(self, tol=1e-9):
        """Eigenvalues whose imaginary part is not negligible."""
        return [(mu, k) for mu, k in self.eigenvalues if abs(mu.imag) > tol * max(1.0, abs(mu))]


def call_rng(*words) -> np.random.Generator:
    """Deterministic counter-based (Philox) generator keyed by the call shape."""
    word = 0
    for w in words:
        word = (word * 1000003 + int(w)) & 0xFFFFFFFFFFFFFFFF
    key = np.array([0x6B72656C, word], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _min_sv_ratio(F, G, lam, tol):
    """Smallest singular value of G - lam F and the threshold it is compared with."""
    s = sla.svdvals(G - lam * F)
    thr = tol if tol > 0 else rank_rtol() * max(F.shape) * max(s[0], 1.0)
    return s, thr


def _deficiency(F, G, lam, tol):
    s, thr = _min_sv_ratio(F, G, lam, tol)
    d = F.shape[1]
    return d - int(np.sum(s > thr))


def pencil_point_spectrum(F, G, tol=0.0, check_basis=True) -> SpectrumResult:
    """All lambda with rank(G - lambda F) < d, for n x d matrices F and G.

    Candidates come from a square d x d pencil obtained by compressing with a
    deterministic random isometry; each candidate is confirmed by a rank test on
    ``G - lambda F`` itself.  The plain compression ``(F^H G, F^H F)`` is not used
    because it becomes singular whenever Ind T is orthogonal to D_T.
    """
    F = as_cmatrix(F, "F")
    G = as_cmatrix(G, "G")
    if F.shape != G.shape:
        raise DimensionError(f"F and G differ in shape: {F.shape} vs {G.shape}")
    n, d = F.shape
    if d == 0:
        return SpectrumResult()
    W = np.vstack([F, G])
    if check_basis:
        s = sla.svdvals(W)
        if s[-1] <= _threshold(s, W.shape, 0.0, 1.0) or d > 2 * n:
            raise InvalidRelationBasis("graph columns are linearly dependent")
    scale = max(operator_norm(W), 1e-300)
    F = F / scale
    G = G / scale
    sF = sla.svdvals(F)
    has_infinite = bool(sF[-1] <= rank_rtol() * max(F.shape) * 1.0) if d <= n else True
    if d > n:
        return SpectrumResult((), True, has_infinite)

    rng = call_rng(n, d)
    samples = (rng.standard_normal(d + 1) + 1j * rng.standard_normal(d + 1))
    all_def = True
    for z in samples:
        if _deficiency(F, G, z, tol) == 0:
            all_def = False
            break
    if all_def:
        return SpectrumResult((), True, has_infinite)

    X = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
    Q, _ = np.linalg.qr(X)
    A = Q.conj().T @ G
    B = Q.conj().T @ F
    ab = sla.eigvals(A, B, homogeneous_eigvals=True)
    alpha, beta = ab[0], ab[1]
    finite = np.abs(beta) > 1e-13 * np.maximum(np.abs(alpha), np.abs(beta))
    cands = alpha[finite] / beta[finite]

    accepted = []
    for lam in cands:
        if _deficiency(F, G, lam, tol) > 0:
            accepted.append(complex(lam))
    return SpectrumResult(_cluster(F, G, accepted, tol), False, has_infinite)


def _cluster(F, G, values, tol):
    """Group nearby eigenvalues and attach geometric multiplicities."""
    values = sorted(values, key=lambda z: (round(z.real, 6), round(z.imag, 6)))
    groups = []
    for z in values:
        for g in groups:
            if abs(np.mean(g) - z) <= CLUSTER_TOL * max(1.0, abs(z)):
                g.append(z)
                break
        else:
            groups.append([z])
    # nonsemisimple eigenvalues are computed with O(sqrt(eps)) spread; merge
    # neighbouring groups whose midpoint is still a rank-deficient point
    merged = True
    while merged:
        merged = False
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                a, b = np.mean(groups[i]), np.mean(groups[j])
                if abs(a - b) <= 1e-5 * max(1.0, abs(a)):
                    mid = (a * len(groups[i]) + b * len(groups[j])) / (len(groups[i]) + len(groups[j]))
                    if _deficiency(F, G, mid, tol) > 0:
                        groups[i].extend(groups.pop(j))
                        merged = True
                        break
            if merged:
                break
    out = []
    for g in groups:
        lam = complex(np.mean(g))
        k = _deficiency(F, G, lam, tol)
        if k == 0:
            k = max(_deficiency(F, G, z, tol) for z in g)
        out.append((lam, k))
    out.sort(key=lambda t: (t[0].real, t[0].imag))
    return tuple(out)
