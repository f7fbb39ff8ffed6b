"""Pseudo-random instances of symmetric, dissipative and self-adjoint relations.

Every instance lives in a space of signature (kappa_minus, kappa_plus) and is
built from a random Hermitian S and a random unitary splitting of H^+ into

    M   extra domain of T beyond H^-,
    K   multivalued part of T (and of its extensions),
    R   the remaining directions, where dissipative extensions may add i C.

The symmetric relation is T = graph(J S) restricted to H^- + M, plus {0} x K.
Its extensions take the full domain H minus K.  Optionally the whole instance
is carried to a random canonical decomposition by a J-unitary frame, and the
decomposition is returned along with it.  Every instance is re-validated
with the class predicates before it is handed out.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import GenerationFailed, InvalidInput
from ..krein import Decomposition, KreinSpace, decomposition_from_contraction, reference_decomposition
from ..relation import (Relation, class_L, class_P, componentwise_sum, in_frame, intersect,
                        is_dissipative, is_selfadjoint, is_symmetric)

KINDS = ("symmetric_L", "dissipative_extension", "selfadjoint_L", "selfadjoint_extension",
         "with_mul_part", "hilbert_case")

MAX_ATTEMPTS = 32


@dataclass(frozen=True)
class InstanceProfile:
    kappa_minus: int
    kappa_plus: int
    kind: str
    seed: int
    graph_dim: int | None = None
    rotate: bool | None = None
    break_P: bool | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInput(f"unknown instance kind {self.kind!r}")
        if self.kappa_minus < 0 or self.kappa_plus < 0 or self.kappa_minus + self.kappa_plus < 1:
            raise InvalidInput("need kappa_minus + kappa_plus >= 1")
        if self.kind == "hilbert_case" and self.kappa_minus:
            raise InvalidInput("hilbert_case needs kappa_minus = 0")


@dataclass
class Instance:
    """A symmetric T, an optional extension T0 and the decomposition they refer to."""

    T: Relation
    T0: Relation | None
    D: Decomposition
    meta: dict = field(default_factory=dict)


def instance_rng(master_seed: int, index: int, attempt: int = 0) -> np.random.Generator:
    """Philox stream keyed by (master seed, instance index, attempt)."""
    ss = np.random.SeedSequence([int(master_seed) & 0xFFFFFFFFFFFFFFFF, int(index), int(attempt)])
    return np.random.Generator(np.random.Philox(ss))


def _crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def _unitary(rng, k):
    if k == 0:
        return np.zeros((0, 0), dtype=complex)
    Q, R = np.linalg.qr(_crandn(rng, k, k))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def _hermitian(rng, n, scale=1.0):
    A = _crandn(rng, n, n)
    return scale * (A + A.conj().T) / 2


def _contraction(rng, km, kp, bound):
    K = _crandn(rng, km, kp)
    nrm = np.linalg.norm(K, 2) if K.size else 0.0
    return K * (bound * rng.uniform(0.2, 1.0) / nrm) if nrm else K


def _build(profile: InstanceProfile, rng: np.random.Generator) -> Instance:
    km, kp = profile.kappa_minus, profile.kappa_plus
    sp = KreinSpace(km, kp)
    n = sp.n
    J = sp.J
    kind = profile.kind
    U = _unitary(rng, kp)

    full = kind in ("selfadjoint_L",)
    want_mul = kind == "with_mul_part" or (kind != "hilbert_case" and rng.random() < 0.3)
    b = int(rng.integers(1, kp + 1)) if (want_mul and kp) else 0
    if full:
        a = kp - b
    elif profile.graph_dim is not None:
        a = max(0, min(kp - b, profile.graph_dim - km - b))
    else:
        a = int(rng.integers(0, kp - b + 1))
    if kind == "hilbert_case" and a + b == 0 and kp:
        a = 1
    Mb = U[:, :a]
    Kb = U[:, a:a + b]
    Rb = U[:, a + b:]

    S = _hermitian(rng, n, scale=float(rng.uniform(0.3, 2.0)))
    break_P = profile.break_P if profile.break_P is not None else (rng.random() < 0.25)
    dom = np.zeros((n, km + a), dtype=complex)
    dom[:km, :km] = np.eye(km)
    dom[km:, km:] = Mb
    if break_P and Rb.shape[1]:
        # decouple part of R from the domain of T so that D_T + R_T misses it
        r = int(rng.integers(1, Rb.shape[1] + 1))
        Rr = np.zeros((n, r), dtype=complex)
        Rr[km:] = Rb[:, :r]
        Pd = dom @ dom.conj().T
        Pr = Rr @ Rr.conj().T
        S = S - Pr @ S @ Pd - Pd @ S @ Pr

    mulb = np.zeros((n, b), dtype=complex)
    mulb[km:] = Kb
    A = J @ S
    T = Relation(sp, np.hstack([dom, np.zeros((n, b))]), np.hstack([A @ dom, mulb]))

    T0 = None
    if kind in ("dissipative_extension", "selfadjoint_extension", "selfadjoint_L", "with_mul_part",
                "hilbert_case", "symmetric_L"):
        C = np.zeros((n, n), dtype=complex)
        if kind == "dissipative_extension" or (kind in ("with_mul_part", "hilbert_case") and rng.random() < 0.5):
            rr = Rb.shape[1]
            if rr:
                B = _crandn(rng, rr, rr) * rng.uniform(0.1, 1.5)
                Rfull = np.zeros((n, rr), dtype=complex)
                Rfull[km:] = Rb
                C = Rfull @ (B @ B.conj().T) @ Rfull.conj().T
        # full domain H minus K
        ext = np.zeros((n, n - b), dtype=complex)
        ext[:km, :km] = np.eye(km)
        ext[km:, km:] = np.hstack([Mb, Rb])
        T0 = Relation(sp, np.hstack([ext, np.zeros((n, b))]),
                      np.hstack([J @ (S + 1j * C) @ ext, mulb]))
        if kind == "selfadjoint_L":
            T, T0 = T0, None

    D = reference_decomposition(sp)
    rotate = profile.rotate if profile.rotate is not None else (km > 0 and kp > 0 and rng.random() < 0.5)
    if rotate and km and kp:
        D = decomposition_from_contraction(sp, _contraction(rng, km, kp, 0.7))
        W = D.frame
        T = Relation(sp, W @ T.F, W @ T.G)
        if T0 is not None:
            T0 = Relation(sp, W @ T0.F, W @ T0.G)
    meta = {"kind": kind, "dims": [a, b, kp - a - b], "rotated": bool(rotate and km and kp),
            "break_P": bool(break_P)}
    return Instance(T, T0, D, meta)


def _validate(inst: Instance, kind: str) -> bool:
    T, T0, D = inst.T, inst.T0, inst.D
    if not is_symmetric(T) or not class_L(T, D):
        return False
    if kind == "selfadjoint_L":
        return is_selfadjoint(T)
    if T0 is None:
        return True
    Tc = T.adjoint()
    if not (T0.contains(T) and Tc.contains(T0)):
        return False
    if kind == "selfadjoint_extension":
        return is_selfadjoint(T0)
    return is_dissipative(T0) and T0.d == T0.n


def generate(profile: InstanceProfile, index: int = 0) -> Instance:
    """Build and validate an instance; retries with fresh streams, then raises."""
    for attempt in range(MAX_ATTEMPTS):
        rng = instance_rng(profile.seed, index, attempt)
        inst = _build(profile, rng)
        if _validate(inst, profile.kind):
            inst.meta.update(seed=int(profile.seed), index=int(index), attempt=attempt,
                             class_P=class_P(inst.T))
            return inst
    raise GenerationFailed(f"no valid {profile.kind} instance for seed {profile.seed} index {index}")


def random_profile(rng: np.random.Generator, seed: int, max_dim: int = 12, max_neg: int = 4) -> InstanceProfile:
    """Draw a profile with n <= max_dim and kappa_minus <= max_neg."""
    kind = KINDS[int(rng.integers(len(KINDS)))]
    n = int(rng.integers(1, max_dim + 1))
    if kind == "hilbert_case":
        km = 0
    else:
        km = int(rng.integers(1 if n > 1 else 0, min(max_neg, n - 1 if n > 1 else n) + 1))
        km = min(km, n - 1) if n > 1 else 0
    kp = n - km
    if kind in ("with_mul_part",) and kp == 0:
        kind = "symmetric_L"
    return InstanceProfile(km, kp, kind, seed)


def companion_pairs(inst: Instance):
    """Pairs (T, N) with N = T0 meet Sigma for the componentwise-sum checks.

    Candidates use the instance's extension and T^c itself (N = Sigma); a pair
    is kept only when T (+) N is an operator, the setting in which the
    equivalences for T meet N = 0 hold.  Relations are taken in the frame of
    the instance's decomposition.
    """
    from ..extensions import deficiency  # local import keeps module layering flat
    T = in_frame(inst.T, inst.D)
    if not is_symmetric(T):
        return []
    Sig = deficiency(T).Sigma
    cands = [("T,Sigma", Sig)]
    if inst.T0 is not None:
        cands.append(("T,T0^Sigma", intersect(in_frame(inst.T0, inst.D), Sig)))
    return [(name, T, N) for name, N in cands if componentwise_sum(T, N).mul().is_zero()]
