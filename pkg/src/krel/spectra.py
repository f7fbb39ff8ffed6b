"""Spectral loci, point spectra and eigenvalue-location checks.

For a symmetric relation T whose domain contains the negative part H^- of a
canonical decomposition put

    m = ||T_s P^-||,    p = ||P^- T_s P^-||.

Gamma_T is the set of non-real lambda with

    |Im lambda| > m   and   |s + p / lambda| < 2 / (1 + (m / |Im lambda|)^2),

where s = 1 for Re lambda >= 0 and s = -1 otherwise; C_T is the set of non-real
points outside Gamma_T.  Non-real eigenvalues of suitable extensions of T can
only lie in C_T, and C_T sits inside the strip 0 < |Im lambda| <= t0 m with t0
the real root of t^3 - t^2 - t - 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .blocks import compress
from .errors import InternalInvariantViolation, PreconditionFailed
from .krein import (Decomposition, angular_operator, decomposition_from_contraction,
                    reference_decomposition)
from .numeric import Subspace, SpectrumResult, operator_norm, orth, pencil_point_spectrum, svd
from .numeric import rank_rtol
from .relation import (LinearRelation, Relation, class_L, class_P, class_Pprime, componentwise_sum, compose, in_frame,
                       is_dissipative, is_selfadjoint, intersect, is_symmetric, operator_sum)
from .report import VerificationReport

__all__ = [
    "Locus",
    "SpectrumResult",
    "VerificationReport",
    "tribonacci_constant",
    "in_gamma",
    "in_c",
    "gamma_margin",
    "in_gamma_grid",
    "locus_params",
    "point_spectrum",
    "in_regularity_field",
    "in_resolvent_set",
    "regular_points",
    "resolvent_points",
    "rotate_decomposition",
    "check_half_plane_inclusion",
    "check_locus_bound",
    "verify_eigenvalue_location",
    "verify_half_plane_resolvent",
    "verify_eigenvalue_enclosure",
    "check_block_adjoints",
    "rotation_report",
    "compression_norms",
    "check_structure",
]

EIG_TOL = 1e-8


def tribonacci_constant() -> float:
    """Real root of t^3 - t^2 - t - 1, bracketed in [1.8, 1.9] and Newton-polished."""
    f = lambda t: ((t - 1.0) * t - 1.0) * t - 1.0
    t = brentq(f, 1.8, 1.9, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    for _ in range(2):
        t -= f(t) / ((3.0 * t - 2.0) * t - 1.0)
    return float(t)


T0_CONST = tribonacci_constant()


@dataclass(frozen=True)
class Locus:
    m: float
    p: float
    t0: float = T0_CONST

    def in_gamma(self, lam) -> bool:
        return in_gamma(lam, self.m, self.p)

    def in_c(self, lam) -> bool:
        return in_c(lam, self.m, self.p)


def gamma_margin(lam, m, p) -> float:
    """Smallest slack of the two strict inequalities defining Gamma_T.

    Positive exactly when lambda lies in Gamma_T; -inf on the real axis.
    """
    lam = complex(lam)
    y = abs(lam.imag)
    if y == 0.0:
        return -np.inf
    s = 1.0 if lam.real >= 0 else -1.0
    first = y - m
    second = 2.0 * (y / np.hypot(y, m)) ** 2 - abs(s + p / lam)
    return float(min(first, second))


def in_gamma(lam, m, p) -> bool:
    return gamma_margin(lam, m, p) > 0


def in_c(lam, m, p) -> bool:
    lam = complex(lam)
    return lam.imag != 0.0 and not in_gamma(lam, m, p)


def in_gamma_grid(lams, m, p) -> np.ndarray:
    """Vectorized ``in_gamma`` over an array of complex points."""
    lams = np.asarray(lams, dtype=complex)
    y = np.abs(lams.imag)
    nonreal = y > 0
    ys = np.where(nonreal, y, 1.0)
    safe = np.where(nonreal, lams, 1.0)
    s = np.where(lams.real >= 0, 1.0, -1.0)
    with np.errstate(over="ignore", invalid="ignore"):
        second = np.abs(s + p / safe) < 2.0 * (ys / np.hypot(ys, m)) ** 2
    return nonreal & (y > m) & second


def check_locus_bound(m, p, res=401, window=None) -> VerificationReport:
    """Every point of C_T on a grid satisfies |Im lambda| <= t0 m."""
    rep = VerificationReport("locus_bound")
    w = window or max(4.0 * m, 1.0)
    xs = np.linspace(-w, w, res)
    X, Y = np.meshgrid(xs, xs)
    L = X + 1j * Y
    in_C = (np.abs(L.imag) > 0) & ~in_gamma_grid(L, m, p)
    excess = np.abs(L.imag[in_C]) - (T0_CONST * m + 1e-9)
    worst = float(excess.max()) if excess.size else -np.inf
    rep.expect(worst <= 0, "C_T inside |Im| <= t0 m", slack=worst)
    return rep


# -- compressions needed for the locus ----------------------------------------

def _operator_part_matrix(T: Relation) -> np.ndarray:
    Ts, _ = T.operator_part()
    return Ts.matrix()


def compression_norms(T: Relation):
    """(||T_s P^-||, ||P^- T_s P^-||, ||P^+ T_s P^-||) for T in frame coordinates."""
    sp = T.space
    A = _operator_part_matrix(T)
    Am = A[:, sp.minus]
    return operator_norm(Am), operator_norm(Am[sp.minus]), operator_norm(Am[sp.plus])


def locus_params(T: Relation, D: Decomposition | None = None) -> Locus:
    """m = ||T_s P1^-|| and p = ||P1^- T_s P1^-|| for symmetric T in class (L)."""
    D = D or reference_decomposition(T.space)
    if not is_symmetric(T):
        raise PreconditionFailed("symmetric")
    if not class_L(T, D):
        raise PreconditionFailed("class_L")
    Tf = in_frame(T, D)
    m, p, _ = compression_norms(Tf)
    if Tf.space.kappa_minus:
        # the compression of T itself agrees with that of T_s since Ind T lies in H^+
        C = compress(Tf, "-", "-")
        if not C.is_operator() or abs(operator_norm(C.matrix()) - p) > 1e-8 * max(1.0, p):
            raise InternalInvariantViolation("||P^- T P^-|| differs from ||P^- T_s P^-||")
    return Locus(m, p)


# -- spectra and regularity ----------------------------------------------------

def point_spectrum(T: LinearRelation) -> SpectrumResult:
    """sigma_p(T) from the graph pencil of T."""
    return pencil_point_spectrum(T.F, T.G, check_basis=False)


def _full_range(R: LinearRelation, lam) -> bool:
    """R_{R - lam} is the whole space."""
    return bool(_full_range_many(R, [lam])[0])


def _full_range_many(R: LinearRelation, lams) -> np.ndarray:
    """Vectorized surjectivity test of R - lam over many lam (one batched SVD)."""
    lams = np.asarray(lams, dtype=complex).ravel()
    n, d = R.G.shape
    if d < n:
        return np.zeros(lams.size, dtype=bool)
    if n == 0:
        return np.ones(lams.size, dtype=bool)
    M = R.G[None, :, :] - lams[:, None, None] * R.F[None, :, :]
    s = np.linalg.svd(M, compute_uv=False)
    thr = rank_rtol() * max(n, d) * np.maximum(s[:, 0], 1.0)
    return s[:, n - 1] > thr


def regular_points(T: Relation, lams, Tc: Relation | None = None) -> np.ndarray:
    """Mask of lam in r(T) for an array of points."""
    Tc = Tc if Tc is not None else T.adjoint()
    return _full_range_many(Tc, np.conj(np.asarray(lams, dtype=complex)))


def resolvent_points(T: Relation, lams, Tc: Relation | None = None) -> np.ndarray:
    """Mask of lam in rho(T) for an array of points."""
    Tc = Tc if Tc is not None else T.adjoint()
    lams = np.asarray(lams, dtype=complex)
    return _full_range_many(T, lams) & _full_range_many(Tc, np.conj(lams))


def in_regularity_field(T: Relation, lam, Tc: Relation | None = None) -> bool:
    """lambda in r(T): R_{T^c - conj(lambda)} = H, i.e. Ker_lambda T = {0}."""
    Tc = Tc if Tc is not None else T.adjoint()
    return _full_range(Tc, np.conj(lam))


def in_resolvent_set(T: Relation, lam, Tc: Relation | None = None) -> bool:
    """lambda in rho(T): both T - lambda and T^c - conj(lambda) are onto."""
    Tc = Tc if Tc is not None else T.adjoint()
    return _full_range(T, lam) and _full_range(Tc, np.conj(lam))


# -- rotation of the canonical decomposition ------------------------------------

def _minus_blocks(Tf: Relation, Tcf: Relation):
    """T^{--} = P^- T|H^- and B = P^- T^c|H^+ (zero on Ind T) in frame coordinates."""
    sp = Tf.space
    Tmm = compress(Tf, "-", "-").matrix()
    B = compress(Tcf, "+", "-").matrix()
    return Tmm, B


def rotate_decomposition(T: Relation, D: Decomposition | None, lam) -> Decomposition:
    """Canonical decomposition J1 with Ker_lambda(J1 T^c) inside H1^+, for lambda in Gamma_T.

    The angular operator is K = -(T^{--} - lambda)^{-1} (P^- T^c|H^+), extended by
    zero on H^+ minus D_{T^c} (which is Ind T).
    """
    D = D or reference_decomposition(T.space)
    loc = locus_params(T, D)
    lam = complex(lam)
    if not in_gamma(lam, loc.m, loc.p):
        raise PreconditionFailed("lambda in Gamma_T")
    sp = T.space
    Tf = in_frame(T, D)
    Tcf = Tf.adjoint()
    Tmm, B = _minus_blocks(Tf, Tcf)
    Kf = -np.linalg.solve(Tmm - lam * np.eye(sp.kappa_minus), B) if sp.kappa_minus \
        else np.zeros((0, sp.kappa_plus), dtype=complex)
    bound = loc.m / abs(lam.imag)
    nK = operator_norm(Kf)
    if nK > bound * (1 + 1e-9) + 1e-12 or nK >= 1:
        raise InternalInvariantViolation(
            f"rotation contraction has norm {nK:.6g} above m/|Im lambda| = {bound:.6g}")
    # back to reference coordinates
    Hp = D.frame @ np.vstack([Kf, np.eye(sp.kappa_plus)])
    Kref = angular_operator(sp, Subspace(orth(Hp)))
    D1 = decomposition_from_contraction(sp, Kref)
    Tc = T.adjoint()
    ker = Tc.left(D1.J1).kernel_at(lam)
    res = D1.H1_plus.residual(ker)
    if res > 1e-8:
        raise InternalInvariantViolation(
            f"Ker_lambda(J1 T^c) leaves H1^+ (residual {res:.3e})")
    return D1


def rotation_report(T: Relation, D: Decomposition | None, lam, instance="") -> VerificationReport:
    """Rotation postconditions and the conjugate-point identity at lambda and conj(lambda)."""
    rep = VerificationReport("rotation", instance=instance)
    D = D or reference_decomposition(T.space)
    lam = complex(lam)
    try:
        D1 = rotate_decomposition(T, D, lam)
        D2 = rotate_decomposition(T, D, np.conj(lam))
    except InternalInvariantViolation as exc:
        rep.expect(False, "rotation postcondition", lam, detail=str(exc))
        return rep
    rep.expect(True, "rotation postcondition", lam)
    # V = diag(V^-, I^+), V^- = (T^{--} - lam)(T^{--} - conj lam)^{-1}, applied in frame coordinates
    sp = T.space
    Tf = in_frame(T, D)
    Tmm, _ = _minus_blocks(Tf, Tf.adjoint())
    I = np.eye(sp.kappa_minus)
    V = np.eye(sp.n, dtype=complex)
    if sp.kappa_minus:
        V[sp.minus, sp.minus] = (Tmm - lam * I) @ np.linalg.inv(Tmm - np.conj(lam) * I)
    Vref = D.frame @ V @ D.frame_inv
    VH1 = D1.H1_plus.map(Vref)
    rep.expect_equal(VH1, D2.H1_plus, 1e-8, "V(H1^+) is the positive part at conj(lambda)", lam)
    ker = T.adjoint().left(D2.J1).kernel_at(np.conj(lam))
    rep.expect_contains(VH1, ker, 1e-8, "Ker_conj(lambda)(J1' T^c) inside V(H1^+)", lam)
    return rep


# -- proof inclusion -------------------------------------------------------------

def check_half_plane_inclusion(T: Relation, D: Decomposition | None, lam, instance="",
                             tol=1e-9) -> VerificationReport:
    """T - lambda >= (TJ - lambda)(I + 2 (TJ - lambda)^{-1} T_s P^-), and the T P^- form."""
    rep = VerificationReport("half_plane_inclusion", instance=instance)
    D = D or reference_decomposition(T.space)
    Tf = in_frame(T, D)
    sp = Tf.space
    Pm = sp.P_minus
    A = Tf.J_times().shift(lam)
    Ainv = A.inverse()
    I = Relation(sp, np.eye(sp.n), np.eye(sp.n))
    target = Tf.shift(lam)
    Ts, _ = Tf.operator_part()
    for name, R in (("T_s P^-", Ts), ("T P^-", Tf)):
        B = compose(Ainv, R.right(Pm))
        C = operator_sum(I, B, 1.0, 2.0)
        rhs = compose(A, C)
        res = target.graph_subspace().residual(rhs.graph_subspace())
        rep.expect_small(res, tol, f"inclusion with {name}", lam)
    return rep


# -- theorem drivers --------------------------------------------------------------

def _require(cond, predicate):
    if not cond:
        raise PreconditionFailed(predicate)


def verify_eigenvalue_location(T: Relation, T0: Relation, D: Decomposition | None = None, grid=21,
                       instance="", parts=("a", "b", "c")) -> VerificationReport:
    """Non-real eigenvalues of a dissipative (or symmetric) extension T0 lie in C_T."""
    D = D or reference_decomposition(T.space)
    _require(is_symmetric(T), "T symmetric")
    _require(class_L(T, D), "T in class (L)")
    Tc = T.adjoint()
    _require(T0.contains(T), "T inside T0")
    _require(Tc.contains(T0), "T0 inside T^c")
    sym0 = is_symmetric(T0)
    _require(sym0 or is_dissipative(T0), "T0 dissipative")
    loc = locus_params(T, D)
    rep = VerificationReport("eigenvalue_location", instance=instance)
    scale = max(1.0, loc.m)

    if "a" in parts:
        sp0 = point_spectrum(T0)
        if sp0.all_of_C:
            rep.expect(False, "a) sigma_p(T0) is all of C", detail="all_of_C")
        for mu, _ in sp0.nonreal():
            if mu.imag < 0 or sym0:
                margin = gamma_margin(mu, loc.m, loc.p)
                rep.expect(margin <= EIG_TOL * scale, "a) eigenvalue of T0 in C_T", mu, margin)
    if "b" in parts and class_P(T) and T.mul().is_zero():
        M = T0.mul()
        rep.expect(M.is_zero(), "b) T0 is an operator", slack=M.dim)
    if "c" in parts:
        w = 4.0 * scale
        xs = np.linspace(-w, w, grid)
        ys = np.linspace(-w, 0.0, grid + 1)[:-1]
        L = (xs[None, :] + 1j * ys[:, None]).ravel()
        inside = in_gamma_grid(L, loc.m, loc.p)
        pts = L[inside]
        if pts.size:
            ok = regular_points(T0, pts)
            for lam in pts[~ok]:
                rep.expect(False, "c) Gamma_T in C^- is regular for T0", complex(lam))
            rep.checks += int(ok.sum())
    return rep


def verify_half_plane_resolvent(T: Relation, D: Decomposition | None = None, grid=15,
                    variant="selfadjoint", instance="") -> VerificationReport:
    """Half-planes beyond 2 ||T_s P^-|| belong to the resolvent set.

    ``variant`` is "selfadjoint" (both half-planes) or "dissipative" (the lower one,
    for a maximal dissipative T).
    """
    D = D or reference_decomposition(T.space)
    _require(class_L(T, D), "T in class (L)")
    if variant == "selfadjoint":
        _require(is_selfadjoint(T), "T self-adjoint")
    else:
        _require(is_dissipative(T) and T.d == T.n, "T maximal dissipative")
    Tf = in_frame(T, D)
    m = compression_norms(Tf)[0]
    rep = VerificationReport("half_plane_resolvent", instance=instance)
    Tc = T.adjoint()
    bad = lambda mu: (abs(mu.imag) > 2 * m if variant == "selfadjoint" else mu.imag < -2 * m)
    sp, spc = point_spectrum(T), point_spectrum(Tc)
    if sp.all_of_C or spc.all_of_C:
        rep.expect(False, "spectrum is not all of C")
    scale = max(1.0, m)
    for mu, _ in sp.eigenvalues:
        rep.expect(not bad(mu) or abs(abs(mu.imag) - 2 * m) <= EIG_TOL * scale,
                   "eigenvalue outside the regular half-plane", mu, abs(mu.imag) - 2 * m)
    for mu, _ in spc.eigenvalues:
        mu = np.conj(mu)
        rep.expect(not bad(mu) or abs(abs(mu.imag) - 2 * m) <= EIG_TOL * scale,
                   "adjoint eigenvalue outside the regular half-plane", mu, abs(mu.imag) - 2 * m)
    w = 2 * m + 4 * scale
    X, Y = np.meshgrid(np.linspace(-w, w, grid), np.linspace(2 * m + 1e-3 * scale, w, grid // 2 + 1))
    pts = (X - 1j * Y).ravel()
    if variant == "selfadjoint":
        pts = np.r_[pts, np.conj(pts)]
    ok = resolvent_points(T, pts, Tc)
    for lam in pts[~ok]:
        rep.expect(False, "sampled point in rho(T)", complex(lam))
    rep.checks += int(ok.sum())
    return rep


def verify_eigenvalue_enclosure(T: Relation, D: Decomposition | None = None, instance="") -> VerificationReport:
    """Eigenvalues of a self-adjoint T in (L) stay within ||P^+ T_s P^-|| of the diagonal blocks."""
    D = D or reference_decomposition(T.space)
    _require(is_selfadjoint(T), "T self-adjoint")
    _require(class_L(T, D), "T in class (L)")
    Tf = in_frame(T, D)
    sp = Tf.space
    rep = VerificationReport("eigenvalue_enclosure", instance=instance)
    Ts, _ = Tf.operator_part()
    A = Ts.matrix()
    radius = operator_norm(A[sp.plus, sp.minus])
    Tmm = A[sp.minus, sp.minus]
    Q = Tf.domain().basis[sp.plus]
    Q = orth(Q, scale=1.0)  # basis of H^+ inside D_T
    Tpp = Q.conj().T @ A[sp.plus, sp.plus] @ Q
    centers = np.r_[np.linalg.eigvals(Tmm) if Tmm.size else [], np.linalg.eigvals(Tpp) if Tpp.size else []]
    spec = point_spectrum(Tf)
    if spec.all_of_C:
        rep.expect(False, "spectrum is all of C")
        return rep
    for mu, k in spec.eigenvalues:
        dist = float(np.min(np.abs(centers - mu))) if centers.size else np.inf
        rep.expect(dist <= radius + 1e-8 * max(1.0, abs(mu)), "enclosure", mu, dist - radius)
        k2 = Tf.kernel_at(np.conj(mu)).dim
        k1 = Tf.kernel_at(mu).dim
        rep.expect(k1 == k2, "dim Ker_lambda = dim Ker_conj(lambda)", mu, k1 - k2)
    return rep


def check_block_adjoints(T: Relation, D: Decomposition | None = None, T0: Relation | None = None,
                    tol=1e-9, instance="") -> VerificationReport:
    """Block adjoint identities for a symmetric T in class (L), in frame coordinates.

    a) P^- T^c|H^- = P^- T|H^-, a Hermitian operator on H^-.
    b) (P^+ T^c|H^-)^* = -P^- T|H^+ (also = -P^- T^c|H^+ when T is in (P')).
    c) (P^+ T^c|H^+)^* = P^+ T|H^+; for any R with H^- in D_{R^c},
       (P^+ R|H^+)^* = P^+ R^c|H^+ (checked on T0 when given).
    d) on H^+_c = H^+ meet D_{T^c}: (P^- T^c|H^+_c)^* = -P^+ T_s|H^-.
    """
    D = D or reference_decomposition(T.space)
    _require(is_symmetric(T), "T symmetric")
    _require(class_L(T, D), "T in class (L)")
    rep = VerificationReport("block_adjoints", instance=instance)
    Tf = in_frame(T, D)
    Tcf = Tf.adjoint()
    sp = Tf.space

    A1, A2 = compress(Tcf, "-", "-"), compress(Tf, "-", "-")
    rep.expect_rel_equal(A1, A2, tol, "a) P^-T^c|H^- = P^-T|H^-")
    rep.expect(A2.is_operator() and A2.domain().is_full(), "a) P^-T|H^- is an everywhere defined operator")
    M = A2.matrix()
    rep.expect_small(operator_norm(M - M.conj().T), tol * max(1.0, operator_norm(M)), "a) Hermitian")

    B1 = compress(Tcf, "-", "+").hilbert_adjoint()
    B2 = compress(Tf, "+", "-").scale(-1.0)
    rep.expect_rel_equal(B1, B2, tol, "b) (P^+T^c|H^-)^* = -P^-T|H^+")
    if class_Pprime(T):
        rep.expect_rel_equal(B1, compress(Tcf, "+", "-").scale(-1.0), tol, "b) (P') form with T^c")

    C1 = compress(Tcf, "+", "+").hilbert_adjoint()
    rep.expect_rel_equal(C1, compress(Tf, "+", "+"), tol, "c) (P^+T^c|H^+)^* = P^+T|H^+")
    if T0 is not None:
        R = in_frame(T0, D)
        Rc = R.adjoint()
        if Rc.domain().contains(sp.H_minus):
            rep.expect_rel_equal(compress(R, "+", "+").hilbert_adjoint(), compress(Rc, "+", "+"),
                                 tol, "c) (P^+R|H^+)^* = P^+R^c|H^+")

    Ap = compress(Tcf, "+", "-")
    Q = orth(Ap.F, scale=1.0)
    Ad = LinearRelation(Q.conj().T @ Ap.F, Ap.G).hilbert_adjoint()
    Ts, _ = Tf.operator_part()
    Bpm = Ts.matrix()[sp.plus, sp.minus]
    leak = operator_norm(Bpm - Q @ (Q.conj().T @ Bpm))
    rep.expect_small(leak, tol * max(1.0, operator_norm(Bpm)), "d) P^+T_s(H^-) inside H^+_c")
    rep.expect_rel_equal(Ad, LinearRelation.graph(-Q.conj().T @ Bpm), tol,
                         "d) (P^-T^c|H^+_c)^* = -P^+T_s|H^-")
    return rep


# -- structural invariants ---------------------------------------------------------

def _same_spectrum(a, b, tol) -> bool:
    if a.all_of_C or b.all_of_C:
        return a.all_of_C == b.all_of_C
    va, vb = a.values, b.values
    if va.size != vb.size:
        return False
    return all(np.min(np.abs(vb - mu)) <= tol * max(1.0, abs(mu)) for mu in va)


def check_structure(T: Relation, N: Relation | None = None, D: Decomposition | None = None,
                    instance="") -> VerificationReport:
    """T^cc = T, dim T + dim T^c = 2n, (T (+) N)^c = T^c meet N^c and sigma_p(T) = sigma_p(T_s)."""
    rep = VerificationReport("structure", instance=instance)
    Tc = T.adjoint()
    rep.expect_rel_equal(Tc.adjoint(), T, 1e-10, "T^cc = T")
    rep.expect(T.d + Tc.d == 2 * T.n, "dim T + dim T^c = 2n", detail=f"{T.d} + {Tc.d} vs {2 * T.n}")
    if N is not None:
        lhs = componentwise_sum(T, N).adjoint()
        rep.expect_rel_equal(lhs, intersect(Tc, N.adjoint()), 1e-9, "(T (+) N)^c = T^c meet N^c")
    D = D or reference_decomposition(T.space)
    if is_symmetric(T) and class_L(T, D):
        Ts, _ = T.operator_part()
        rep.expect(_same_spectrum(point_spectrum(T), point_spectrum(Ts), EIG_TOL),
                   "sigma_p(T) = sigma_p(T_s)")
    return rep
