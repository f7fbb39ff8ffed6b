"""Compression families, their resolvent identities and the Krein-Naimark type formula.

For a canonical decomposition H = H^- [+] H^+ the two families

    T^-(lambda) = {(P^- x, P^- y) : (x, y) in T, y - lambda x in H^-}
    T^+(lambda) = {(P^+ x, P^+ y) : (x, y) in T, y - lambda x in H^+}

are relations in the block coordinates of H^- and H^+.  Every function maps
T into the frame of the decomposition first, so the Hilbert metric there is
the standard one and -[.,.] restricted to H^- is the standard inner product.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blocks import block_subspace, compress, coords, family, family_lift, lift
from .errors import InternalInvariantViolation, PreconditionFailed, ShiftSingular
from .krein import Decomposition, reference_decomposition
from .numeric import Subspace, pencil_point_spectrum
from .relation import (LinearRelation, Relation, compose, componentwise_sum, in_frame,
                       is_selfadjoint, operator_sum)
from .report import VerificationReport
from .spectra import point_spectrum

__all__ = [
    "CompressionFamily",
    "GammaField",
    "compression_family",
    "exception_set",
    "admissible_points",
    "check_resolvent_identities",
    "check_minus_family",
    "check_plus_family_range",
    "check_range_identities",
    "gamma_field",
    "check_gamma_field",
    "check_resolvent_formula",
    "schur_and_difference",
    "check_difference_telescoping",
    "regularity_regions",
]

TOL = 1e-9
MAT_TOL = 1e-8
EXCLUSION = 1e-3


def _require(cond, predicate):
    if not cond:
        raise PreconditionFailed(predicate)


def _frame(T: Relation, D: Decomposition | None):
    D = D or reference_decomposition(T.space)
    return in_frame(T, D), D


def _inv(R: LinearRelation) -> LinearRelation:
    return R.inverse()


def _rho_zero(R: LinearRelation) -> bool:
    """0 in rho(R): R^-1 is an everywhere defined operator."""
    return R.ker().is_zero() and R.range().is_full()


# -- families -------------------------------------------------------------------------

def compression_family(T: Relation, D: Decomposition | None, sign: str, lam) -> LinearRelation:
    """T^sign(lambda) in the block coordinates of H^sign."""
    if sign not in ("-", "+", "minus", "plus"):
        raise ValueError(f"unknown sign {sign!r}")
    s = "-" if sign in ("-", "minus") else "+"
    Tf, _ = _frame(T, D)
    return family(Tf, s, complex(lam))


@dataclass(frozen=True, eq=False)
class CompressionFamily:
    """lambda -> T^sign(lambda) for a fixed relation and decomposition."""

    base: Relation
    decomposition: Decomposition
    sign: str

    def at(self, lam) -> LinearRelation:
        return compression_family(self.base, self.decomposition, self.sign, lam)


def exception_set(T: Relation, D: Decomposition | None = None):
    """Points excluded from sampling: 0, sigma_p(JT), sigma_p(P^+T|H^+) and sigma_p(P^-T|H^-)."""
    Tf, _ = _frame(T, D)
    pts = [0j]
    for R in (Tf.times_J(), compress(Tf, "+", "+"), compress(Tf, "-", "-")):
        if R.in_dim == 0:
            continue
        spec = pencil_point_spectrum(R.F, R.G, check_basis=False)
        if spec.all_of_C:
            return None
        pts += [mu for mu, _ in spec.eigenvalues]
    return np.array(pts, dtype=complex)


_CANDIDATES = (0.9j, -1.3j, 0.6 + 1.7j, -1.1 - 0.8j, 2.3 + 0.4j, -0.5 + 2.9j, 1.9 - 2.2j, -2.6 - 1.5j)


def admissible_points(T: Relation, D: Decomposition | None = None, k=3, scale=1.0):
    """Up to k fixed non-real points at distance >= 1e-3 from the exception set."""
    exc = exception_set(T, D)
    if exc is None:
        return []
    out = []
    for z in _CANDIDATES:
        z = complex(z) * scale
        if exc.size == 0 or np.min(np.abs(exc - z)) >= EXCLUSION:
            out.append(z)
        if len(out) == k:
            break
    return out


# -- resolvent identities -----------------------------------------------------------------

def check_resolvent_identities(T: Relation, D: Decomposition | None, lam, tol=TOL,
                               instance="") -> VerificationReport:
    """Resolvents of T and JT compressed to H^-+ against the families at lambda.

    P^-(JT - l)^-1|H^- = -(T^-(l) + l)^-1     P^-(T - l)^-1|H^- = (T^-(l) - l)^-1
    P^+(JT + l)^-1|H^+ = (T^+(l) + l)^-1      P^+(T - l)^-1|H^+ = (T^+(l) - l)^-1

    The second identity carries a plus sign; with a minus sign it already
    fails for T = 0.
    """
    lam = complex(lam)
    rep = VerificationReport("resolvent_identities", instance=instance)
    Tf, D = _frame(T, D)
    JT = Tf.times_J()
    Tm, Tp = family(Tf, "-", lam), family(Tf, "+", lam)
    Rl = Tf.shift(lam).inverse()
    lhs = compress(JT.shift(lam).inverse(), "-", "-")
    rep.expect_rel_equal(lhs, _inv(Tm.shift(-lam)).scale(-1.0), tol, "P^-(JT - l)^-1|H^- = -(T^-(l) + l)^-1", lam)
    lhs = compress(Rl, "-", "-")
    rhs = _inv(Tm.shift(lam))
    rep.expect_rel_equal(lhs, rhs, tol, "P^-(T - l)^-1|H^- = (T^-(l) - l)^-1", lam)
    lhs = compress(JT.shift(-lam).inverse(), "+", "+")
    rep.expect_rel_equal(lhs, _inv(Tp.shift(-lam)), tol, "P^+(JT + l)^-1|H^+ = (T^+(l) + l)^-1", lam)
    lhs = compress(Rl, "+", "+")
    rep.expect_rel_equal(lhs, _inv(Tp.shift(lam)), tol, "P^+(T - l)^-1|H^+ = (T^+(l) - l)^-1", lam)
    return rep


# -- properties of the minus family ------------------------------------------------------------

def _in_spec(spec, lam):
    return spec.all_of_C or spec.contains(lam, EXCLUSION)


def check_minus_family(T: Relation, T0: Relation | None, D: Decomposition | None, lam, tol=TOL,
                    instance="") -> VerificationReport:
    """Operator property, Nevanlinna property, monotonicity in T and the eigenvalue criterion."""
    lam = complex(lam)
    rep = VerificationReport("minus_family", instance=instance)
    Tf, D = _frame(T, D)
    sp = Tf.space
    Hm = block_subspace(sp, "-")
    Tm = family(Tf, "-", lam)
    Tpp = compress(Tf, "+", "+")
    spec_pp = pencil_point_spectrum(Tpp.F, Tpp.G, check_basis=False) if Tpp.in_dim else None

    # a) operator off sigma_p(P^+T|H^+) when H^- lies in D_{T^c}
    if Tf.adjoint().domain().contains(Hm, tol) and (spec_pp is None or not _in_spec(spec_pp, lam)):
        rep.expect(Tm.mul().is_zero(), "a) T^-(l) is an operator", lam)

    # b) Nevanlinna: Im <P^-x, P^-y> = Im l |P^+x|^2 on T, and T^-(l)* = T^-(conj l)
    if is_selfadjoint(Tf) and lam.imag != 0:
        X, Y = family_lift(Tf, "-", lam)
        m = sp.minus
        A = X[m].conj().T @ Y[m]
        lhs = (A - A.conj().T) / 2j
        rhs = lam.imag * (X[sp.plus].conj().T @ X[sp.plus])
        scale = max(1.0, float(np.linalg.norm(Y, 2))) if Y.size else 1.0
        rep.expect_small(float(np.linalg.norm(lhs - rhs, 2)) / scale if lhs.size else 0.0, MAT_TOL,
                         "b) Im <P^-x, P^-y> = Im l |P^+x|^2", lam)
        for sign in ("-", "+"):
            F = family(Tf, sign, lam)
            rep.expect_rel_equal(F.hilbert_adjoint(), family(Tf, sign, lam.conjugate()), tol,
                                 f"b) T^{sign}(l)* = T^{sign}(conj l)", lam)

    # c) T^-(l) inside T0^-(l), with equality under the two coincidences
    if T0 is not None:
        T0f = in_frame(T0, D)
        _require(T0f.contains(Tf, tol), "T inside T0")
        T0m = family(T0f, "-", lam)
        rep.expect(T0m.contains(Tm, tol), "c) T^-(l) inside T0^-(l)", lam)
        JT0 = T0f.times_J()
        spec0 = point_spectrum(JT0)
        T0pp = compress(T0f, "+", "+")
        spec0pp = pencil_point_spectrum(T0pp.F, T0pp.G, check_basis=False) if T0pp.in_dim else None
        if not _in_spec(spec0, lam) and (spec0pp is None or not _in_spec(spec0pp, lam)):
            JT = Tf.times_J()
            same_ind = (Hm & Tf.mul()).equals(Hm & T0f.mul(), tol)
            same_rng = (Hm & JT.shift(lam).range()).equals(Hm & JT0.shift(lam).range(), tol)
            if same_ind and same_rng:
                rep.expect_rel_equal(Tm, T0m, tol, "c) T^-(l) = T0^-(l)", lam)

    # d) kernel formulas and the eigenvalue criterion
    kT = Tf.kernel_at(lam)
    kTm = Tm.kernel_at(lam)
    rep.expect_equal(lift(sp, "-", kTm), kT.map(sp.P_minus), tol, "d) Ker_l T^-(l) = P^-(Ker_l T)", lam)
    if lam != 0:
        JT = Tf.times_J()
        lhs = JT.kernel_at(lam) + kT
        rhs = JT.shift(lam).preimage(lift(sp, "-", kTm))
        rep.expect_equal(lhs, rhs, tol, "d) Ker_l JT + Ker_l T = (JT - l)^-1(Ker_l T^-(l))", lam)
        if not _in_spec(point_spectrum(JT), lam):
            rep.expect((not kT.is_zero()) == (not kTm.is_zero()),
                       "d) l in sigma_p(T) iff 0 in sigma_p(T^-(l) - l)", lam,
                       detail=f"dim Ker_l T = {kT.dim}, dim Ker_l T^-(l) = {kTm.dim}")
    return rep


# -- ranges of the plus family -------------------------------------------------------------------

def check_plus_family_range(T: Relation, D: Decomposition | None, lam, tol=TOL, instance="") -> VerificationReport:
    """R_{T^+(l) - l} through R_{T-l}, I - 2l(JT + l)^-1 and (JT - l)(JT + l)^-1."""
    lam = complex(lam)
    rep = VerificationReport("plus_family_range", instance=instance)
    Tf, D = _frame(T, D)
    sp = Tf.space
    Hp = block_subspace(sp, "+")
    Id = Relation(sp, np.eye(sp.n), np.eye(sp.n))
    target = lift(sp, "+", family(Tf, "+", lam).shift(lam).range())
    rep.expect_equal(target, Hp & Tf.shift(lam).range(), tol, "a) = H^+ meet R_{T-l}", lam)
    JT = Tf.times_J()
    JTp_inv = JT.shift(-lam).inverse()
    V = operator_sum(Id, JTp_inv, 1.0, -2.0 * lam)
    rep.expect_equal(target, V.image(Hp).map(sp.P_plus), tol, "b) = P^+(I - 2l(JT + l)^-1)(H^+)", lam)
    if Hp.contains(Tf.mul(), tol):
        C = compose(JT.shift(lam), JTp_inv)
        rep.expect_equal(target, C.image(Hp).map(sp.P_plus), tol,
                         "c) = P^+(JT - l)(JT + l)^-1(H^+)", lam)
    return rep


def check_range_identities(T: Relation, D: Decomposition | None, lam, tol=TOL,
                                   instance="") -> VerificationReport:
    """The range identities behind the closedness criteria, and the two sum identities."""
    lam = complex(lam)
    rep = VerificationReport("range_identities", instance=instance)
    Tf, D = _frame(T, D)
    sp = Tf.space
    J, Pm, Pp = sp.J, sp.P_minus, sp.P_plus
    Hm, Hp = block_subspace(sp, "-"), block_subspace(sp, "+")
    JT = Tf.times_J()
    Tc = Tf.adjoint()
    RTl = Tf.shift(lam).range()

    rep.expect_equal(Hp + JT.shift(-lam).range(), Hp + RTl, tol, "H^+ + R_{JT+l} = H^+ + R_{T-l}", lam)
    rep.expect_equal(Hm + JT.shift(lam).range(), Hm + RTl, tol, "H^- + R_{JT-l} = H^- + R_{T-l}", lam)
    if lam == 0:
        return rep

    Id = Relation(sp, np.eye(sp.n), np.eye(sp.n))
    I_l = operator_sum(Id, JT.shift(lam).inverse().left(Pm), 1.0, 2.0 * lam)
    rep.expect_equal(RTl, I_l.range().map(J), tol, "R_{T-l} = J R_{I_l}", lam)
    lc = lam.conjugate()
    RTc = Tc.shift(lc).range()
    rep.expect_equal(I_l.hilbert_adjoint().range(), (Hm & RTc) + Hp, tol,
                     "R_{I_l*} = (H^- meet R_{T^c - conj l}) + H^+", lam)
    E = Tc.times_J().shift(lc).inverse().scale(2.0 * lc)
    H_l = operator_sum(Id, E, 1.0, 1.0).image(Hm)
    rep.expect_equal(H_l.complement().map(Pp), Hp & RTl, tol, "P^+(H_l^perp) = H^+ meet R_{T-l}", lam)
    rep.expect_equal(H_l.map(Pm), Hm & RTc, tol, "P^-(H_l) = H^- meet R_{T^c - conj l}", lam)
    lIp = Relation(sp, Hp.basis, lam * Hp.basis)
    K = componentwise_sum(JT, lIp).kernel_at(-lam)
    rep.expect_equal(K.map(Pp), Hp & RTl, tol, "P^+(Ker_-l(JT (+) l I^+)) = H^+ meet R_{T-l}", lam)
    return rep


# -- gamma field -------------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GammaField:
    lam: complex
    L_lambda: Subspace
    gamma: np.ndarray
    gamma_c: np.ndarray
    gamma_rel: LinearRelation
    gamma_c_rel: LinearRelation

    @property
    def is_contraction(self) -> bool:
        return bool(np.linalg.norm(self.gamma, 2) <= 1 + 1e-12) if self.gamma.size else True


def _selfadjoint_L(Tf):
    _require(is_selfadjoint(Tf), "T self-adjoint")
    _require(Tf.domain().contains(Tf.space.H_minus), "H^- inside D_T")


def gamma_field(T: Relation, D: Decomposition | None, lam) -> GammaField:
    """gamma_l = P^-(P^+|L_l)^-1 and gamma_l^c = -P^+(P^-|L_l^[perp])^-1."""
    lam = complex(lam)
    _require(lam.imag != 0, "lambda non-real")
    Tf, D = _frame(T, D)
    _selfadjoint_L(Tf)
    sp = Tf.space
    Hm, Hp = block_subspace(sp, "-"), block_subspace(sp, "+")
    Tl = Tf.shift(lam)
    L = Tl.preimage(Hp)
    if not (Hm & L).is_zero():
        raise InternalInvariantViolation("H^- meets L_lambda")
    B = L.basis
    g = LinearRelation(B[sp.plus], B[sp.minus])
    Lp = Tl.image(Hm)
    C = Lp.basis
    gc = LinearRelation(C[sp.minus], -C[sp.plus])
    # the multivalued part of gamma^c is Ind T, which (T^+(l) - l)^-1 annihilates
    ind = coords(Tf.mul(), sp.plus)
    if not gc.mul().equals(ind, TOL):
        raise InternalInvariantViolation("H^+ meets (T - lambda)(H^-) beyond Ind T")
    Q = np.eye(sp.kappa_plus) - ind.projector()
    return GammaField(lam, L, g.matrix(), Q @ gc.matrix(), g, gc)


def check_gamma_field(T: Relation, D: Decomposition | None, lam, tol=TOL, instance="") -> VerificationReport:
    """Domains of the gamma field, the form of L^[perp] and contraction iff non-negative."""
    rep = VerificationReport("gamma_field", instance=instance)
    Tf, D = _frame(T, D)
    gf = gamma_field(Tf, None, lam)
    sp = Tf.space
    Hp = block_subspace(sp, "+")
    dom = gf.gamma_rel.domain()
    rep.expect_equal(dom, coords(Hp & Tf.domain(), sp.plus), tol, "D_gamma = H^+ meet D_T", lam)
    rep.expect_equal(dom, family(Tf, "+", gf.lam).domain(), tol, "D_gamma = D_{T^+(l)}", lam)
    rep.expect(gf.gamma_c_rel.domain().is_full(), "D_gamma^c = H^-", lam)
    # gamma_l^c is built on (T - l)(H^-), which is the J-orthogonal companion of L at conj(l)
    lc = gf.lam.conjugate()
    Lperp = Tf.shift(lc).preimage(Hp).complement().map(sp.J)
    rep.expect_equal(Lperp, Tf.shift(gf.lam).image(block_subspace(sp, "-")), tol,
                     "(T - l)(H^-) = L_{conj l}^[perp]", lam)
    gb = gamma_field(Tf, None, lc)
    rep.expect_small(float(np.linalg.norm(gf.gamma_c + gb.gamma.conj().T)) if gf.gamma_c.size else 0.0,
                     MAT_TOL, "gamma_l^c = -(gamma_{conj l})*", lam)
    B = gf.L_lambda.basis
    G = B.conj().T @ sp.J @ B
    ev = np.linalg.eigvalsh((G + G.conj().T) / 2) if G.size else np.zeros(0)
    nrm = float(np.linalg.norm(gf.gamma, 2)) if gf.gamma.size else 0.0
    if abs(nrm - 1.0) > 1e-7:
        nonneg = bool(ev.size == 0 or ev[0] >= -1e-12)
        rep.expect((nrm < 1.0) == nonneg, "gamma_l contraction iff L_l non-negative", lam,
                   detail=f"norm={nrm:.6g}, min eig={ev[0] if ev.size else 0:.3g}")
    return rep


def check_resolvent_formula(T: Relation, D: Decomposition | None, lam, tol=MAT_TOL,
                            instance="") -> VerificationReport:
    """(T^-(l) - l)^-1 = (T^-- - l)^-1 + gamma_l (T^+(l) - l)^-1 gamma_l^c."""
    lam = complex(lam)
    rep = VerificationReport("resolvent_formula", instance=instance)
    Tf, D = _frame(T, D)
    gf = gamma_field(Tf, None, lam)
    lhs = _inv(family(Tf, "-", lam).shift(lam))
    Tmm = compress(Tf, "-", "-")
    first = _inv(Tmm.shift(lam))
    mid = compose(gf.gamma_rel, compose(_inv(family(Tf, "+", lam).shift(lam)), gf.gamma_c_rel))
    rhs = operator_sum(first, mid, 1.0, 1.0)
    rep.expect_rel_equal(lhs, rhs, tol, "resolvent formula (graphs)", lam)
    if lhs.domain().is_full() and lhs.mul().is_zero() and rhs.domain().is_full() and rhs.mul().is_zero():
        a, b = lhs.matrix(), rhs.matrix()
        rep.expect_small(float(np.linalg.norm(a - b)) / max(1.0, float(np.linalg.norm(a))), tol,
                         "resolvent formula (matrices)", lam)
    return rep


def resolvent_formula_sides(T: Relation, D: Decomposition | None, lam):
    """Both sides of the resolvent formula as matrices on H^-."""
    Tf, D = _frame(T, D)
    lam = complex(lam)
    gf = gamma_field(Tf, None, lam)
    lhs = _inv(family(Tf, "-", lam).shift(lam)).matrix()
    first = _inv(compress(Tf, "-", "-").shift(lam)).matrix()
    mid = gf.gamma @ _inv(family(Tf, "+", lam).shift(lam)).matrix() @ gf.gamma_c
    return lhs, first + mid


# -- Schur complement and the difference formula ----------------------------------------------

def schur_and_difference(T: Relation, D: Decomposition | None, lam, lam0, tol=TOL,
                         instance="") -> VerificationReport:
    """T^+(l) - l as a Schur complement, and T^+(l0) - T^+(l) = (l - l0) gamma_l^c gamma_l0."""
    lam, lam0 = complex(lam), complex(lam0)
    _require(lam.imag != 0 and lam0.imag != 0 and lam != lam0, "distinct non-real points")
    rep = VerificationReport("schur_difference", instance=instance)
    Tf, D = _frame(T, D)
    _selfadjoint_L(Tf)
    sp = Tf.space
    m, p = sp.minus, sp.plus
    Tp = family(Tf, "+", lam)
    if Tf.mul().is_zero():
        A = Tf.matrix()
        Amm = A[m, m] - lam * np.eye(sp.kappa_minus)
        if sp.kappa_minus:
            s = np.linalg.svd(Amm, compute_uv=False)
            if s[-1] <= 1e-12 * max(1.0, s[0]):
                raise ShiftSingular(f"T^-- - lambda is singular at {lam}")
            S = A[p, p] - lam * np.eye(sp.kappa_plus) - A[p, m] @ np.linalg.solve(Amm, A[m, p])
        else:
            S = A[p, p] - lam * np.eye(sp.kappa_plus)
        rep.expect_rel_equal(Tp.shift(lam), LinearRelation.graph(S), tol, "a) T^+(l) - l = Schur complement", lam)
    g0 = gamma_field(Tf, None, lam0)
    g = gamma_field(Tf, None, lam)
    Tp0 = family(Tf, "+", lam0)
    diff = operator_sum(Tp0, Tp, 1.0, -1.0)
    prod = compose(g.gamma_c_rel, g0.gamma_rel)
    mul = LinearRelation.multivalued(sp.kappa_plus, Tp.mul())
    rhs = componentwise_sum(prod.scale(lam - lam0), mul)
    rep.expect_rel_equal(diff, rhs, MAT_TOL, "b) T^+(l0) - T^+(l) = (l - l0) gamma_l^c gamma_l0", lam)
    return rep


def check_difference_telescoping(T: Relation, D: Decomposition | None, lams, tol=MAT_TOL,
                                 instance="") -> VerificationReport:
    """The difference formula is additive along three points."""
    rep = VerificationReport("difference_telescoping", instance=instance)
    Tf, D = _frame(T, D)
    _selfadjoint_L(Tf)
    l1, l2, l3 = (complex(z) for z in lams)
    gs = {z: gamma_field(Tf, None, z) for z in (l1, l2, l3)}
    dom = gs[l1].gamma_rel.domain().basis

    def term(a, b):
        return (b - a) * gs[b].gamma_c @ gs[a].gamma @ dom

    res = term(l1, l2) + term(l2, l3) - term(l1, l3)
    rep.expect_small(float(np.linalg.norm(res)) if res.size else 0.0, tol, "telescoping differences", l1)
    return rep


# -- regularity regions ---------------------------------------------------------------------------

def regularity_regions(T: Relation, D: Decomposition | None, grid=5, window=None, tol=TOL,
                       instance="") -> VerificationReport:
    """sigma-hat against sigma_p on s(JT), the regularity equalities and the kernel dimension counts.

    In finite dimension every lineal is closed, so s(JT) = C minus sigma_p(JT)
    and s_*(T) is all non-real numbers.
    """
    rep = VerificationReport("regularity_regions", instance=instance)
    Tf, D = _frame(T, D)
    from .spectra import regular_points, resolvent_points
    sp = Tf.space
    sa = is_selfadjoint(Tf)
    spec = point_spectrum(Tf)
    specJ = point_spectrum(Tf.times_J())
    if window is None:
        s = max(1.0, float(np.linalg.norm(Tf.matrix(), 2)))
        window = (-2 * s, 2 * s, -2 * s, 2 * s)
    xs = np.linspace(window[0], window[1], grid)
    ys = np.linspace(window[2], window[3], grid + (grid % 2 == 1))
    lams = [complex(x, y) for x in xs for y in ys if y != 0]
    if not spec.all_of_C:
        lams += [mu for mu, _ in spec.eigenvalues if abs(mu.imag) > 1e-6]
        lams += [mu.conjugate() for mu, _ in spec.eigenvalues if abs(mu.imag) > 1e-6]
    Tc = Tf.adjoint()
    reg = regular_points(Tf, lams, Tc)
    res = resolvent_points(Tf, lams, Tc) if sa else None
    for i, lam in enumerate(lams):
        if _in_spec(specJ, lam) or lam == 0:
            continue
        k = Tf.kernel_at(lam)
        rep.expect(bool(reg[i]) == k.is_zero(), "s(JT) meet sigma-hat(T) = s(JT) meet sigma_p(T)", lam)
        Tm = family(Tf, "-", lam)
        kTm = Tm.kernel_at(lam)
        pre = Tf.times_J().shift(lam).preimage(lift(sp, "-", kTm))
        rep.expect(k.dim == pre.dim, "dim Ker_l T = dim (JT - l)^-1(Ker_l T^-(l))", lam,
                   detail=f"{k.dim} vs {pre.dim}")
        if sa:
            kb = Tf.kernel_at(lam.conjugate())
            rep.expect(k.dim == kb.dim, "dim Ker_l T = dim Ker_conj(l) T", lam, detail=f"{k.dim} vs {kb.dim}")
            delta = k.is_zero() and kb.is_zero()
            rep.expect(bool(res[i]) == delta, "C_* meet rho(T) = s_*(T) meet delta(T)", lam)
            m0 = _rho_zero(Tm.shift(lam))
            p0 = _rho_zero(family(Tf, "+", lam).shift(lam))
            rep.expect(bool(res[i]) == m0, "l in rho(T) iff 0 in rho(T^-(l) - l)", lam,
                       detail=f"rho={bool(res[i])}, minus={m0}")
            rep.expect(bool(res[i]) == p0, "l in rho(T) iff 0 in rho(T^+(l) - l)", lam,
                       detail=f"rho={bool(res[i])}, plus={p0}")
    return rep
