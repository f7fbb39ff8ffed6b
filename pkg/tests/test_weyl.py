import numpy as np
import pytest

from krel import weyl as W
from krel.errors import PreconditionFailed
from krel.krein import KreinSpace
from krel.numeric import Subspace
from krel.relation import LinearRelation, make_relation
from krel.blocks import compress

from conftest import hermitian


@pytest.mark.parametrize("lam", [2j, 1 + 1j, -0.5j])
def test_example_families(example, lam):
    sp, T, T0, N = example
    for sign in ("-", "+"):
        F = W.compression_family(T0, None, sign, lam)
        assert F.is_operator() and F.matrix() == pytest.approx(np.array([[-1 / lam]]), abs=1e-12)
    assert W.CompressionFamily(T0, None, "minus").at(lam).equals(W.compression_family(T0, None, "-", lam))
    with pytest.raises(ValueError):
        W.compression_family(T0, None, "0", lam)


def test_family_basis_invariance():
    rng = np.random.default_rng(1)
    sp = KreinSpace(2, 2)
    A = sp.J @ hermitian(rng, 4)
    U = rng.standard_normal((4, 4)) + 4 * np.eye(4)
    T1 = make_relation(sp, np.eye(4), A)
    T2 = make_relation(sp, U, A @ U)
    for sign in ("-", "+"):
        assert W.compression_family(T1, None, sign, 1.3j).gap(W.compression_family(T2, None, sign, 1.3j)) <= 1e-10


def test_example_resolvent_identities(example):
    sp, T, T0, N = example
    lam = 2j
    Rl = T0.shift(lam).inverse()
    assert compress(Rl, "-", "-").matrix()[0, 0] == pytest.approx(2j / 3, abs=1e-12)
    JT = T0.times_J()
    assert compress(JT.shift(lam).inverse(), "-", "-").matrix()[0, 0] == pytest.approx(2j / 5, abs=1e-12)
    assert compress(JT.shift(-lam).inverse(), "+", "+").matrix()[0, 0] == pytest.approx(-2j / 5, abs=1e-12)
    assert W.check_resolvent_identities(T0, None, lam).passed


def test_resolvent_identity_sign_for_zero_relation():
    """P^-(T - l)^-1|H^- = +(T^-(l) - l)^-1; the minus form already fails for T = 0."""
    sp = KreinSpace(1, 1)
    T = make_relation(sp, np.eye(2), np.zeros((2, 2)))
    lam = 0.7 + 1.1j
    lhs = compress(T.shift(lam).inverse(), "-", "-").matrix()[0, 0]
    fam = W.compression_family(T, None, "-", lam).shift(lam).inverse().matrix()[0, 0]
    assert lhs == pytest.approx(-1 / lam) and fam == pytest.approx(-1 / lam)
    assert abs(lhs + fam) > 0.1
    assert W.check_resolvent_identities(T, None, lam).passed


def test_exception_set_and_points(example):
    sp, T, T0, N = example
    exc = W.exception_set(T0)
    assert np.min(np.abs(exc)) == 0
    pts = W.admissible_points(T0, None, 3)
    assert len(pts) == 3 and all(np.min(np.abs(exc - z)) >= W.EXCLUSION for z in pts)


def test_example_minus_family_and_ranges(example):
    sp, T, T0, N = example
    for lam in (2j, 0.6 + 1.7j):
        assert W.check_minus_family(T, T0, None, lam).passed
        assert W.check_minus_family(T0, None, None, lam).passed
        for A in (T, T0):
            assert W.check_plus_family_range(A, None, lam).passed
            assert W.check_range_identities(A, None, lam).passed


def test_example_eigenvalue_criterion(example):
    sp, T, T0, N = example
    # T^-(l) - l = -1/l - l vanishes exactly at l = +-i
    for lam, singular in ((1j, True), (2j, False)):
        M = W.compression_family(T0, None, "-", lam).shift(lam)
        assert (not M.ker().is_zero()) == singular


def test_example_gamma_field(example):
    sp, T, T0, N = example
    gf = W.gamma_field(T0, None, 2j)
    assert gf.L_lambda.equals(Subspace.span([[1], [2j]]))
    assert gf.gamma[0, 0] == pytest.approx(-0.5j) and gf.gamma_c[0, 0] == pytest.approx(0.5j)
    assert gf.is_contraction
    assert W.check_gamma_field(T0, None, 2j).passed


def test_example_resolvent_formula(example):
    sp, T, T0, N = example
    lhs, rhs = W.resolvent_formula_sides(T0, None, 2j)
    assert abs(lhs[0, 0] - 2j / 3) <= 1e-12 and abs(rhs[0, 0] - 2j / 3) <= 1e-12
    assert W.check_resolvent_formula(T0, None, 2j).passed


def test_image_of_negative_part_is_companion_at_conjugate(example):
    """(T - l)(H^-) is the J-orthogonal companion of L at conj(l), not at l."""
    sp, T, T0, N = example
    lam = 2j
    img = T0.shift(lam).image(sp.H_minus)
    at = lambda z: T0.shift(z).preimage(sp.H_plus).complement().map(sp.J)
    assert img.equals(Subspace.span([[2j], [1]]))
    assert img.equals(at(np.conj(lam))) and not img.equals(at(lam))


def test_gamma_field_vanishes_for_diagonal_relation():
    rng = np.random.default_rng(5)
    sp = KreinSpace(2, 2)
    A = np.zeros((4, 4), dtype=complex)
    A[:2, :2], A[2:, 2:] = hermitian(rng, 2), hermitian(rng, 2)
    T = make_relation(sp, np.eye(4), sp.J @ A)
    lam = W.admissible_points(T, None, 1)[0]
    gf = W.gamma_field(T, None, lam)
    assert np.allclose(gf.gamma, 0) and np.allclose(gf.gamma_c, 0)
    assert W.check_resolvent_formula(T, None, lam).passed


def test_gamma_field_with_multivalued_part():
    """Ind T inside H^+ makes gamma^c multivalued; its operator part carries the formula."""
    rng = np.random.default_rng(6)
    sp = KreinSpace(1, 2)
    S = hermitian(rng, 2)
    Js = np.diag([-1.0, 1.0])
    F = np.zeros((3, 3), dtype=complex)
    G = np.zeros((3, 3), dtype=complex)
    F[:2, :2] = np.eye(2)
    G[:2, :2] = Js @ S
    G[2, 2] = 1.0
    T = make_relation(sp, F, G)
    lam = W.admissible_points(T, None, 1)[0]
    gf = W.gamma_field(T, None, lam)
    assert gf.gamma_c_rel.mul().equals(Subspace.coordinate(2, [1]))
    assert np.allclose(gf.gamma_c[1], 0)
    assert W.check_gamma_field(T, None, lam).passed
    assert W.check_resolvent_formula(T, None, lam).passed


def test_gamma_field_preconditions(example):
    sp, T, T0, N = example
    with pytest.raises(PreconditionFailed):
        W.gamma_field(T0, None, 1.0)
    with pytest.raises(PreconditionFailed):
        W.gamma_field(T, None, 2j)


def test_example_schur_difference_and_regions(example):
    sp, T, T0, N = example
    assert W.schur_and_difference(T0, None, 2j, 0.6 + 1.7j).passed
    assert W.check_difference_telescoping(T0, None, [2j, 0.6 + 1.7j, -1.3j]).passed
    assert W.regularity_regions(T0, None).passed
    assert W.regularity_regions(T, None).passed


def test_generated_selfadjoint_instances():
    from krel.relation import in_frame, is_selfadjoint
    from krel.toolkit.suite import make_instance
    n = 0
    for i in range(60):
        inst = make_instance(5, i, 8, 3)
        A = inst.T0 if inst.T0 is not None else inst.T
        A = in_frame(A, inst.D)
        if not (is_selfadjoint(A) and A.domain().contains(A.space.H_minus)):
            continue
        for lam in W.admissible_points(A, None, 2):
            assert W.check_gamma_field(A, None, lam).passed
            assert W.check_resolvent_formula(A, None, lam).passed
            n += 1
    assert n > 10
