import numpy as np
import pytest

from krel import extensions as X
from krel.errors import PreconditionFailed
from krel.krein import KreinSpace
from krel.numeric import Subspace
from krel.relation import class_P, componentwise_sum, in_frame, intersect, is_symmetric, make_relation
from krel.spectra import point_spectrum
from krel.toolkit.suite import make_instance

from conftest import hermitian


def test_example_deficiency(example):
    sp, T, T0, N = example
    d = X.deficiency(T)
    assert d.N_plus_i.equals(Subspace.span([[1j], [1]]))
    assert d.N_minus_i.equals(Subspace.span([[-1j], [1]]))
    expect = make_relation(sp, [[1j, -1j], [1, 1]], [[1, 1], [1j, -1j]])
    assert d.Sigma.equals(expect)
    vals = sorted(point_spectrum(d.Sigma).values.real)
    assert vals == pytest.approx([-1.0, 1.0], abs=1e-9)
    assert np.allclose(point_spectrum(d.Sigma).values.imag, 0, atol=1e-9)


def test_example_deficiency_checks(example):
    sp, T, T0, N = example
    d = X.deficiency(T)
    assert d.Sigma.domain().is_full() and d.Sigma.is_operator()
    assert (d.N_plus_i & d.N_minus_i).is_zero()
    assert (T.domain() & d.Sigma.domain()).equals(sp.H_minus)
    for check in (X.check_deficiency_decomposition, X.sigma_characteristics, X.check_domain_meet):
        assert check(T, d).passed
    assert X.check_kernel_triviality(T).passed
    rep = X.check_regular_domain(T, T0, d)
    assert rep.passed and rep.checks >= 2
    assert X.check_cayley_identities(T, T0, d).passed
    K, V = X.cayley_transforms(T, d)
    assert V.shift(1.0).range().equals(sp.H_minus)
    assert X.check_operator_part_criteria(T).passed
    assert X.check_class_L_equivalences(T).passed


def test_example_deficiency_spectrum(example):
    sp, T, T0, N = example
    rep = X.check_deficiency_spectrum(T)
    assert rep.passed
    d = X.deficiency(T)
    for z in (1j, -1j):
        assert d.Sigma.kernel_at(z).is_zero()
    with pytest.raises(PreconditionFailed):
        X.check_deficiency_spectrum(make_relation(sp, [[1], [0]], [[1j], [0]]))


def test_example_o_set(example):
    sp, T, T0, N = example
    for lam, member in ((1j, False), (-1j, False), (2j, True), (1 + 1j, True)):
        q = X.o_set_query(T, N, lam)
        assert q.member == member and q.certified
    q = X.o_set_query(T, N, 1j)
    assert q.lhs.equals(Subspace.span([[1j], [1]]))


@pytest.mark.parametrize("lam", [1j, -1j, 2j, 1 + 1j, 0.3])
def test_example_kernel_sum(example, lam):
    sp, T, T0, N = example
    ker, q, rep = X.kernel_sum_analysis(T, N, lam)
    assert rep.passed
    assert (not ker.is_zero()) == (abs(abs(lam) - 1) < 1e-12 and lam.real == 0)


def test_class_lp_prime_deficiency_spectrum_on_selfadjoint():
    rng = np.random.default_rng(8)
    sp = KreinSpace(2, 3)
    T = make_relation(sp, np.eye(5), sp.J @ hermitian(rng, 5))
    rep = X.check_deficiency_spectrum(T)
    assert rep.passed and any("+-i" in n for n in rep.notes)


def test_o_set_formula_selfadjoint_hilbert():
    rng = np.random.default_rng(9)
    sp = KreinSpace(0, 3)
    A = hermitian(rng, 3)
    T = make_relation(sp, np.eye(3), A)
    rep = X.check_o_set_formula(T, T)
    assert rep.passed and rep.checks > 0


def test_o_set_formula_needs_full_domain(example):
    sp = KreinSpace(0, 2)
    T = make_relation(sp, [[1], [0]], [[1], [0]])
    with pytest.raises(PreconditionFailed):
        X.check_o_set_formula(T, T)


# -- documented defects of the source statements ---------------------------------------

def _mixed_claims(rep):
    return {v.claim for v in rep.violations}


def test_kernel_sum_equivalences_fail_for_multivalued_sum(example):
    """With T (+) N multivalued the (b) iff (c) equivalence and sigma_p = C both fail."""
    sp, T, T0, _ = example
    N = make_relation(sp, [[1], [0]], [[0], [1]])
    assert intersect(T, N).d == 0 and componentwise_sum(T, N).mul().dim == 1
    _, _, rep = X.kernel_sum_analysis(T, N, 0.7 + 0.4j)
    assert _mixed_claims(rep) == {"T meet N = 0: (b) iff (c)",
                                  "T meet N = 0 and D_T meet D_N nontrivial: sigma_p(T (+) N) = C"}


def test_kernel_sum_equivalence_fails_on_generated_pair():
    inst = make_instance(7, 2)
    assert inst.meta["kind"] == "hilbert_case"
    T = in_frame(inst.T, inst.D)
    Sig = X.deficiency(T).Sigma
    assert not componentwise_sum(T, Sig).mul().is_zero()
    _, _, rep = X.kernel_sum_analysis(T, Sig, 1j)
    assert _mixed_claims(rep) == {"T meet N = 0: (b) iff (c)"}


def test_literal_image_identity_is_false():
    """((T meet N) - l)(Ker_l N) is not (R_{(T meet N)-l} meet Ker_l N) + Ind(T meet N)."""
    sp = KreinSpace(0, 2)
    T = make_relation(sp, [[1], [0]], [[0], [1]])
    N = componentwise_sum(T, make_relation(sp, [[0], [1]], [[0], [0]]))
    TN = intersect(T, N)
    lhs = TN.image(N.kernel_at(0))
    literal = (TN.range() & N.kernel_at(0)) + TN.mul()
    assert lhs.is_zero() and literal.equals(Subspace.coordinate(2, [1]))
    assert lhs.equals(TN.range() & N.mul())
    _, _, rep = X.kernel_sum_analysis(T, N, 0)
    assert rep.passed and rep.notes


def test_regular_domain_criterion_needs_j_invariant_domain():
    """D_T regular does not force (Sigma operator iff T in (P)) when J D_T != D_T."""
    sp = KreinSpace(1, 1)
    T = make_relation(sp, [[1], [2]], [[-1], [2]])
    assert is_symmetric(T) and class_P(T)
    assert not X.deficiency(T).Sigma.is_operator()
    rep = X.check_regular_domain(T)
    assert _mixed_claims(rep) == {"a) Sigma operator iff T in (P)"}


@pytest.mark.parametrize("index,check", [(3, "operator_part"), (10, "operator_part"), (52, "regular_domain")])
def test_operator_part_criteria_need_frame(index, check):
    """Reference coordinates of a rotated instance break the criteria; the frame restores them."""
    inst = make_instance(7, index)
    assert inst.meta["rotated"]
    fn = X.check_operator_part_criteria if check == "operator_part" else X.check_regular_domain
    assert not fn(inst.T).passed
    assert fn(in_frame(inst.T, inst.D)).passed
