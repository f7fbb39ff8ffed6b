import numpy as np
import pytest
from hypothesis import given, strategies as st

from krel.errors import DimensionError, NotAngular, NotStrictContraction
from krel.krein import (KreinSpace, angular_operator, classify_subspace, decomposition_from_contraction,
                        gamma_gram, gamma_space, indefinite_gram)
from krel.numeric import Subspace, gap, operator_norm

from conftest import crandn


def test_fundamental_symmetry():
    sp = KreinSpace(2, 3)
    J = sp.J
    assert np.allclose(J @ J, np.eye(5)) and np.allclose(J, J.conj().T)
    assert np.allclose(np.diag(J).real, [-1, -1, 1, 1, 1])


def test_indefinite_gram_examples():
    sp = KreinSpace(1, 1)
    assert indefinite_gram(sp, [[1], [0]], [[1], [0]]) == pytest.approx(np.array([[-1]]))
    assert indefinite_gram(sp, [[1], [0]], [[0], [-1]])[0, 0] == 0
    rng = np.random.default_rng(0)
    X = crandn(rng, 2, 3)
    M = indefinite_gram(sp, X, X)
    assert np.allclose(M, M.conj().T)
    with pytest.raises(DimensionError):
        indefinite_gram(sp, np.ones((3, 1)), np.ones((2, 1)))


def test_bracket_is_conjugate_linear_in_first_factor():
    sp = KreinSpace(1, 2)
    x, y = np.array([1, 2j, 0]), np.array([0, 1, 1])
    assert sp.bracket(1j * x, y) == pytest.approx(-1j * sp.bracket(x, y))


def test_gamma_space():
    space2, JG = gamma_space(KreinSpace(0, 1))
    assert np.allclose(JG, [[0, -1j], [1j, 0]])
    space2, JG = gamma_space(KreinSpace(2, 1))
    w = np.linalg.eigvalsh(JG)
    assert np.sum(w < 0) == 3 and np.sum(w > 0) == 3
    assert np.allclose(JG @ JG, np.eye(6))
    t = np.array([[1], [0], [0], [-1]], dtype=complex)
    assert abs(gamma_gram(KreinSpace(1, 1), t, t)[0, 0]) < 1e-15


@given(st.integers(0, 2**32 - 1))
def test_gamma_matrix_realizes_metric(seed):
    sp = KreinSpace(1, 2)
    _, JG = gamma_space(sp)
    rng = np.random.default_rng(seed)
    U, V = crandn(rng, 6, 2), crandn(rng, 6, 2)
    assert np.allclose(U.conj().T @ JG @ V, gamma_gram(sp, U, V), atol=1e-12)


def test_classify_examples():
    sp = KreinSpace(1, 1)
    assert classify_subspace(sp, sp.H_plus).tag == "uniformly_positive"
    assert classify_subspace(sp, sp.H_minus).tag == "uniformly_negative"
    assert classify_subspace(sp, Subspace.span([[1], [1]])).tag == "neutral"
    assert classify_subspace(sp, Subspace.full(2)).tag == "indefinite"
    # Example graph vector in the doubled space is neutral
    g2, _ = gamma_space(sp)
    t = Subspace.span([[1], [0], [0], [-1]])
    assert abs(gamma_gram(sp, t.basis, t.basis)[0, 0]) < 1e-12


def test_degenerate_nonnegative_is_positive():
    sp = KreinSpace(1, 2)
    L = Subspace.span([[1, 0], [1, 0], [0, 1]])
    c = classify_subspace(sp, L)
    assert c.tag == "positive" and c.definiteness_margin == 0.0


@given(st.integers(0, 2**32 - 1))
def test_classify_basis_invariant(seed):
    rng = np.random.default_rng(seed)
    sp = KreinSpace(2, 2)
    B = crandn(rng, 4, 2)
    U = crandn(rng, 2, 2) + 2 * np.eye(2)
    assert classify_subspace(sp, Subspace.span(B)).tag == classify_subspace(sp, Subspace.span(B @ U)).tag


def test_angular_operator_examples():
    sp = KreinSpace(1, 1)
    assert np.allclose(angular_operator(sp, sp.H_plus), 0)
    assert angular_operator(sp, Subspace.span([[0.3j], [1]]))[0, 0] == pytest.approx(0.3j)
    with pytest.raises(NotAngular):
        angular_operator(sp, sp.H_minus)


def test_decomposition_identity_and_half():
    sp = KreinSpace(1, 1)
    D = decomposition_from_contraction(sp, np.zeros((1, 1)))
    assert np.allclose(D.J1, sp.J) and D.is_reference
    D = decomposition_from_contraction(sp, [[0.5]])
    assert np.allclose(D.J1 @ D.J1, np.eye(2), atol=1e-12)
    JJ1 = sp.J @ D.J1
    assert np.allclose(JJ1, JJ1.conj().T, atol=1e-12)
    with pytest.raises(NotStrictContraction):
        decomposition_from_contraction(sp, [[1.0]])


@given(st.integers(0, 2**32 - 1))
def test_decomposition_invariants(seed):
    rng = np.random.default_rng(seed)
    sp = KreinSpace(2, 3)
    K = crandn(rng, 2, 3)
    K *= 0.9 / operator_norm(K)
    D = decomposition_from_contraction(sp, K)
    assert gap(D.H1_plus + D.H1_minus, Subspace.full(5)) <= 1e-12
    assert np.abs(indefinite_gram(sp, D.H1_plus.basis, D.H1_minus.basis)).max() < 1e-10
    c = classify_subspace(sp, D.H1_plus)
    assert c.tag == "uniformly_positive" and c.definiteness_margin >= (1 - 0.81) / 2
    assert classify_subspace(sp, D.H1_minus).tag == "uniformly_negative"
    K2 = angular_operator(sp, D.H1_plus)
    assert np.allclose(K2, K, atol=1e-10)
    W = D.frame
    assert np.allclose(W.conj().T @ sp.J @ W, sp.J, atol=1e-10)
