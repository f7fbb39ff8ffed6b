import numpy as np
import pytest
from hypothesis import given, strategies as st

from krel.errors import DimensionError, InvalidInput, InvalidRelationBasis
from krel.numeric import (Subspace, gap, operator_norm, pencil_point_spectrum, rank_reveal, rank_rtol,
                          subspace_combine)

from conftest import crandn


def test_rank_reveal_zero_and_identity():
    r, R, K = rank_reveal(np.zeros((3, 3)))
    assert r == 0 and R.dim == 0 and K.is_full()
    r, R, K = rank_reveal(np.eye(4))
    assert r == 4 and K.is_zero()


def test_rank_reveal_product_of_factors():
    rng = np.random.default_rng(1)
    M = crandn(rng, 6, 2) @ crandn(rng, 2, 4)
    r, R, K = rank_reveal(M)
    assert r == 2 and K.dim == 2
    assert np.linalg.norm(M @ K.basis) < 1e-10


def test_rank_reveal_rejects_nan():
    with pytest.raises(InvalidInput):
        rank_reveal(np.array([[np.nan]]))


def test_krel_tol_override(monkeypatch):
    monkeypatch.setenv("KREL_TOL", "1e-3")
    assert rank_rtol() == 1e-3
    assert rank_reveal(np.diag([1.0, 1e-5]))[0] == 1
    monkeypatch.setenv("KREL_TOL", "nope")
    with pytest.raises(InvalidInput):
        rank_rtol()


def test_combine_coordinate_axes():
    A, B = Subspace.coordinate(2, [0]), Subspace.coordinate(2, [1])
    assert subspace_combine(A, B, "sum").is_full()
    assert subspace_combine(A, B, "intersect").is_zero()
    assert subspace_combine(A, A, "sum").equals(A) and subspace_combine(A, A, "intersect").equals(A)


def test_combine_ambient_mismatch():
    with pytest.raises(DimensionError):
        subspace_combine(Subspace.full(2), Subspace.full(3))


@given(st.integers(0, 2**32 - 1), st.integers(1, 6), st.integers(0, 6), st.integers(0, 6))
def test_dimension_identity(seed, n, a, b):
    rng = np.random.default_rng(seed)
    a, b = min(a, n), min(b, n)
    A = Subspace.span(crandn(rng, n, a))
    B = Subspace.span(crandn(rng, n, b))
    s, i = A + B, A & B
    assert s.dim + i.dim == A.dim + B.dim
    # brute-force Gram rank oracle for the sum
    assert s.dim == np.linalg.matrix_rank(np.hstack([A.basis, B.basis]), tol=1e-9)
    assert gap(A + B, B + A) <= 1e-10


@given(st.integers(0, 2**32 - 1))
def test_sum_associative(seed):
    rng = np.random.default_rng(seed)
    A, B, C = (Subspace.span(crandn(rng, 5, 1)) for _ in range(3))
    assert gap((A + B) + C, A + (B + C)) <= 1e-10


def test_pencil_diagonal_and_example():
    s = pencil_point_spectrum(np.eye(2), np.diag([1.0, 2.0]))
    assert sorted(s.values.real) == pytest.approx([1.0, 2.0], abs=1e-12)
    assert all(k == 1 for _, k in s.eigenvalues)
    s = pencil_point_spectrum(np.eye(2), [[0, 1], [-1, 0]])
    assert sorted(s.values, key=lambda z: z.imag) == pytest.approx([-1j, 1j], abs=1e-9)
    s = pencil_point_spectrum([[1], [0]], [[0], [-1]])
    assert not s.eigenvalues and not s.all_of_C


def test_pencil_all_of_c_and_infinite():
    # {(x, y)} containing (e1, 0) and (0, e1): the kernel at every lambda contains e1
    F = np.array([[1, 0], [0, 0]], dtype=complex)
    G = np.array([[0, 1], [0, 0]], dtype=complex)
    s = pencil_point_spectrum(F, G)
    assert s.all_of_C and s.has_infinite


def test_pencil_dependent_columns():
    with pytest.raises(InvalidRelationBasis):
        pencil_point_spectrum(np.ones((2, 2)), np.ones((2, 2)))


@given(st.integers(0, 2**32 - 1), st.integers(1, 5))
def test_pencil_basis_invariance(seed, n):
    rng = np.random.default_rng(seed)
    F, G = crandn(rng, n, n), crandn(rng, n, n)
    U = crandn(rng, n, n) + 3 * np.eye(n)
    a = pencil_point_spectrum(F, G)
    b = pencil_point_spectrum(F @ U, G @ U)
    assert len(a.eigenvalues) == len(b.eigenvalues) <= n
    for mu in a.values:
        assert np.min(np.abs(b.values - mu)) <= 1e-8 * max(1, abs(mu))


def test_operator_norm_examples():
    assert operator_norm(np.diag([3.0, -1.0])) == pytest.approx(3.0)
    assert operator_norm([[0, 1], [-1, 0]]) == pytest.approx(1.0)
    rng = np.random.default_rng(5)
    M = crandn(rng, 5, 3)
    assert operator_norm(M) == pytest.approx(np.sqrt(np.linalg.eigvalsh(M.conj().T @ M)[-1]), rel=1e-10)


@given(st.integers(0, 2**32 - 1))
def test_rank_of_adjoint(seed):
    rng = np.random.default_rng(seed)
    M = crandn(rng, 4, 2) @ crandn(rng, 2, 5)
    assert rank_reveal(M)[0] == rank_reveal(M.conj().T)[0] == 2
