import numpy as np
import pytest
from hypothesis import given, strategies as st

from krel.errors import InvalidRelationBasis
from krel.krein import KreinSpace
from krel.numeric import Subspace
from krel.relation import (LinearRelation, check_adjoint_on_domain, check_equality_criterion, check_image_identities,
                           classify, compose, componentwise_sum, image, intersect, is_dissipative, make_relation,
                           operator_part, parts, transform)

from conftest import crandn, hermitian, two_dim


def random_relation(rng, km, kp, d=None):
    sp = KreinSpace(km, kp)
    n = sp.n
    d = int(rng.integers(1, 2 * n + 1)) if d is None else d
    W = crandn(rng, 2 * n, d)
    return make_relation(sp, W[:n], W[n:])


seeds = st.integers(0, 2**32 - 1)
sig = st.tuples(st.integers(0, 3), st.integers(1, 3))


def test_make_relation_examples():
    sp = KreinSpace(1, 1)
    I = make_relation(sp, np.eye(2), np.eye(2))
    assert I.d == 2 and I.is_operator()
    M = make_relation(sp, [[0], [0]], [[0], [1]])
    assert M.domain().is_zero() and M.mul().equals(sp.H_plus)
    with pytest.raises(InvalidRelationBasis):
        make_relation(sp, [[1, 2], [0, 0]], [[1, 2], [0, 0]])


def test_example_parts(example):
    sp, T, T0, N = example
    P = parts(T)
    assert P.domain.equals(sp.H_minus) and P.range.equals(sp.H_plus) and P.mul.is_zero()
    assert T.image(sp.H_minus).equals(sp.H_plus)


def test_example_adjoint(example):
    sp, T, T0, N = example
    Tc = T.adjoint()
    assert Tc.d == 3 and Tc.contains(T0)
    # T^c = {((u1, u2), (u2, v2))}
    expect = make_relation(sp, [[1, 0, 0], [0, 1, 0]], [[0, 1, 0], [0, 0, 1]])
    assert Tc.equals(expect)


def test_example_sums_and_meets(example):
    sp, T, T0, N = example
    assert componentwise_sum(T, N).equals(T0)
    assert T0.restrict(sp.H_minus).equals(T)
    from krel.extensions import deficiency
    assert intersect(T0, deficiency(T).Sigma).equals(N)


def test_example_times_j(example):
    sp, T, T0, N = example
    JT = transform(T, "multiply_left_J")
    assert JT.equals(make_relation(sp, [[1], [0]], [[0], [-1]]))


def test_example_classes(example):
    sp, T, T0, N = example
    c = classify(T)
    assert c.symmetric and c.class_LP and not c.class_LPprime and c.L_T.is_zero()
    c0 = classify(T0)
    assert c0.selfadjoint and c0.class_L and c0.symmetric


def test_dissipative_graph():
    rng = np.random.default_rng(3)
    sp = KreinSpace(2, 2)
    S = hermitian(rng, 4)
    B = crandn(rng, 4, 2)
    T = make_relation(sp, np.eye(4), sp.J @ (S + 1j * B @ B.conj().T))
    c = classify(T)
    assert c.dissipative and c.maximal_dissipative and not c.symmetric


def test_transforms():
    sp = KreinSpace(0, 2)
    T = make_relation(sp, np.eye(2), np.diag([2.0, 3.0]))
    assert transform(T, "inverse").equals(make_relation(sp, np.eye(2), np.diag([0.5, 1 / 3])))
    assert transform(T, "shift", 2.0).kernel_at(0).equals(Subspace.coordinate(2, [0]))
    with pytest.raises(ValueError):
        transform(T, "rotate")


def test_operator_part_example():
    sp = KreinSpace(0, 2)
    T = componentwise_sum(make_relation(sp, [[1], [0]], [[0], [0]]), make_relation(sp, [[0], [0]], [[0], [1]]))
    Ts, mul = operator_part(T)
    assert mul.equals(Subspace.coordinate(2, [1]))
    assert Ts.is_operator() and np.allclose(Ts.matrix(), 0)


def test_compose_of_graphs():
    rng = np.random.default_rng(4)
    A, B = crandn(rng, 3, 3), crandn(rng, 3, 3)
    C = compose(LinearRelation.graph(A), LinearRelation.graph(B))
    assert C.equals(LinearRelation.graph(A @ B))
    T = LinearRelation.graph(np.diag([1.0, 0.0, 2.0]))
    assert compose(T.inverse(), T).contains(LinearRelation(T.range().basis, T.range().basis))


@given(seeds, sig)
def test_double_adjoint_and_dimensions(seed, s):
    T = random_relation(np.random.default_rng(seed), *s)
    Tc = T.adjoint()
    assert T.d + Tc.d == 2 * T.n
    assert Tc.adjoint().gap(T) <= 1e-10


@given(seeds, sig)
def test_parts_dimension_identities(seed, s):
    T = random_relation(np.random.default_rng(seed), *s)
    P = parts(T)
    assert P.domain.dim + P.mul.dim == T.d
    assert T.ker().dim + T.range().dim == T.d
    Ts, mul = operator_part(T)
    assert Ts.is_operator() and Ts.domain().equals(T.domain())
    assert componentwise_sum(Ts, LinearRelation.multivalued(T.n, mul)).gap(T) <= 1e-10


@given(seeds, sig)
def test_sum_and_meet(seed, s):
    rng = np.random.default_rng(seed)
    T, N = random_relation(rng, *s), random_relation(rng, *s)
    S, M = componentwise_sum(T, N), intersect(T, N)
    assert S.d + M.d == T.d + N.d
    assert S.adjoint().gap(intersect(T.adjoint(), N.adjoint())) <= 1e-9


@given(seeds, sig)
def test_image_identities_random(seed, s):
    rng = np.random.default_rng(seed)
    T = random_relation(rng, *s)
    L = Subspace.span(crandn(rng, T.n, int(rng.integers(0, T.n + 1))))
    assert check_image_identities(T, L).passed


def test_adjoint_on_domain_and_equality_criterion(example):
    sp, T, T0, N = example
    assert check_adjoint_on_domain(T).passed
    rep = check_equality_criterion(T, T0)
    assert rep.passed and rep.checks == 1
    assert check_equality_criterion(T0, T0).passed


def test_symmetric_class_L_puts_mul_in_h_plus():
    from krel.toolkit.suite import make_instance
    from krel.relation import in_frame
    hit = 0
    for i in range(40):
        inst = make_instance(11, i, 8, 3)
        T = in_frame(inst.T, inst.D)
        c = classify(T)
        if c.symmetric and c.class_L:
            sp = T.space
            assert sp.H_plus.contains(T.mul()) and sp.H_plus.contains(T.adjoint().mul())
            hit += 1
    assert hit > 10
