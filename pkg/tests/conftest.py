import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from krel.krein import KreinSpace, reference_decomposition
from krel.relation import make_relation

settings.register_profile("krel", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("krel")


def two_dim(beta=1.0):
    """Symmetric T, self-adjoint extension T0 and N = T0 meet Sigma in signature (1, 1)."""
    sp = KreinSpace(1, 1)
    T = make_relation(sp, [[1.0], [0.0]], [[0.0], [-beta]])
    T0 = make_relation(sp, np.eye(2), [[0.0, beta], [-beta, 0.0]])
    N = make_relation(sp, [[0.0], [1.0]], [[beta], [0.0]])
    return sp, T, T0, N


@pytest.fixture
def example():
    return two_dim(1.0)


@pytest.fixture
def ref2():
    return reference_decomposition(KreinSpace(1, 1))


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def hermitian(rng, n):
    A = crandn(rng, n, n)
    return (A + A.conj().T) / 2
