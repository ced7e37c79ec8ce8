import numpy as np
import pytest

SUN_JUPITER_MU = 0.00095
HEKTOR_M3 = 7.03e-12


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def central_gradient(f, x, h=1e-6):
    x = np.asarray(x, dtype=float)
    g = np.zeros_like(x)
    for k in range(x.size):
        e = np.zeros_like(x)
        e[k] = h
        g[k] = (f(x + e) - f(x - e)) / (2 * h)
    return g


def random_masses(rng, n):
    """Mass triples with m1 >= m2 >= m3 >= 0 summing to one."""
    m = np.sort(rng.dirichlet([1.0, 1.0, 1.0], size=n), axis=1)[:, ::-1]
    return m / m.sum(axis=1, keepdims=True)
