import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(7)


def random_density(rng, n):
    """Random full-rank physical density matrix."""
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = a @ a.conj().T
    return rho / np.trace(rho)
