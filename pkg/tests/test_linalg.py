import numpy as np
import pytest

from lindlat.linalg import kron, vectorize, devectorize, hs_inner


def test_vectorize_row_major_convention():
    # |n><m| maps to component N*(n-1) + m in 1-based labels
    rho = np.array([[1.0, 2.0], [3.0, 4.0]], dtype=complex)
    assert np.array_equal(vectorize(rho), np.array([1, 2, 3, 4], dtype=complex))


def test_devectorize_round_trip(rng):
    rho = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    assert np.array_equal(devectorize(vectorize(rho)), rho)


def test_vectorize_rejects_nonsquare():
    with pytest.raises(ValueError):
        vectorize(np.zeros((2, 3)))


def test_devectorize_rejects_non_square_length():
    with pytest.raises(ValueError):
        devectorize(np.zeros(7))


def test_sandwich_identity(rng):
    # vec(A rho B) = (A (x) B^T) vec(rho), the identity the whole
    # superoperator assembly rests on
    n = 4
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    b = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    lhs = vectorize(a @ rho @ b)
    rhs = kron(a, b.T) @ vectorize(rho)
    assert np.allclose(lhs, rhs, atol=1e-12)


def test_hs_inner_is_trace_of_product(rng):
    # Tr[rho sigma], no adjoint on the first argument
    x = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    y = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    assert hs_inner(x, y) == pytest.approx(np.trace(x @ y))


def test_hs_inner_dimension_mismatch():
    with pytest.raises(ValueError):
        hs_inner(np.eye(2), np.eye(3))


def test_kron_matches_numpy(rng):
    a = rng.normal(size=(2, 2))
    b = rng.normal(size=(3, 3))
    assert np.array_equal(kron(a, b), np.kron(a, b))
