"""Vectorization of density matrices and the Kronecker calculus behind it.

Density matrices live on an N-site single-particle basis.  The outer product
|n><m| is mapped to the Liouville-space basis vector with index
l = N*(n-1) + m (1-based), i.e. row-major stacking, so that

    vectorize(A @ rho @ B) == kron(A, B.T) @ vectorize(rho).

All superoperator formulas in this package rely on that identity.
"""

import numpy as np

__all__ = ["kron", "vectorize", "devectorize", "hs_inner"]


def kron(a, b):
    """Kronecker product; block (i, j) of the result equals a[i, j] * b."""
    return np.kron(np.asarray(a), np.asarray(b))


def vectorize(rho):
    """Stack an N x N matrix row-major into a length-N^2 vector.

    Component N*(n-1) + m (1-based) holds rho[n, m].
    """
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {rho.shape}")
    return rho.reshape(-1)


def devectorize(vec):
    """Inverse of :func:`vectorize`; the vector length must be a perfect square."""
    vec = np.asarray(vec)
    if vec.ndim != 1:
        raise ValueError(f"expected a vector, got shape {vec.shape}")
    n = int(round(np.sqrt(vec.size)))
    if n * n != vec.size:
        raise ValueError(f"length {vec.size} is not a perfect square")
    return vec.reshape(n, n)


def hs_inner(rho, sigma):
    """Trace inner product Tr[rho @ sigma], with no adjoint on either argument.

    For Hermitian arguments this coincides with the Hilbert-Schmidt product;
    hs_inner(rho, rho.conj().T) is the squared Frobenius norm of rho.
    """
    rho = np.asarray(rho)
    sigma = np.asarray(sigma)
    if rho.shape != sigma.shape:
        raise ValueError(f"dimension mismatch: {rho.shape} vs {sigma.shape}")
    # einsum avoids forming the full product just to read its diagonal
    return complex(np.einsum("ij,ji->", rho, sigma))
