"""Dense spectral analysis of Liouvillians: eigenmodes, steady states, gaps.

Eigenvalue conventions: a mode is a steady-state candidate when |mu| falls
below tol_zero = 1e-10 * ||L_v||_F (configurable).  The Liouvillian gap is
the smallest |Re mu| over the remaining modes, i.e. the slowest nonzero
relaxation rate.
"""

import csv
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.spatial.distance import cdist

from .linalg import vectorize, devectorize

__all__ = [
    "SpectralResult", "ScalingFit", "SteadyStateResult",
    "eig_full", "steady_state", "liouvillian_gap", "gap_scaling_fit",
    "spectral_displacement", "write_spectral_csv",
]

DEFAULT_DIM_CAP = 4096


@dataclass
class SpectralResult:
    """Full eigensystem of a Liouvillian.

    eigenvalues are sorted by descending real part (ties by imaginary part);
    right_eigenmatrices[j] is the devectorized right eigenvector of
    eigenvalues[j] (None when only eigenvalues were requested).  Steady
    candidates (|mu| < tol_zero) are trace-normalized to Tr = 1 whenever
    their trace is not numerically zero; all other eigenmatrices carry unit
    Frobenius norm.
    """

    eigenvalues: np.ndarray
    right_eigenmatrices: list
    steady_indices: list
    gap: float
    tol_zero: float


@dataclass
class ScalingFit:
    """Power-law fit gap ~ N^(-1/nu) from log-log least squares."""

    exponent: float
    intercept: float
    r_squared: float
    samples: list


@dataclass
class SteadyStateResult:
    """Steady state plus kernel diagnostics.

    state is Hermitized and trace-normalized.  multiplicity is the kernel
    dimension; basis holds an orthonormal (Hilbert-Schmidt) kernel basis when
    the kernel is degenerate, in which case state is the projection of the
    identity onto the kernel (the trace-carrying direction).  residual is
    ||L_v vec(rho)|| / ||vec(rho)|| relative to ||L_v||_F.
    """

    state: np.ndarray
    multiplicity: int
    basis: list
    residual: float


def _default_tol_zero(matrix):
    return 1e-10 * np.linalg.norm(matrix)


def eig_full(matrix, *, dim_cap=DEFAULT_DIM_CAP, tol_zero=None, eigenvalues_only=False):
    """Complete eigendecomposition of a general complex matrix.

    Uses the backward-stable QR/Schur path (LAPACK zgeev).  Steady-state
    candidates failing the kernel residual 1e-10 get one round of
    shifted inverse-iteration refinement.  Raises on dimensions above
    dim_cap and on LAPACK non-convergence; set eigenvalues_only=True to
    skip eigenvectors (halves time and memory for gap-only work).
    """
    matrix = np.asarray(matrix, dtype=complex)
    dim = matrix.shape[0]
    if matrix.ndim != 2 or matrix.shape[1] != dim:
        raise ValueError(f"expected a square matrix, got shape {matrix.shape}")
    if dim > dim_cap:
        raise ValueError(f"dimension {dim} exceeds the cap {dim_cap}")
    if tol_zero is None:
        tol_zero = _default_tol_zero(matrix)

    if eigenvalues_only:
        mu = sla.eigvals(matrix)  # raises LinAlgError on non-convergence
        order = np.lexsort((mu.imag, -mu.real))
        mu = mu[order]
        steady = [int(j) for j in np.flatnonzero(np.abs(mu) < tol_zero)]
        return SpectralResult(mu, None, steady, _gap_from(mu, tol_zero), tol_zero)

    mu, vecs = sla.eig(matrix)
    order = np.lexsort((mu.imag, -mu.real))
    mu = mu[order]
    vecs = vecs[:, order]

    scale = np.linalg.norm(matrix)
    steady = [int(j) for j in np.flatnonzero(np.abs(mu) < tol_zero)]
    for j in steady:
        v = vecs[:, j]
        if np.linalg.norm(matrix @ v) > 1e-10 * scale:
            vecs[:, j] = _refine_kernel_vector(matrix, v, tol_zero)

    mats = []
    for j in range(dim):
        rho = devectorize(vecs[:, j])
        tr = np.trace(rho)
        if j in steady and abs(tr) > 1e-10:
            rho = rho / tr
        mats.append(rho)
    return SpectralResult(mu, mats, steady, _gap_from(mu, tol_zero), tol_zero)


def _gap_from(mu, tol_zero):
    nonzero = np.abs(mu) > tol_zero
    if not np.any(nonzero):
        return 0.0
    return float(np.min(np.abs(mu[nonzero].real)))


def _refine_kernel_vector(matrix, v, tol_zero):
    # shifted inverse iteration toward the kernel; the tiny shift keeps the
    # factorization nonsingular while the kernel direction dominates 1/(mu-s)
    shift = tol_zero
    v = v / np.linalg.norm(v)
    scale = np.linalg.norm(matrix)
    shifted = matrix - shift * np.eye(matrix.shape[0])
    for _ in range(2):
        try:
            y = sla.solve(shifted, v)
        except sla.LinAlgError:
            break
        y_norm = np.linalg.norm(y)
        if not np.isfinite(y_norm) or y_norm == 0.0:
            break
        v = y / y_norm
        if np.linalg.norm(matrix @ v) <= 1e-10 * scale:
            break
    return v


def liouvillian_gap(result):
    """Smallest |Re mu| over the nonzero modes of a SpectralResult."""
    return _gap_from(np.asarray(result.eigenvalues), result.tol_zero)


def _kernel_dimension_arnoldi(matrix, tol_zero, k):
    # shift-invert Arnoldi near zero; returns None when inconclusive
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            vals = spla.eigs(
                sp.csc_matrix(matrix), k=k, sigma=-1e-3 * tol_zero,
                which="LM", return_eigenvectors=False,
            )
    except Exception:
        return None
    count = int(np.sum(np.abs(vals) < tol_zero))
    if count >= k:
        return None  # kernel may extend beyond the probe window
    return count


def steady_state(matrix, *, tol_zero=None, dim_cap=DEFAULT_DIM_CAP):
    """Kernel state(s) of a trace-preserving Liouvillian.

    A unique kernel is solved directly through a bordered linear system
    (one row replaced by the trace constraint), avoiding a full
    eigendecomposition.  Degenerate kernels are resolved by dense
    eigendecomposition: the result carries an orthonormal kernel basis and
    the canonical state, the kernel projection of the identity matrix.
    The returned state is always Hermitized and trace-normalized.
    """
    matrix = np.asarray(matrix, dtype=complex)
    dim2 = matrix.shape[0]
    dim = int(round(np.sqrt(dim2)))
    if dim * dim != dim2:
        raise ValueError(f"superoperator dimension {dim2} is not a perfect square")
    if tol_zero is None:
        tol_zero = _default_tol_zero(matrix)

    scale = np.linalg.norm(matrix)
    # trace preservation: vec(I) must be a left null vector
    left = vectorize(np.eye(dim, dtype=complex))
    if np.linalg.norm(left @ matrix) > 1e-8 * scale:
        raise ValueError("matrix is not trace-preserving; steady_state requires c = 1")

    # kernel dimensionality: Arnoldi probe for large problems, dense otherwise
    multiplicity = None
    if dim2 > 600:
        k = min(6, dim2 - 2)
        multiplicity = _kernel_dimension_arnoldi(matrix, tol_zero, k)
    if multiplicity is None:
        mu = sla.eigvals(matrix)
        multiplicity = int(np.sum(np.abs(mu) < tol_zero))
    if multiplicity == 0:
        # tolerance too tight for the actual kernel residual; fall back to 1
        multiplicity = 1

    if multiplicity == 1:
        rho = _steady_bordered(matrix, dim)
        if rho is None:
            rho = _steady_dense(matrix, dim, tol_zero)
        residual = np.linalg.norm(matrix @ vectorize(rho)) / (
            np.linalg.norm(vectorize(rho)) * scale
        )
        return SteadyStateResult(rho, 1, [rho], float(residual))

    # degenerate kernel: orthonormal basis + identity projection
    mu, vecs = sla.eig(matrix)
    kernel_cols = np.flatnonzero(np.abs(mu) < tol_zero)
    basis_mat, _ = np.linalg.qr(vecs[:, kernel_cols])
    coeffs = basis_mat.conj().T @ left
    proj = basis_mat @ coeffs
    rho = devectorize(proj)
    tr = np.trace(rho)
    if abs(tr) < 1e-12:
        raise ValueError("kernel projection of the identity has zero trace")
    rho = rho / tr
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    residual = np.linalg.norm(matrix @ vectorize(rho)) / (
        np.linalg.norm(vectorize(rho)) * scale
    )
    basis = [devectorize(basis_mat[:, j]) for j in range(basis_mat.shape[1])]
    return SteadyStateResult(rho, int(len(kernel_cols)), basis, float(residual))


def _steady_bordered(matrix, dim):
    # replace the first row with the trace constraint; the kernel vector has
    # nonzero trace for a unique steady state, so the system is regular
    bordered = matrix.copy()
    trace_row = np.zeros(dim * dim, dtype=complex)
    trace_row[:: dim + 1] = 1.0
    bordered[0, :] = trace_row
    rhs = np.zeros(dim * dim, dtype=complex)
    rhs[0] = 1.0
    try:
        x = sla.solve(bordered, rhs)
    except sla.LinAlgError:
        return None
    rho = devectorize(x)
    rho = 0.5 * (rho + rho.conj().T)
    tr = np.trace(rho).real
    if not np.isfinite(tr) or abs(tr) < 1e-12:
        return None
    rho = rho / tr
    residual = np.linalg.norm(matrix @ vectorize(rho)) / np.linalg.norm(vectorize(rho))
    if residual > 1e-6 * max(1.0, np.linalg.norm(matrix)):
        return None
    return rho


def _steady_dense(matrix, dim, tol_zero):
    mu, vecs = sla.eig(matrix)
    j = int(np.argmin(np.abs(mu)))
    rho = devectorize(vecs[:, j])
    rho = 0.5 * (rho + rho.conj().T)
    tr = np.trace(rho).real
    if abs(tr) < 1e-12:
        raise ValueError("steady candidate has zero trace")
    return rho / tr


def gap_scaling_fit(samples):
    """Fit gap(N) = C * N^(-1/nu) by least squares on log-log data."""
    samples = [(int(n), float(g)) for n, g in samples]
    if len(samples) < 3:
        raise ValueError(f"need at least 3 samples, got {len(samples)}")
    if any(g <= 0 for _, g in samples):
        raise ValueError("all gaps must be positive for a log-log fit")
    log_n = np.log([n for n, _ in samples])
    log_g = np.log([g for _, g in samples])
    slope, intercept = np.polyfit(log_n, log_g, 1)
    fitted = slope * log_n + intercept
    ss_res = float(np.sum((log_g - fitted) ** 2))
    ss_tot = float(np.sum((log_g - np.mean(log_g)) ** 2))
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return ScalingFit(float(-1.0 / slope), float(intercept), r_squared, samples)


def spectral_displacement(unperturbed, perturbed):
    """Hausdorff distance between two eigenvalue sets in the complex plane."""
    mu_a = np.asarray(getattr(unperturbed, "eigenvalues", unperturbed))
    mu_b = np.asarray(getattr(perturbed, "eigenvalues", perturbed))
    if mu_a.size != mu_b.size:
        raise ValueError(f"dimension mismatch: {mu_a.size} vs {mu_b.size}")
    pts_a = np.column_stack([mu_a.real, mu_a.imag])
    pts_b = np.column_stack([mu_b.real, mu_b.imag])
    dist = cdist(pts_a, pts_b)
    return float(max(dist.min(axis=1).max(), dist.min(axis=0).max()))


def write_spectral_csv(result, stream):
    """Serialize a SpectralResult: (index, re_mu, im_mu, trace_re, trace_im, is_steady)."""
    if result.right_eigenmatrices is None:
        raise ValueError("CSV serialization needs eigenmatrices; rerun without eigenvalues_only")
    writer = csv.writer(stream)
    writer.writerow(["index", "re_mu", "im_mu", "trace_re", "trace_im", "is_steady"])
    steady = set(result.steady_indices)
    for j, mu in enumerate(result.eigenvalues):
        tr = np.trace(result.right_eigenmatrices[j])
        writer.writerow(
            [j, repr(float(mu.real)), repr(float(mu.imag)),
             repr(float(tr.real)), repr(float(tr.imag)), int(j in steady)]
        )
