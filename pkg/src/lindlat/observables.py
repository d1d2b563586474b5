"""Scalar diagnostics: scaled position, width, purity, fidelity, physicality.

The position operator S is diagonal and symmetric about zero, spanning
-(N-1)/2 .. (N-1)/2, so the scaled position xi = Tr[rho S]/s_max with
s_max = (N-1)/2 reaches exactly +-1 on the edge projectors.  Dividing by N
instead (the site-count convention) is available behind a flag.
"""

from dataclasses import dataclass

import numpy as np

from .models import asymmetry_base

__all__ = [
    "PhysicalityReport", "position_operator", "scaled_position", "width",
    "purity", "fidelity_with_pure", "validate_physical", "hn_occupations",
]


def position_operator(n_sites):
    """Diagonal position matrix with entries -(N-1)/2 .. (N-1)/2.

    Integers for odd N (summing to zero), half-integers for even N.
    """
    if n_sites < 1:
        raise ValueError("need at least one site")
    return np.diag(np.arange(n_sites) - (n_sites - 1) / 2.0).astype(complex)


def _position_moments(rho):
    rho = np.asarray(rho)
    n = rho.shape[0]
    s_diag = np.arange(n) - (n - 1) / 2.0
    pops = np.diagonal(rho).real
    return float(np.dot(pops, s_diag)), float(np.dot(pops, s_diag**2))


def _check_unit_trace(rho):
    tr = np.trace(rho)
    if abs(tr - 1.0) > 1e-6:
        raise ValueError(f"expected a unit-trace state, got Tr = {tr}")


def scaled_position(rho, *, normalization="half-span"):
    """xi = Tr[rho S] / s_max in [-1, 1]; +1 is full weight on the last site.

    normalization='site-count' divides by N instead, which cannot reach +-1
    but matches the alternative figure convention.
    """
    rho = np.asarray(rho)
    _check_unit_trace(rho)
    n = rho.shape[0]
    mean_s, _ = _position_moments(rho)
    if normalization == "half-span":
        return mean_s / ((n - 1) / 2.0)
    if normalization == "site-count":
        return mean_s / n
    raise ValueError(f"unknown normalization {normalization!r}")


def width(rho):
    """Position standard deviation sqrt(<S^2> - <S>^2), unnormalized."""
    rho = np.asarray(rho)
    _check_unit_trace(rho)
    mean_s, mean_s2 = _position_moments(rho)
    var = mean_s2 - mean_s**2
    if var < -1e-10:
        raise ValueError(f"variance {var} is negative beyond numerical tolerance")
    return float(np.sqrt(max(var, 0.0)))


def purity(rho):
    """Tr[rho^2], between 1/N (maximally mixed) and 1 (pure)."""
    rho = np.asarray(rho)
    _check_unit_trace(rho)
    return float(np.einsum("ij,ji->", rho, rho).real)


def fidelity_with_pure(phi, rho):
    """Overlap <phi|rho|phi> of a normalized vector with a state."""
    phi = np.asarray(phi, dtype=complex)
    if abs(np.linalg.norm(phi) - 1.0) > 1e-9:
        raise ValueError("phi must be normalized to unit norm")
    rho = np.asarray(rho)
    return float(np.real(np.vdot(phi, rho @ phi)))


@dataclass(frozen=True)
class PhysicalityReport:
    """Measured deviations from the physical-state conditions, with verdicts."""

    trace_deviation: float
    hermiticity_deviation: float
    min_eigenvalue: float
    trace_ok: bool
    hermitian_ok: bool
    positive_ok: bool

    @property
    def all_pass(self):
        return self.trace_ok and self.hermitian_ok and self.positive_ok

    def __str__(self):
        return (
            f"|Tr-1|={self.trace_deviation:.3e} ({'ok' if self.trace_ok else 'FAIL'}), "
            f"||rho-rho^dag||={self.hermiticity_deviation:.3e} "
            f"({'ok' if self.hermitian_ok else 'FAIL'}), "
            f"min_eig={self.min_eigenvalue:.3e} ({'ok' if self.positive_ok else 'FAIL'})"
        )


def validate_physical(rho):
    """Check unit trace, Hermiticity, and positivity of a density matrix.

    Thresholds: |Tr - 1| < 1e-9, ||rho - rho^dag||_F < 1e-9, and smallest
    eigenvalue of the Hermitian part > -1e-8.
    """
    rho = np.asarray(rho, dtype=complex)
    trace_dev = abs(np.trace(rho) - 1.0)
    herm_dev = float(np.linalg.norm(rho - rho.conj().T))
    min_eig = float(np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))))
    return PhysicalityReport(
        trace_deviation=float(trace_dev),
        hermiticity_deviation=herm_dev,
        min_eigenvalue=min_eig,
        trace_ok=trace_dev < 1e-9,
        hermitian_ok=herm_dev < 1e-9,
        positive_ok=min_eig > -1e-8,
    )


def hn_occupations(lat, p, j):
    """Site occupations of the j-th open-chain eigenvector, both pairings.

    Returns (right_right, biorthogonal), each normalized to sum 1.  The
    right-right occupation |phi_R(n)|^2 piles up at the right edge for
    delta > 0; the biorthogonal occupation phi_L(n) * phi_R(n) is
    proportional to sin^2(n j pi / (N+1)) and stays bulk-delocalized.
    """
    if not lat.is_open:
        raise ValueError("eigenvector occupations are for open boundaries")
    n = lat.n_sites
    if not 1 <= j <= n:
        raise ValueError(f"mode index j must lie in 1..{n}, got {j}")
    sites = np.arange(1, n + 1)
    pattern2 = np.sin(sites * j * np.pi / (n + 1)) ** 2
    log_r = np.log(asymmetry_base(p.delta))
    # r^(2n) sin^2 evaluated with the max exponent factored out
    expo = 2.0 * sites * log_r
    right_right = np.exp(expo - expo.max()) * pattern2
    right_right = right_right / right_right.sum()
    biorth = pattern2 / pattern2.sum()
    return right_right, biorth
