"""Lattice Hamiltonians, analytic reference spectra, and model parameters.

The central model is a one-dimensional tight-binding chain of N sites with
asymmetric hopping: amplitude (1 - delta) for hops toward smaller site index
(superdiagonal) and (1 + delta) toward larger (subdiagonal).  Everything is
dimensionless, energies in units of the symmetric tunneling rate.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

__all__ = [
    "LatticeSpec", "HNParams", "SSHParams", "DisorderSpec", "SpinModelParams",
    "build_hn_hamiltonian", "split_real_imag", "build_euclidean",
    "analytic_spectrum", "hn_spectrum_numeric", "analytic_right_eigenvector",
    "biorthogonal_zero_modes", "build_perturbation", "build_disorder",
    "build_ssh_hamiltonian", "build_spin_bistability", "asymmetry_base",
]


@dataclass(frozen=True)
class LatticeSpec:
    """A 1D chain: number of sites and boundary condition ('open'|'periodic')."""

    n_sites: int
    boundary: str = "open"

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError(f"need at least 2 sites, got {self.n_sites}")
        if self.boundary not in ("open", "periodic"):
            raise ValueError(f"boundary must be 'open' or 'periodic', got {self.boundary!r}")

    @property
    def is_open(self):
        return self.boundary == "open"


@dataclass(frozen=True)
class HNParams:
    """Hopping asymmetry delta in [0, 1); delta = 1 makes the eigenvector base singular."""

    delta: float

    def __post_init__(self):
        if not 0.0 <= self.delta < 1.0:
            raise ValueError(f"delta must lie in [0, 1), got {self.delta}")


@dataclass(frozen=True)
class SSHParams:
    """Dimerization chi in (-1, 1): alternating hops (1 - chi), (1 + chi)."""

    chi: float

    def __post_init__(self):
        if not -1.0 < self.chi < 1.0:
            raise ValueError(f"chi must lie in (-1, 1), got {self.chi}")


@dataclass(frozen=True)
class DisorderSpec:
    """Uniform onsite disorder kappa_n in [-W, W], reproducible per realization.

    Draws come from a counter-based stream keyed on
    (seed, realization_index, site index), so ensembles are order-independent
    and safe to fan out across workers.
    """

    strength: float
    seed: int
    realization_index: int = 0

    def __post_init__(self):
        if self.strength < 0:
            raise ValueError(f"disorder strength must be >= 0, got {self.strength}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")
        if not 0 <= self.realization_index < 2**32:
            raise ValueError("realization_index must fit in 32 bits")


@dataclass(frozen=True)
class SpinModelParams:
    """Driven-damped collective spin: total spin S and decay rate gamma >= 0."""

    total_spin: float
    gamma: float

    def __post_init__(self):
        two_s = round(2 * self.total_spin)
        if two_s <= 0 or abs(2 * self.total_spin - two_s) > 1e-12:
            raise ValueError(f"total_spin must be a positive (half-)integer, got {self.total_spin}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")

    @property
    def dim(self):
        return round(2 * self.total_spin) + 1


def build_hn_hamiltonian(lat, p):
    """Asymmetric-hopping chain: superdiagonal (1 - delta), subdiagonal (1 + delta).

    Periodic boundaries close the cycle with the same orientation, so the
    matrix is a circulant: the hop N -> 1 continues the "toward larger index"
    direction, H[0, N-1] = 1 + delta and H[N-1, 0] = 1 - delta.  (The +=
    keeps the degenerate two-site ring symmetric, where both bonds coincide.)
    """
    n = lat.n_sites
    h = np.zeros((n, n), dtype=complex)
    idx = np.arange(n - 1)
    h[idx, idx + 1] = 1.0 - p.delta
    h[idx + 1, idx] = 1.0 + p.delta
    if not lat.is_open:
        h[0, n - 1] += 1.0 + p.delta
        h[n - 1, 0] += 1.0 - p.delta
    return h


def split_real_imag(lat):
    """Hermitian pair (H_R, H_I) with build_hn_hamiltonian == H_R + i*delta*H_I.

    H_R is the symmetric hopping part; H_I = i * sum_n (|n><n+1| - |n+1><n|).
    For open boundaries their commutator vanishes except on the first and last
    diagonal elements.
    """
    n = lat.n_sites
    h_r = np.zeros((n, n), dtype=complex)
    h_i = np.zeros((n, n), dtype=complex)
    idx = np.arange(n - 1)
    h_r[idx, idx + 1] = 1.0
    h_r[idx + 1, idx] = 1.0
    h_i[idx, idx + 1] = 1.0j
    h_i[idx + 1, idx] = -1.0j
    if not lat.is_open:
        h_r[0, n - 1] += 1.0
        h_r[n - 1, 0] += 1.0
        h_i[0, n - 1] += -1.0j
        h_i[n - 1, 0] += 1.0j
    return h_r, h_i


def build_euclidean(lat):
    """Shift/position operators (E, E0, Ex, Ep) of the 1D Euclidean algebra.

    E|n> = |n-1> (E|1> = 0), E0|n> = n|n>, Ex = E + E^dag, Ep = i(E - E^dag).
    On the infinite line these satisfy [E, E0] = E, [E^dag, E0] = -E^dag and
    [E, E^dag] = 0; on the finite open chain the last relation picks up the
    boundary remnant diag(1, 0, ..., 0, -1).
    """
    if not lat.is_open:
        raise ValueError("Euclidean-algebra operators are defined for open boundaries")
    n = lat.n_sites
    e = np.zeros((n, n), dtype=complex)
    idx = np.arange(n - 1)
    e[idx, idx + 1] = 1.0
    e0 = np.diag(np.arange(1, n + 1).astype(complex))
    ex = e + e.conj().T
    ep = 1.0j * (e - e.conj().T)
    return e, e0, ex, ep


def analytic_spectrum(lat, p):
    """Closed-form eigenvalues of the asymmetric-hopping chain.

    Open boundary: nu_j = 2*sqrt(1 - delta^2)*cos(j*pi/(N + 1)), purely real.
    Periodic: nu_j = 2*[cos(2*pi*j/N) - i*delta*sin(2*pi*j/N)], an ellipse in
    the complex plane.  j runs 1..N.
    """
    n = lat.n_sites
    j = np.arange(1, n + 1)
    if lat.is_open:
        return (2.0 * np.sqrt(1.0 - p.delta**2) * np.cos(j * np.pi / (n + 1))).astype(complex)
    theta = 2.0 * np.pi * j / n
    return 2.0 * (np.cos(theta) - 1.0j * p.delta * np.sin(theta))


def hn_spectrum_numeric(lat, p):
    """Eigenvalues of the asymmetric chain computed by a stable route.

    The open chain is exactly similar to a symmetric tridiagonal matrix with
    uniform couplings sqrt(1 - delta^2) (conjugate by diag(r^-n)), so its
    spectrum is obtained from a symmetric tridiagonal solver.  This matters:
    dense nonsymmetric QR loses the real spectrum once exp(alpha*N) reaches
    1/eps, because the eigenvector condition numbers grow at that rate and
    scatter the computed eigenvalues onto an ellipse (already ~1e-1 error at
    N=61, delta=0.75).  The periodic chain is a circulant, hence normal, and
    plain dense eigenvalues are reliable there.
    """
    n = lat.n_sites
    if lat.is_open:
        off = np.full(n - 1, np.sqrt(1.0 - p.delta**2))
        return scipy.linalg.eigvalsh_tridiagonal(np.zeros(n), off).astype(complex)
    return np.linalg.eigvals(build_hn_hamiltonian(lat, p))


def asymmetry_base(delta):
    """Radial base r(delta) = sqrt((1 + delta)/(1 - delta)) of the open-chain eigenvectors.

    This is the square-root form fixed by the imaginary-gauge similarity
    transform; it is cross-checked against a dense eigensolver in the tests.
    ln(r) is the inverse localization length of the right eigenvectors.
    """
    return np.sqrt((1.0 + delta) / (1.0 - delta))


def analytic_right_eigenvector(lat, p, j):
    """Unnormalized right eigenvector of the open chain: components r^n * sin(n*j*pi/(N+1)).

    The amplitudes grow toward the right edge for delta > 0 (skin effect);
    the matching left eigenvector is the same formula with delta -> -delta.
    """
    if not lat.is_open:
        raise ValueError("analytic eigenvectors are for open boundaries")
    n = lat.n_sites
    if not 1 <= j <= n:
        raise ValueError(f"mode index j must lie in 1..{n}, got {j}")
    sites = np.arange(1, n + 1)
    r = asymmetry_base(p.delta)
    # evaluate r^n in log space; exponents stay modest for delta < 1
    return np.exp(sites * np.log(r)) * np.sin(sites * j * np.pi / (n + 1)) + 0.0j


def biorthogonal_zero_modes(lat, p):
    """Normalized zero-eigenvalue pair (phi_L, phi_R) of the odd-N open chain.

    phi_R is the j = (N+1)/2 right eigenvector scaled to unit norm; phi_L is
    the corresponding left eigenvector (delta -> -delta) scaled so that
    <phi_L|phi_R> = 1.  Requires odd N, where the analytic spectrum contains
    an exact zero.
    """
    n = lat.n_sites
    if n % 2 == 0:
        raise ValueError("the open chain has a zero mode only for odd N")
    j_zero = (n + 1) // 2
    sites = np.arange(1, n + 1)
    pattern = np.sin(sites * j_zero * np.pi / (n + 1))
    log_r = np.log(asymmetry_base(p.delta))
    # scale both by r^(-N) to keep the largest right-mode entry at O(1)
    phi_r = np.exp((sites - n) * log_r) * pattern + 0.0j
    phi_l = np.exp(-sites * log_r) * pattern + 0.0j
    phi_r = phi_r / np.linalg.norm(phi_r)
    phi_l = phi_l / np.vdot(phi_l, phi_r)
    return phi_l, phi_r


def build_perturbation(lat, epsilon):
    """Non-local corner coupling epsilon * (|1><N| + |N><1|)."""
    if not lat.is_open:
        raise ValueError("the corner perturbation is defined for open boundaries")
    n = lat.n_sites
    v = np.zeros((n, n), dtype=complex)
    v[0, n - 1] = epsilon
    v[n - 1, 0] = epsilon
    return v


def _site_draw(seed, realization, site):
    # Philox key = (seed, realization << 32 | site): one independent
    # counter-based stream per site, so draw order never matters.
    key = np.array([seed, (realization << 32) | site], dtype=np.uint64)
    gen = np.random.Generator(np.random.Philox(key=key))
    return gen.uniform(-1.0, 1.0)


def build_disorder(lat, d):
    """Diagonal of i.i.d. uniform onsite offsets kappa_n in [-W, W].

    Identical (seed, realization_index) always reproduces the same draws,
    independent of evaluation order or worker count.
    """
    n = lat.n_sites
    if d.strength == 0.0:
        return np.zeros((n, n), dtype=complex)
    kappa = np.array(
        [_site_draw(d.seed, d.realization_index, site) for site in range(n)]
    )
    return np.diag(d.strength * kappa).astype(complex)


def build_ssh_hamiltonian(lat, p):
    """Dimerized symmetric chain: hops alternate (1 - chi), (1 + chi), ...

    chi = 0 reduces to the symmetric tight-binding chain (H_R).
    """
    n = lat.n_sites
    h = np.zeros((n, n), dtype=complex)
    for bond in range(n - 1):
        amp = 1.0 - p.chi if bond % 2 == 0 else 1.0 + p.chi
        h[bond, bond + 1] = amp
        h[bond + 1, bond] = amp
    if not lat.is_open:
        amp = 1.0 - p.chi if (n - 1) % 2 == 0 else 1.0 + p.chi
        h[0, n - 1] = amp
        h[n - 1, 0] = amp
    return h


def build_spin_bistability(p):
    """Driven-damped spin: H = S_x, jump L = S_minus at rate gamma / S.

    Basis ordering is m = S, S-1, ..., -S, dimension 2S + 1.  The steady-state
    magnetization <S_z>/S stays near zero below the mean-field critical point
    gamma = 1/2 and grows in magnitude above it.
    """
    s = p.total_spin
    dim = p.dim
    m = s - np.arange(dim)  # m values down the diagonal
    # S-|m> = sqrt(S(S+1) - m(m-1)) |m-1>: one subdiagonal
    s_minus = np.zeros((dim, dim), dtype=complex)
    amp = np.sqrt(s * (s + 1) - m[:-1] * (m[:-1] - 1))
    s_minus[np.arange(1, dim), np.arange(dim - 1)] = amp
    s_x = 0.5 * (s_minus + s_minus.conj().T)
    rate = p.gamma / s
    return s_x, s_minus, rate
