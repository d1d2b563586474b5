import numpy as np
import pytest

from lindlat.models import (
    LatticeSpec, HNParams, SSHParams, DisorderSpec, SpinModelParams,
    build_hn_hamiltonian, split_real_imag, build_euclidean,
    analytic_spectrum, hn_spectrum_numeric, asymmetry_base,
    analytic_right_eigenvector, biorthogonal_zero_modes,
    build_perturbation, build_disorder, build_ssh_hamiltonian,
    build_spin_bistability,
)


def test_lattice_spec_validation():
    with pytest.raises(ValueError):
        LatticeSpec(1, "open")
    with pytest.raises(ValueError):
        LatticeSpec(5, "twisted")
    assert LatticeSpec(5, "open").is_open
    assert not LatticeSpec(5, "periodic").is_open


def test_hn_params_range():
    with pytest.raises(ValueError):
        HNParams(1.0)
    with pytest.raises(ValueError):
        HNParams(-0.1)
    HNParams(0.0)
    HNParams(0.999)


def test_hn_hamiltonian_entries():
    h = build_hn_hamiltonian(LatticeSpec(4, "open"), HNParams(0.3))
    expect = np.zeros((4, 4))
    for n in range(3):
        expect[n, n + 1] = 0.7   # hop toward smaller index is weakened
        expect[n + 1, n] = 1.3
    assert np.array_equal(h, expect.astype(complex))


def test_hn_hamiltonian_periodic_wrap():
    h = build_hn_hamiltonian(LatticeSpec(4, "periodic"), HNParams(0.3))
    assert h[3, 0] == pytest.approx(0.7)
    assert h[0, 3] == pytest.approx(1.3)


def test_split_real_imag_reassembles():
    lat = LatticeSpec(6, "open")
    h_r, h_i = split_real_imag(lat)
    assert np.allclose(h_r, h_r.conj().T)
    assert np.allclose(h_i, h_i.conj().T)
    for delta in (0.0, 0.25, 0.8):
        h = build_hn_hamiltonian(lat, HNParams(delta))
        assert np.allclose(h_r + 1j * delta * h_i, h, atol=1e-14)


def test_euclidean_algebra():
    e, e0, ex, ep = build_euclidean(LatticeSpec(5, "open"))
    # shift ladder: [E, E0] = E, and the open-chain defect sits at the ends
    assert np.allclose(e @ e0 - e0 @ e, e, atol=1e-14)
    comm = e @ e.conj().T - e.conj().T @ e
    expect = np.diag([1.0, 0, 0, 0, -1.0]).astype(complex)
    assert np.allclose(comm, expect, atol=1e-14)
    assert np.allclose(ex, e + e.conj().T, atol=1e-14)
    assert np.allclose(ep, 1j * (e - e.conj().T), atol=1e-14)
    # Ex + i*delta*Ep reassembles the asymmetric chain
    delta = 0.3
    h = build_hn_hamiltonian(LatticeSpec(5, "open"), HNParams(delta))
    assert np.allclose(ex + 1j * delta * ep, h, atol=1e-14)


def test_analytic_spectrum_small_dense():
    lat = LatticeSpec(9, "open")
    p = HNParams(0.4)
    mu = np.sort_complex(np.linalg.eigvals(build_hn_hamiltonian(lat, p)))
    nu = np.sort_complex(analytic_spectrum(lat, p))
    assert np.allclose(mu, nu, atol=1e-10)


def test_analytic_spectrum_periodic_ellipse():
    lat = LatticeSpec(8, "periodic")
    p = HNParams(0.5)
    mu = np.linalg.eigvals(build_hn_hamiltonian(lat, p))
    nu = analytic_spectrum(lat, p)
    # match as multisets (circulant eigenvalue order is arbitrary)
    mu = sorted(mu, key=lambda z: (round(z.real, 9), round(z.imag, 9)))
    nu = sorted(nu, key=lambda z: (round(z.real, 9), round(z.imag, 9)))
    assert np.allclose(mu, nu, atol=1e-10)


def test_numeric_spectrum_stable_where_dense_qr_fails():
    # at N=61, delta=0.75 dense nonsymmetric QR scatters eigenvalues by
    # ~1e-1; the similarity route must still match the closed form
    lat = LatticeSpec(61, "open")
    p = HNParams(0.75)
    nu = np.sort(hn_spectrum_numeric(lat, p).real)
    ref = np.sort(analytic_spectrum(lat, p).real)
    assert np.abs(nu - ref).max() < 1e-9
    dense = np.sort(np.linalg.eigvals(build_hn_hamiltonian(lat, p)).real)
    assert np.abs(dense - ref).max() > 1e-3  # the naive route really is lost


def test_similarity_to_symmetric_tridiagonal():
    # conjugating by diag(r^-n) turns the chain into the symmetric one with
    # couplings sqrt(1 - delta^2); checked entrywise, which is exact
    lat = LatticeSpec(12, "open")
    delta = 0.6
    h = build_hn_hamiltonian(lat, HNParams(delta))
    r = asymmetry_base(delta)
    s = np.diag(r ** -np.arange(1, 13))
    sym = s @ h @ np.diag(r ** np.arange(1, 13))
    t = np.zeros((12, 12), dtype=complex)
    coupling = np.sqrt(1 - delta**2)
    for n in range(11):
        t[n, n + 1] = t[n + 1, n] = coupling
    assert np.allclose(sym, t, atol=1e-12)


def test_analytic_right_eigenvector_is_eigenvector():
    lat = LatticeSpec(9, "open")
    p = HNParams(0.4)
    h = build_hn_hamiltonian(lat, p)
    nu = analytic_spectrum(lat, p)
    for j in (1, 5, 9):
        phi = analytic_right_eigenvector(lat, p, j)
        assert np.allclose(h @ phi, nu[j - 1] * phi, atol=1e-9 * np.abs(phi).max())


def test_analytic_right_eigenvector_validation():
    with pytest.raises(ValueError):
        analytic_right_eigenvector(LatticeSpec(4, "periodic"), HNParams(0.1), 1)
    with pytest.raises(ValueError):
        analytic_right_eigenvector(LatticeSpec(4, "open"), HNParams(0.1), 5)


def test_biorthogonal_zero_modes():
    lat = LatticeSpec(11, "open")
    p = HNParams(0.35)
    phi_l, phi_r = biorthogonal_zero_modes(lat, p)
    h = build_hn_hamiltonian(lat, p)
    assert np.linalg.norm(h @ phi_r) < 1e-10
    assert np.linalg.norm(phi_l.conj() @ h) < 1e-10
    assert abs(np.vdot(phi_l, phi_r) - 1.0) < 1e-12
    assert abs(np.linalg.norm(phi_r) - 1.0) < 1e-12
    with pytest.raises(ValueError):
        biorthogonal_zero_modes(LatticeSpec(10, "open"), p)


def test_perturbation_couples_the_ends():
    v = build_perturbation(LatticeSpec(5, "open"), 1e-3)
    expect = np.zeros((5, 5), dtype=complex)
    expect[0, 4] = expect[4, 0] = 1e-3
    assert np.array_equal(v, expect)


def test_disorder_determinism_and_bounds():
    lat = LatticeSpec(9, "open")
    d = DisorderSpec(strength=2e-3, seed=11, realization_index=4)
    v1 = build_disorder(lat, d)
    v2 = build_disorder(lat, d)
    assert np.array_equal(v1, v2)
    assert np.allclose(v1, np.diag(np.diag(v1)))
    assert np.abs(np.diag(v1)).max() <= 2e-3
    v3 = build_disorder(lat, DisorderSpec(strength=2e-3, seed=11, realization_index=5))
    assert not np.array_equal(v1, v3)


def test_disorder_counter_prefix_property():
    # per-site counter streams: a longer chain reproduces the shorter one's
    # draws on the shared sites, so ensembles are size-consistent
    d = DisorderSpec(strength=1e-3, seed=3, realization_index=7)
    short = np.diag(build_disorder(LatticeSpec(5, "open"), d))
    long = np.diag(build_disorder(LatticeSpec(9, "open"), d))
    assert np.array_equal(short, long[:5])


def test_ssh_alternating_bonds():
    h = build_ssh_hamiltonian(LatticeSpec(5, "open"), SSHParams(0.3))
    bonds = [h[n, n + 1].real for n in range(4)]
    assert bonds == pytest.approx([0.7, 1.3, 0.7, 1.3])
    assert np.allclose(h, h.conj().T)
    h0 = build_ssh_hamiltonian(LatticeSpec(5, "open"), SSHParams(0.0))
    assert np.allclose(h0, build_hn_hamiltonian(LatticeSpec(5, "open"), HNParams(0.0)))


def test_ssh_params_range():
    with pytest.raises(ValueError):
        SSHParams(1.0)
    SSHParams(-0.9)


def test_spin_model_small_s():
    h, lower, rate = build_spin_bistability(SpinModelParams(1.0, 0.4))
    # S = 1 ladder in the m = 1, 0, -1 basis
    s2 = np.sqrt(2.0)
    expect_lower = np.zeros((3, 3), dtype=complex)
    expect_lower[1, 0] = s2
    expect_lower[2, 1] = s2
    assert np.allclose(lower, expect_lower)
    assert np.allclose(h, (expect_lower + expect_lower.conj().T) / 2)
    assert rate == pytest.approx(0.4)


def test_spin_casimir():
    p = SpinModelParams(3.5, 0.1)
    h, lower, _ = build_spin_bistability(p)
    raise_ = lower.conj().T
    sx = (raise_ + lower) / 2
    sy = (raise_ - lower) / (2j)
    m = p.total_spin - np.arange(p.dim)
    sz = np.diag(m.astype(complex))
    casimir = sx @ sx + sy @ sy + sz @ sz
    assert np.allclose(casimir, p.total_spin * (p.total_spin + 1) * np.eye(p.dim), atol=1e-12)
    assert np.allclose(h, sx)


def test_spin_params_validation():
    with pytest.raises(ValueError):
        SpinModelParams(1.2, 0.1)
    assert SpinModelParams(2.5, 0.3).dim == 6
