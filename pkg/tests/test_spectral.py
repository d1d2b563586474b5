import io

import numpy as np
import pytest

from lindlat.models import LatticeSpec
from lindlat.liouvillian import build_hn_lme, LiouvillianModel
from lindlat.spectral import (
    eig_full, steady_state, liouvillian_gap, gap_scaling_fit,
    spectral_displacement, write_spectral_csv,
)


def test_eig_full_ordering_and_gap():
    m = np.diag([0.0, -0.5 + 1j, -0.5 - 1j, -2.0])
    result = eig_full(m)
    assert result.eigenvalues[0] == pytest.approx(0.0)
    assert np.all(np.diff(result.eigenvalues.real) <= 1e-12)
    assert result.gap == pytest.approx(0.5)
    assert result.steady_indices == [0]


def test_eig_full_eigenvalues_only():
    result = eig_full(np.diag([0.0, -1.0]), eigenvalues_only=True)
    assert result.right_eigenmatrices is None
    assert result.gap == pytest.approx(1.0)


def test_eig_full_dim_cap():
    with pytest.raises(ValueError):
        eig_full(np.eye(10), dim_cap=5)


def test_eig_full_steady_candidate_normalized():
    model = build_hn_lme(LatticeSpec(3, "open"), 0.4)
    result = eig_full(model.matrix)
    (k,) = result.steady_indices
    rho = result.right_eigenmatrices[k]
    assert np.trace(rho) == pytest.approx(1.0, abs=1e-9)
    # non-steady modes carry unit Frobenius norm
    j = 1 if k != 1 else 2
    assert np.linalg.norm(result.right_eigenmatrices[j]) == pytest.approx(1.0, abs=1e-9)


def test_liouvillian_gap_matches_eig_full():
    model = build_hn_lme(LatticeSpec(4, "open"), 0.6)
    result = eig_full(model.matrix)
    assert liouvillian_gap(result) == pytest.approx(result.gap)


def test_steady_state_unique_kernel():
    model = build_hn_lme(LatticeSpec(5, "open"), 0.5)
    result = steady_state(model.matrix)
    assert result.multiplicity == 1
    rho = result.state
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(rho, rho.conj().T, atol=1e-12)
    assert result.residual < 1e-10
    assert np.linalg.norm(model.matrix @ rho.reshape(-1)) < 1e-8


def test_steady_state_rejects_lossy_generator():
    model = build_hn_lme(LatticeSpec(4, "open"), 0.5)
    lossy = LiouvillianModel(model.hamiltonian, model.jumps, c=0.4)
    with pytest.raises(ValueError):
        steady_state(lossy.matrix)


def test_steady_state_degenerate_periodic():
    # cyclic collective model: kernel is N-fold degenerate and the identity
    # projection picks the maximally mixed state
    model = build_hn_lme(LatticeSpec(5, "periodic"), 0.3)
    result = steady_state(model.matrix)
    assert result.multiplicity == 5
    assert len(result.basis) == 5
    assert np.abs(result.state - np.eye(5) / 5).max() < 1e-10
    # basis orthonormality in the Hilbert-Schmidt sense
    gram = np.array([
        [np.vdot(a.reshape(-1), b.reshape(-1)) for b in result.basis]
        for a in result.basis
    ])
    assert np.allclose(gram, np.eye(5), atol=1e-10)


def test_gap_scaling_fit_recovers_exponent():
    samples = [(n, 3.0 * n**-2.0) for n in (11, 21, 31, 41)]
    fit = gap_scaling_fit(samples)
    assert fit.exponent == pytest.approx(0.5, abs=1e-10)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)


def test_gap_scaling_fit_validation():
    with pytest.raises(ValueError):
        gap_scaling_fit([(11, 1.0), (21, 0.5)])
    with pytest.raises(ValueError):
        gap_scaling_fit([(11, 1.0), (21, 0.5), (31, 0.0)])


def test_spectral_displacement_known_shift():
    a = np.array([0.0, 1.0], dtype=complex)
    b = np.array([0.0, 1.0 + 1e-3], dtype=complex)
    assert spectral_displacement(a, b) == pytest.approx(1e-3)
    assert spectral_displacement(b, a) == pytest.approx(1e-3)


def test_spectral_displacement_accepts_results():
    r0 = eig_full(np.diag([0.0, -1.0]), eigenvalues_only=True)
    r1 = eig_full(np.diag([0.0, -1.25]), eigenvalues_only=True)
    assert spectral_displacement(r0, r1) == pytest.approx(0.25)


def test_displacement_bounded_for_normal_matrix(rng):
    # eigenvalues of a Hermitian matrix move at most ||V||_2 under a
    # Hermitian perturbation; the displacement must respect that bound
    h = rng.normal(size=(8, 8))
    h = (h + h.T) / 2
    v = rng.normal(size=(8, 8)) * 1e-3
    v = (v + v.T) / 2
    disp = spectral_displacement(np.linalg.eigvals(h), np.linalg.eigvals(h + v))
    assert disp <= np.linalg.norm(v, 2) + 1e-12


def test_write_spectral_csv():
    model = build_hn_lme(LatticeSpec(3, "open"), 0.4)
    result = eig_full(model.matrix)
    buf = io.StringIO()
    write_spectral_csv(result, buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0].split(",") == ["index", "re_mu", "im_mu", "trace_re", "trace_im", "is_steady"]
    assert len(lines) == 1 + 9
    only = eig_full(model.matrix, eigenvalues_only=True)
    with pytest.raises(ValueError):
        write_spectral_csv(only, io.StringIO())
