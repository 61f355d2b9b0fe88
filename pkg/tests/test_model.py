import numpy as np
import pytest
from scipy.integrate import quad

from vrsim.fockspace import BareLabel, HilbertSpace, basis_index, basis_state
from vrsim.model import (ONE_PHOTON, TWO_PHOTON, DriveParams, ModelParams,
                         analytic_optomech_energy, bare_energy, build_H0,
                         build_V, build_hamiltonian, displaced_eigvec,
                         displaced_tail_weight, drive_envelope)


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(omega_m=-1.0, omega_q=1.0, kappa=0.05, lam=0.05)
    with pytest.raises(ValueError):
        ModelParams(omega_m=1.0, omega_q=1.0, kappa=-0.1, lam=0.05)
    with pytest.raises(ValueError):
        ModelParams(omega_m=1.0, omega_q=1.0, kappa=0.1, lam=0.05,
                    coupling_kind="three_photon")


def test_beta_is_derived(fig2_params):
    assert fig2_params.beta == pytest.approx(0.05 / 1.05)


def test_H0_uncoupled_spectrum(space):
    params = ModelParams(omega_m=1.3, omega_q=0.7, kappa=0.0, lam=0.0)
    w = np.linalg.eigvalsh(build_H0(params, space))
    expected = sorted(n + 1.3 * k + (0.5 if q else -0.5) * 0.7
                      for n in range(space.dim_photon)
                      for k in range(space.dim_phonon)
                      for q in (0, 1))
    assert np.abs(w - np.array(expected)).max() < 1e-10


def test_H0_diagonal_element(fig2_params, space):
    H0 = build_H0(fig2_params, space)
    i = basis_index(BareLabel(0, 1, "g"), space)
    assert H0[i, i].real == pytest.approx(1.05 - fig2_params.omega_q / 2)


def test_H0_lowest_eigenvalue_is_vacuum(fig2_params, space):
    w = np.linalg.eigvalsh(build_H0(fig2_params, space))
    assert w[0] == pytest.approx(-fig2_params.omega_q / 2, abs=1e-12)


def test_V_pair_creation_element(fig2_params, space):
    V = build_V(fig2_params, space)
    bra = basis_state(BareLabel(2, 0, "g"), space)
    ket = basis_state(BareLabel(0, 1, "g"), space)
    # mirror term: (kappa/2) <2|a†a†|0> <0|(b+b†)|1> = sqrt(2) kappa / 2
    assert (bra.conj() @ V @ ket).real == pytest.approx(
        np.sqrt(2) * 0.05 / 2, abs=1e-14)


def test_V_two_photon_atom_element(fig2_params, space):
    V = build_V(fig2_params, space)
    bra = basis_state(BareLabel(2, 1, "e"), space)
    ket = basis_state(BareLabel(0, 1, "g"), space)
    assert (bra.conj() @ V @ ket).real == pytest.approx(
        np.sqrt(2) * 0.05, abs=1e-14)


def test_V_vanishes_without_couplings(space):
    params = ModelParams(omega_m=1.05, omega_q=1.0, kappa=0.0, lam=0.0)
    assert np.abs(build_V(params, space)).max() == 0.0


def test_hamiltonian_hermitian_both_kinds(fig2_params, fig7_params, space):
    for params in (fig2_params, fig7_params):
        H = build_hamiltonian(params, space)
        assert np.abs(H - H.conj().T).max() < 1e-12


def test_one_photon_coupling_differs(fig7_params, space):
    V = build_V(fig7_params, space)
    bra = basis_state(BareLabel(1, 0, "e"), space)
    ket = basis_state(BareLabel(0, 0, "g"), space)
    assert (bra.conj() @ V @ ket).real == pytest.approx(0.08, abs=1e-14)


def test_two_photon_parity_conservation(fig2_params, space):
    """Photon-pair couplings never connect even and odd photon sectors."""
    H = build_hamiltonian(fig2_params, space)
    parity = np.array([basis_index_parity(i, space)
                       for i in range(space.dim_total)])
    odd_even = np.abs(H[np.ix_(parity == 0, parity == 1)])
    assert odd_even.max() == 0.0


def basis_index_parity(i, space):
    from vrsim.fockspace import label_from_index
    return label_from_index(i, space).n % 2


def test_analytic_energy_values(fig2_params):
    assert analytic_optomech_energy(0, 3, fig2_params) == pytest.approx(3 * 1.05)
    assert analytic_optomech_energy(2, 0, fig2_params) == pytest.approx(
        2 - 4 * (0.05 / 1.05) ** 2 * 1.05)
    assert analytic_optomech_energy(2, 0, fig2_params) == pytest.approx(
        1.990476, abs=5e-7)
    free = ModelParams(omega_m=1.05, omega_q=1.0, kappa=0.0, lam=0.05)
    assert analytic_optomech_energy(1, 1, free) == pytest.approx(1 + 1.05)


def test_displaced_eigvec_reduces_to_bare_at_zero_photons(fig2_params, space):
    v = displaced_eigvec(0, 2, "e", fig2_params, space)
    assert np.allclose(v, basis_state(BareLabel(0, 2, "e"), space))


def test_displaced_eigvec_is_H0_eigenvector(fig2_params, space):
    H0 = build_H0(fig2_params, space)
    v = displaced_eigvec(1, 1, "g", fig2_params, space)
    e = analytic_optomech_energy(1, 1, fig2_params) - fig2_params.omega_q / 2
    assert np.linalg.norm(H0 @ v - e * v) < 1e-8


def test_displaced_orthonormality(fig2_params, space):
    va = displaced_eigvec(1, 0, "g", fig2_params, space)
    vb = displaced_eigvec(1, 1, "g", fig2_params, space)
    assert abs(np.vdot(va, vb)) < 1e-10
    assert np.linalg.norm(va) == pytest.approx(1.0, abs=1e-12)


def test_bare_energy_includes_atom(fig2_params):
    e = bare_energy(BareLabel(0, 1, "e"), fig2_params)
    assert e == pytest.approx(1.05 + fig2_params.omega_q / 2)


def test_spectrum_oracle_away_from_edges(fig2_params, space):
    """Numeric mirror-displaced block matches the closed form to 1e-6
    wherever the displaced state clears the phonon cutoff."""
    from vrsim.fockspace import annihilation
    a = annihilation(space.dim_photon)
    na = a.conj().T @ a
    b = annihilation(space.dim_phonon)
    Hom = np.kron(na, np.eye(space.dim_phonon)) \
        + 1.05 * np.kron(np.eye(space.dim_photon), b.conj().T @ b) \
        + 0.05 * np.kron(na, b + b.conj().T)
    w, vecs = np.linalg.eigh(Hom)
    checked = 0
    for n in range(space.dim_photon):
        for k in range(space.dim_phonon):
            if displaced_tail_weight(n, k, fig2_params, space) >= 1e-8:
                continue
            ph = np.zeros(space.dim_photon)
            ph[n] = 1
            from vrsim.model import displaced_phonon_vector
            v = np.kron(ph, displaced_phonon_vector(n, k, fig2_params, space))
            idx = np.argmax(np.abs(vecs.conj().T @ v) ** 2)
            assert abs(w[idx] - analytic_optomech_energy(n, k, fig2_params)) \
                < 1e-6, (n, k)
            checked += 1
    assert checked >= 10


def test_spectrum_oracle_literal_range_small_displacement(space):
    """At weak mirror coupling the full index range clears the tolerance."""
    params = ModelParams(omega_m=1.05, omega_q=1.0, kappa=0.002, lam=0.0)
    from vrsim.fockspace import annihilation
    from vrsim.model import displaced_phonon_vector
    a = annihilation(space.dim_photon)
    na = a.conj().T @ a
    b = annihilation(space.dim_phonon)
    Hom = np.kron(na, np.eye(space.dim_phonon)) \
        + 1.05 * np.kron(np.eye(space.dim_photon), b.conj().T @ b) \
        + 0.002 * np.kron(na, b + b.conj().T)
    w, vecs = np.linalg.eigh(Hom)
    for n in range(space.n_photon_max):
        for k in range(space.n_phonon_max - 1):
            ph = np.zeros(space.dim_photon)
            ph[n] = 1
            v = np.kron(ph, displaced_phonon_vector(n, k, params, space))
            idx = np.argmax(np.abs(vecs.conj().T @ v) ** 2)
            assert abs(w[idx] - analytic_optomech_energy(n, k, params)) < 1e-6


def test_drive_envelope_peak():
    drive = DriveParams(amplitude=np.pi, omega_d=1.05, sigma_pulse=2.0, t0=30.0)
    assert drive_envelope(30.0, drive) == pytest.approx(
        np.pi / (2.0 * np.sqrt(2 * np.pi)))


def test_drive_envelope_area():
    drive = DriveParams(amplitude=0.7, omega_d=1.0, sigma_pulse=3.0, t0=40.0)
    area, _ = quad(drive_envelope, -np.inf, np.inf, args=(drive,))
    assert area == pytest.approx(0.7, abs=1e-6)


def test_drive_envelope_tails():
    drive = DriveParams(amplitude=1.0, omega_d=1.0, sigma_pulse=5.0, t0=0.0)
    peak = drive_envelope(0.0, drive)
    assert drive_envelope(30.0, drive) < 1e-7 * peak


def test_drive_params_validation():
    with pytest.raises(ValueError):
        DriveParams(amplitude=1.0, omega_d=1.0, sigma_pulse=0.0, t0=0.0)
