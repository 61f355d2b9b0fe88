import numpy as np
import pytest

from vrsim import (HilbertSpace, ModelParams, build_dressed,
                   build_hamiltonian, diagonalize, find_min_splitting)
from vrsim.model import ONE_PHOTON, TWO_PHOTON


@pytest.fixture(scope="session")
def space():
    return HilbertSpace(10, 6)


@pytest.fixture(scope="session")
def fig2_params():
    """Two-photon reference point: omega_m=1.05, kappa=lambda=0.05."""
    return ModelParams(omega_m=1.05, omega_q=1.0, kappa=0.05, lam=0.05,
                       coupling_kind=TWO_PHOTON)


@pytest.fixture(scope="session")
def fig7_params():
    """One-photon reference point: omega_m=1.2, kappa=lambda=0.08."""
    return ModelParams(omega_m=1.2, omega_q=0.2, kappa=0.08, lam=0.08,
                       coupling_kind=ONE_PHOTON)


@pytest.fixture(scope="session")
def two_photon_splitting(fig2_params, space):
    return find_min_splitting(fig2_params, space, (1.0, 1.1))


@pytest.fixture(scope="session")
def one_photon_splitting(fig7_params, space):
    return find_min_splitting(fig7_params, space, (0.15, 0.26))


@pytest.fixture(scope="session")
def two_photon_dressed(fig2_params, space, two_photon_splitting):
    """Full (untruncated) dressed set at the two-photon anticrossing."""
    params = fig2_params.with_omega_q(two_photon_splitting.omega_q_min)
    eigen = diagonalize(build_hamiltonian(params, space), space, params)
    return build_dressed(eigen, space)


@pytest.fixture(scope="session")
def one_photon_dressed(fig7_params, space, one_photon_splitting):
    params = fig7_params.with_omega_q(one_photon_splitting.omega_q_min)
    eigen = diagonalize(build_hamiltonian(params, space), space, params)
    return build_dressed(eigen, space)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
