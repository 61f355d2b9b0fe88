"""Hybrid-system Hamiltonians and the analytic optomechanical spectrum.

Model: a two-level atom in a cavity whose end mirror is a mechanical
oscillator. The uncoupled part is

    H0 = (omega_q/2) sigma_z + omega_c a†a + omega_m b†b + kappa a†a (b + b†),

and the interaction adds the moving-mirror photon-pair term plus the
atom-field coupling, which is either two-photon, lambda (a^2 + a†^2) sigma_x,
or one-photon, lambda (a + a†) sigma_x.

All energies are in units of omega_c and times in 1/omega_c. The mirror term
is diagonalized exactly by displacing the phonon mode by n*beta per photon
sector (beta = kappa/omega_m), giving eigenvalues

    E(n, k) = n omega_c - n^2 beta^2 omega_m + k omega_m

with eigenvectors |n> x D(n beta)|k>; this closed form serves as an oracle
for the numerics.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import HermiticityError, LabelError
from .fockspace import (SIGMA_X, SIGMA_Z, BareLabel, HilbertSpace,
                        annihilation, basis_index, displacement, embed,
                        identity, number)

TWO_PHOTON = "two_photon"
ONE_PHOTON = "one_photon"

HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Physical frequencies and couplings, in units of omega_c."""

    omega_m: float
    omega_q: float
    kappa: float
    lam: float
    coupling_kind: str = TWO_PHOTON
    omega_c: float = 1.0

    def __post_init__(self):
        for name in ("omega_c", "omega_m", "omega_q"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.kappa < 0 or self.lam < 0:
            raise ValueError("couplings must be non-negative")
        if self.coupling_kind not in (TWO_PHOTON, ONE_PHOTON):
            raise ValueError(f"unknown coupling kind {self.coupling_kind!r}")

    @property
    def beta(self) -> float:
        """Mirror displacement per photon, kappa/omega_m (derived)."""
        return self.kappa / self.omega_m

    def with_omega_q(self, omega_q: float) -> "ModelParams":
        return ModelParams(omega_m=self.omega_m, omega_q=omega_q,
                           kappa=self.kappa, lam=self.lam,
                           coupling_kind=self.coupling_kind,
                           omega_c=self.omega_c)


@dataclass(frozen=True)
class DriveParams:
    """Gaussian pulse on the mechanical mode.

    The envelope is amplitude * G(t - t0) with G a unit-area Gaussian of
    standard deviation sigma_pulse, so the pulse area equals `amplitude`.
    """

    amplitude: float
    omega_d: float
    sigma_pulse: float
    t0: float

    def __post_init__(self):
        if self.sigma_pulse <= 0:
            raise ValueError("sigma_pulse must be positive")


def _check_hermitian(H: np.ndarray, what: str) -> np.ndarray:
    dev = np.abs(H - H.conj().T).max()
    if dev > HERMITICITY_TOL:
        raise HermiticityError(f"{what} deviates from Hermitian by {dev:.2e}")
    return H


def build_H0(params: ModelParams, space: HilbertSpace) -> np.ndarray:
    """Uncoupled atom plus mirror-shifted cavity/mechanics."""
    a = annihilation(space.dim_photon)
    na = a.conj().T @ a
    b = annihilation(space.dim_phonon)
    xb = b + b.conj().T
    H = (params.omega_q / 2) * embed(SIGMA_Z, "atom", space) \
        + params.omega_c * embed(na, "cavity", space) \
        + params.omega_m * embed(number(space.dim_phonon), "mechanics", space) \
        + params.kappa * embed(na, "cavity", space) @ embed(xb, "mechanics", space)
    return _check_hermitian(H, "H0")


def build_V(params: ModelParams, space: HilbertSpace) -> np.ndarray:
    """Photon-pair (moving mirror) term plus the atom-field coupling."""
    a = annihilation(space.dim_photon)
    a2 = a @ a
    pair = a2 + a2.conj().T
    b = annihilation(space.dim_phonon)
    xb = b + b.conj().T
    V = 0.5 * params.kappa * embed(pair, "cavity", space) \
        @ embed(xb, "mechanics", space)
    if params.coupling_kind == TWO_PHOTON:
        V = V + params.lam * embed(pair, "cavity", space) \
            @ embed(SIGMA_X, "atom", space)
    else:
        x = a + a.conj().T
        V = V + params.lam * embed(x, "cavity", space) \
            @ embed(SIGMA_X, "atom", space)
    return _check_hermitian(V, "V")


def build_hamiltonian(params: ModelParams, space: HilbertSpace) -> np.ndarray:
    return build_H0(params, space) + build_V(params, space)


def analytic_optomech_energy(n: int, k: int, params: ModelParams) -> float:
    """Exact mirror-displaced spectrum, n omega_c - n^2 beta^2 omega_m + k omega_m."""
    if n < 0 or k < 0:
        raise LabelError("occupations must be non-negative")
    b = params.beta
    return n * params.omega_c - n * n * b * b * params.omega_m \
        + k * params.omega_m


def displaced_phonon_vector(n: int, k: int, params: ModelParams,
                            space: HilbertSpace) -> np.ndarray:
    """Phonon factor D(n beta)|k> of the displaced eigenstate."""
    if k > space.n_phonon_max:
        raise LabelError(f"k={k} exceeds phonon cutoff {space.n_phonon_max}")
    v = np.zeros(space.dim_phonon, dtype=complex)
    v[k] = 1.0
    if n == 0:
        return v  # no displacement in the zero-photon sector
    return displacement(n * params.beta, space.dim_phonon) @ v


def displaced_eigvec(n: int, k: int, q: str, params: ModelParams,
                     space: HilbertSpace) -> np.ndarray:
    """|n> x D(n beta)|k> x |q>, an eigenvector of H0 away from the cutoff."""
    label = BareLabel(n=n, k=k, q=q)  # validates q and signs
    if n > space.n_photon_max:
        raise LabelError(f"n={n} exceeds photon cutoff {space.n_photon_max}")
    ph = np.zeros(space.dim_photon, dtype=complex)
    ph[n] = 1.0
    at = np.zeros(2, dtype=complex)
    at[label.q_index] = 1.0
    mk = displaced_phonon_vector(n, k, params, space)
    return np.kron(np.kron(ph, mk), at)


def displaced_tail_weight(n: int, k: int, params: ModelParams,
                          space: HilbertSpace) -> float:
    """Population of D(n beta)|k> on the top two phonon levels.

    Small tail weight (< ~1e-8) certifies that the displaced state fits the
    truncated ladder, so its analytic energy is trustworthy there.
    """
    v = displaced_phonon_vector(n, k, params, space)
    return float(np.abs(v[-1]) ** 2 + np.abs(v[-2]) ** 2)


def bare_energy(label: BareLabel, params: ModelParams) -> float:
    """H0 eigenvalue of the displaced state carrying this label."""
    e = analytic_optomech_energy(label.n, label.k, params)
    return e + (0.5 if label.q == "e" else -0.5) * params.omega_q


def displaced_basis_matrix(params: ModelParams,
                           space: HilbertSpace) -> np.ndarray:
    """Columns are displaced eigenvectors, ordered by basis_index.

    Block structure: photon sector n carries D(n beta) on the phonon factor.
    """
    W = np.zeros((space.dim_total, space.dim_total), dtype=complex)
    I2 = identity(2)
    for n in range(space.dim_photon):
        D = identity(space.dim_phonon) if n == 0 else \
            displacement(n * params.beta, space.dim_phonon)
        block = np.kron(D, I2)
        lo = basis_index(BareLabel(n, 0, "g"), space)
        hi = lo + space.dim_phonon * 2
        W[lo:hi, lo:hi] = block
    return W


def drive_envelope(t: float, drive: DriveParams) -> float:
    """Pulse envelope amplitude * exp(-(t-t0)^2/(2 sigma^2)) / (sigma sqrt(2 pi))."""
    s = drive.sigma_pulse
    arg = (t - drive.t0) / s
    return drive.amplitude * math.exp(-0.5 * arg * arg) / (s * math.sqrt(2 * math.pi))
