"""Truncated Fock-space operators and tensor-product embeddings.

The composite space is cavity (photon) x mechanics (phonon) x atom, with a
fixed basis ordering: photon index slowest, then phonon, then atom (g=0, e=1).
All operators are dense complex matrices; the default composite dimension
(11 * 7 * 2 = 154) makes sparse machinery pointless.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import DimensionError, LabelError

SLOTS = ("cavity", "mechanics", "atom")

# Atomic basis ordering is (g, e), so sigma_z|e> = +|e>.
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Z = np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex)
SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # |g><e|


@dataclass(frozen=True)
class HilbertSpace:
    """Truncation cutoffs of the composite space.

    Fock states 0..n_photon_max and 0..n_phonon_max are retained; the
    minimum sizes keep two-photon pair states and one-phonon states
    representable with headroom.
    """

    n_photon_max: int = 10
    n_phonon_max: int = 6

    def __post_init__(self):
        if self.n_photon_max < 4:
            raise DimensionError(
                f"n_photon_max must be >= 4, got {self.n_photon_max}")
        if self.n_phonon_max < 3:
            raise DimensionError(
                f"n_phonon_max must be >= 3, got {self.n_phonon_max}")

    @property
    def dim_photon(self) -> int:
        return self.n_photon_max + 1

    @property
    def dim_phonon(self) -> int:
        return self.n_phonon_max + 1

    @property
    def dim_atom(self) -> int:
        return 2

    @property
    def dim_total(self) -> int:
        return self.dim_photon * self.dim_phonon * self.dim_atom

    def slot_dim(self, slot: str) -> int:
        if slot == "cavity":
            return self.dim_photon
        if slot == "mechanics":
            return self.dim_phonon
        if slot == "atom":
            return self.dim_atom
        raise DimensionError(f"unknown slot {slot!r}, expected one of {SLOTS}")


@dataclass(frozen=True)
class BareLabel:
    """Uncoupled product-state label |n photons, k phonons, atom q>."""

    n: int
    k: int
    q: str  # "g" or "e"

    def __post_init__(self):
        if self.q not in ("g", "e"):
            raise LabelError(f"atom state must be 'g' or 'e', got {self.q!r}")
        if self.n < 0 or self.k < 0:
            raise LabelError(f"negative occupation in {self}")

    @property
    def q_index(self) -> int:
        return 0 if self.q == "g" else 1


def annihilation(dim: int) -> np.ndarray:
    """Bosonic lowering operator: <m-1|a|m> = sqrt(m)."""
    if dim < 2:
        raise DimensionError(f"annihilation needs dim >= 2, got {dim}")
    return np.diag(np.sqrt(np.arange(1.0, dim)), 1).astype(complex)


def creation(dim: int) -> np.ndarray:
    return annihilation(dim).conj().T


def number(dim: int) -> np.ndarray:
    return np.diag(np.arange(float(dim))).astype(complex)


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def embed(op: np.ndarray, slot: str, space: HilbertSpace) -> np.ndarray:
    """Lift a single-factor operator to the composite space.

    Identities fill the other slots, so embeddings of distinct slots commute.
    """
    op = np.asarray(op)
    d = space.slot_dim(slot)
    if op.shape != (d, d):
        raise DimensionError(
            f"operator shape {op.shape} does not match slot {slot!r} "
            f"dimension {d}")
    factors = {
        "cavity": identity(space.dim_photon),
        "mechanics": identity(space.dim_phonon),
        "atom": identity(space.dim_atom),
    }
    factors[slot] = op.astype(complex)
    return np.kron(np.kron(factors["cavity"], factors["mechanics"]),
                   factors["atom"])


def displacement(alpha: float, dim: int) -> np.ndarray:
    """exp[alpha (b - b†)] on the truncated ladder.

    The truncated generator is exactly anti-Hermitian, so the result is
    unitary on the truncated space; it matches the closed-form coherent
    overlap <0|D|0> = exp(-alpha^2/2) away from the cutoff.
    """
    if dim < 2:
        raise DimensionError(f"displacement needs dim >= 2, got {dim}")
    if not np.isfinite(alpha):
        raise ValueError(f"displacement parameter must be finite, got {alpha}")
    b = annihilation(dim)
    return expm(alpha * (b - b.conj().T))


def basis_index(label: BareLabel, space: HilbertSpace) -> int:
    """Flat index of a bare product state under the fixed ordering."""
    if label.n > space.n_photon_max or label.k > space.n_phonon_max:
        raise LabelError(f"{label} outside cutoffs "
                         f"({space.n_photon_max}, {space.n_phonon_max})")
    return (label.n * space.dim_phonon + label.k) * 2 + label.q_index


def label_from_index(index: int, space: HilbertSpace) -> BareLabel:
    """Inverse of basis_index."""
    if not 0 <= index < space.dim_total:
        raise LabelError(f"index {index} outside 0..{space.dim_total - 1}")
    q = index % 2
    nk = index // 2
    return BareLabel(n=nk // space.dim_phonon, k=nk % space.dim_phonon,
                     q="g" if q == 0 else "e")


def basis_state(label: BareLabel, space: HilbertSpace) -> np.ndarray:
    """Unit vector of a bare product state."""
    v = np.zeros(space.dim_total, dtype=complex)
    v[basis_index(label, space)] = 1.0
    return v


def all_labels(space: HilbertSpace):
    """Labels in flat-index order."""
    return [label_from_index(i, space) for i in range(space.dim_total)]
