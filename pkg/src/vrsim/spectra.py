"""Eigenanalysis: labeled spectra, level sweeps, anticrossings, perturbation.

The hybridizing level pair is followed through a sweep by eigenvector
overlap rather than by sorted index, because sorted order swaps the two
branches on either side of an anticrossing and would corrupt the gap
minimum. Labels are assigned against the displaced product basis, which
diagonalizes the uncoupled Hamiltonian exactly.
"""

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import BracketError, DegeneracyError, HermiticityError
from .fockspace import (SIGMA_Z, BareLabel, HilbertSpace, all_labels,
                        basis_index, embed, label_from_index)
from .model import (TWO_PHOTON, ModelParams, bare_energy, build_V,
                    build_hamiltonian, displaced_basis_matrix,
                    displaced_eigvec)

RESIDUAL_TOL = 1e-8
ORTHONORMALITY_TOL = 1e-10
TIE_RATIO = 0.8  # runner-up overlap ratio above which a label is ambiguous


@dataclass(frozen=True)
class LabelInfo:
    """Best-overlap label of one eigenstate, with tie reporting."""

    label: BareLabel
    overlap: float
    tie: BareLabel | None = None


@dataclass(frozen=True)
class EigenSystem:
    """Sorted eigendecomposition of a Hermitian operator.

    values ascend; vectors[:, l] belongs to values[l]; labels[l] names the
    dominant displaced (or bare) product state when label assignment was
    requested.
    """

    values: np.ndarray
    vectors: np.ndarray
    labels: tuple[LabelInfo, ...] | None = None

    @property
    def dim(self) -> int:
        return len(self.values)

    @property
    def ground_energy(self) -> float:
        return float(self.values[0])

    def state_index(self, label: BareLabel) -> int:
        """Eigenindex whose assigned label matches, else ValueError."""
        if self.labels is None:
            raise ValueError("eigensystem was built without labels")
        for i, info in enumerate(self.labels):
            if info.label == label:
                return i
        raise ValueError(f"no eigenstate labeled {label}")


def _assign_labels(vectors: np.ndarray, basis: np.ndarray,
                   space: HilbertSpace) -> tuple[LabelInfo, ...]:
    ov = np.abs(basis.conj().T @ vectors) ** 2  # [basis index, eigenstate]
    labels = []
    for l in range(vectors.shape[1]):
        order = np.argsort(ov[:, l])
        best, second = order[-1], order[-2]
        tie = None
        if ov[second, l] >= TIE_RATIO * ov[best, l]:
            tie = label_from_index(int(second), space)
        labels.append(LabelInfo(label=label_from_index(int(best), space),
                                overlap=float(ov[best, l]), tie=tie))
    return tuple(labels)


def diagonalize(H: np.ndarray, space: HilbertSpace | None = None,
                params: ModelParams | None = None) -> EigenSystem:
    """Full eigendecomposition with residual and orthonormality checks.

    With `space` and `params` given, each eigenstate is labeled by its
    maximum squared overlap with the displaced product basis; with only
    `space`, the bare basis is used. Near-equal runner-up overlaps are
    reported as ties (expected exactly at anticrossing centers).
    """
    H = np.asarray(H)
    dev = np.abs(H - H.conj().T).max()
    if dev > 1e-10:
        raise HermiticityError(f"diagonalize requires Hermitian input, "
                               f"deviation {dev:.2e}")
    values, vectors = np.linalg.eigh(H)
    scale = max(np.abs(values).max(), 1.0)
    residual = np.abs(H @ vectors - vectors * values).max()
    if residual > RESIDUAL_TOL * scale:
        raise HermiticityError(f"eigen residual {residual:.2e} exceeds "
                               f"{RESIDUAL_TOL:.0e} * |H|")
    gram_dev = np.abs(vectors.conj().T @ vectors
                      - np.eye(len(values))).max()
    if gram_dev > ORTHONORMALITY_TOL:
        raise HermiticityError(f"eigenvectors not orthonormal: {gram_dev:.2e}")

    labels = None
    if space is not None:
        basis = np.eye(space.dim_total, dtype=complex) if params is None \
            else displaced_basis_matrix(params, space)
        labels = _assign_labels(vectors, basis, space)
    return EigenSystem(values=values, vectors=vectors, labels=labels)


@dataclass
class LevelSweep:
    """Branch-tracked low-lying levels over an atomic-frequency grid.

    levels[i, b] is branch b's energy above the instantaneous ground state
    at omega_q[i]. Branches start ordered by energy at the first grid point
    and keep their identity through crossings via eigenvector overlap.
    """

    omega_q: np.ndarray
    levels: np.ndarray
    min_overlap: float
    warnings: list[str] = field(default_factory=list)

    def write_csv(self, path) -> None:
        n = self.levels.shape[1]
        header = "omega_q," + ",".join(f"level_{b}" for b in range(n))
        data = np.column_stack([self.omega_q, self.levels])
        _write_csv(path, header, data)


def _write_csv(path, header: str, data: np.ndarray) -> None:
    with open(path, "w", newline="\n") as f:
        f.write(header + "\n")
        for row in data:
            f.write(",".join(f"{x:.12g}" for x in row) + "\n")


def _hamiltonian_family(params: ModelParams, space: HilbertSpace):
    """H(omega_q) = H_base + omega_q * H_unit, precomputed once per sweep."""
    base = build_hamiltonian(params.with_omega_q(1.0), space)
    unit = 0.5 * embed(SIGMA_Z, "atom", space)
    base = base - unit  # strip the omega_q = 1 placeholder
    return lambda wq: base + wq * unit


def sweep_levels(params: ModelParams, space: HilbertSpace,
                 omega_q_grid: np.ndarray, n_levels: int = 8) -> LevelSweep:
    """Track the lowest branches across the grid by adjacent-point overlap.

    Assignment is greedy on the overlap matrix (largest elements claimed
    first). A warning is recorded whenever the best available overlap for
    some branch drops below 0.5, which signals a grid too coarse to follow
    that branch reliably.
    """
    grid = np.asarray(omega_q_grid, dtype=float)
    if len(grid) < 2 or np.any(np.diff(grid) <= 0):
        raise ValueError("omega_q grid must be increasing with >= 2 points")
    ham = _hamiltonian_family(params, space)

    levels = np.empty((len(grid), n_levels))
    notes: list[str] = []
    min_overlap = 1.0
    prev_vectors = None
    tracked = np.arange(n_levels)
    for i, wq in enumerate(grid):
        values, vectors = np.linalg.eigh(ham(wq))
        if prev_vectors is not None:
            ov = np.abs(prev_vectors.conj().T @ vectors) ** 2  # [branch, cand]
            new_tracked = np.full(n_levels, -1)
            taken = np.zeros(vectors.shape[1], dtype=bool)
            order = np.dstack(np.unravel_index(np.argsort(ov, axis=None)[::-1],
                                               ov.shape))[0]
            assigned = 0
            for b, c in order:
                if new_tracked[b] == -1 and not taken[c]:
                    new_tracked[b] = c
                    taken[c] = True
                    assigned += 1
                    best = ov[b, c]
                    min_overlap = min(min_overlap, best)
                    if best < 0.5:
                        notes.append(
                            f"branch {b} continuity overlap {best:.3f} < 0.5 "
                            f"at omega_q={wq:.6f}; refine the grid")
                    if assigned == n_levels:
                        break
            tracked = new_tracked
        levels[i] = values[tracked] - values[0]
        prev_vectors = vectors[:, tracked]
    return LevelSweep(omega_q=grid, levels=levels, min_overlap=min_overlap,
                      warnings=notes)


@dataclass(frozen=True)
class SplittingResult:
    """Located minimum gap of the tracked anticrossing pair."""

    omega_q_min: float
    gap: float
    branch_states: tuple[int, int]
    hybrid_overlaps: tuple[tuple[float, float], tuple[float, float]]
    targets: tuple[BareLabel, BareLabel]

    @property
    def omega_eff(self) -> float:
        """Effective exchange frequency, half the minimum splitting."""
        return self.gap / 2

    def to_dict(self) -> dict:
        return {
            "omega_q_min": self.omega_q_min,
            "gap": self.gap,
            "omega_eff": self.omega_eff,
            "branch_states": list(self.branch_states),
            "hybrid_overlaps": [list(r) for r in self.hybrid_overlaps],
            "targets": [f"|{t.n},{t.k},{t.q}>" for t in self.targets],
        }

    def write_json(self, path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)
            f.write("\n")


def default_targets(params: ModelParams) -> tuple[BareLabel, BareLabel]:
    """Hybridizing pair: one phonon vs the excited state it converts to."""
    if params.coupling_kind == TWO_PHOTON:
        return BareLabel(0, 1, "g"), BareLabel(0, 0, "e")
    return BareLabel(0, 1, "g"), BareLabel(1, 0, "e")


def _tracked_gap(H: np.ndarray, t1: np.ndarray, t2: np.ndarray):
    values, vectors = np.linalg.eigh(H)
    o1 = np.abs(vectors.conj().T @ t1) ** 2
    o2 = np.abs(vectors.conj().T @ t2) ** 2
    i, j = sorted(np.argsort(o1 + o2)[-2:])
    gap = float(values[j] - values[i])
    overlaps = ((float(o1[i]), float(o2[i])), (float(o1[j]), float(o2[j])))
    return gap, (int(i), int(j)), overlaps


GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def find_min_splitting(params: ModelParams, space: HilbertSpace,
                       bracket: tuple[float, float],
                       targets: tuple[BareLabel, BareLabel] | None = None,
                       xtol: float = 1e-6) -> SplittingResult:
    """Golden-section refinement of the tracked pair's gap over omega_q.

    The pair is re-identified at every evaluation as the two eigenstates
    with the largest combined overlap onto the two target product states,
    which keeps the objective well-defined on both sides of the crossing.
    Raises BracketError when the minimum sits at a bracket edge.
    """
    if targets is None:
        targets = default_targets(params)
    t1 = displaced_eigvec(targets[0].n, targets[0].k, targets[0].q,
                          params, space)
    t2 = displaced_eigvec(targets[1].n, targets[1].k, targets[1].q,
                          params, space)
    ham = _hamiltonian_family(params, space)

    def gap_at(wq: float) -> float:
        return _tracked_gap(ham(wq), t1, t2)[0]

    a, b = float(bracket[0]), float(bracket[1])
    if not b > a:
        raise BracketError(f"empty bracket ({a}, {b})")
    ga, gb = gap_at(a), gap_at(b)
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    gc, gd = gap_at(c), gap_at(d)
    while (b - a) > xtol:
        if gc < gd:
            b, d, gd = d, c, gc
            c = b - GOLDEN * (b - a)
            gc = gap_at(c)
        else:
            a, c, gc = c, d, gd
            d = a + GOLDEN * (b - a)
            gd = gap_at(d)
    wq = 0.5 * (a + b)
    gap, pair, overlaps = _tracked_gap(ham(wq), t1, t2)
    if gap >= min(ga, gb):
        raise BracketError(
            f"no interior minimum: gap({wq:.6f})={gap:.3e} vs "
            f"bracket edges {ga:.3e}, {gb:.3e}")
    if gap <= 4 * xtol:
        raise BracketError(
            f"minimum gap {gap:.2e} is indistinguishable from an exact "
            f"crossing at tolerance {xtol:.0e}; couplings may be zero")
    for row in overlaps:
        if row[0] + row[1] < 0.4:
            raise BracketError(
                f"located minimum is not a hybridized pair "
                f"(target overlaps {overlaps}); wrong bracket or targets")
    return SplittingResult(omega_q_min=wq, gap=gap, branch_states=pair,
                           hybrid_overlaps=overlaps, targets=tuple(targets))


def perturbative_coupling(params: ModelParams) -> float:
    """Closed-form second-order phonon-to-atom coupling (two-photon case).

    Two virtual-pair paths contribute; the result is negative near
    resonance and its magnitude is the effective exchange frequency.
    """
    if params.coupling_kind != TWO_PHOTON:
        raise ValueError("closed form applies to the two-photon coupling")
    shift = 4 * params.kappa ** 2 / params.omega_m
    d1 = params.omega_m - 2 * params.omega_c + shift
    d2 = -params.omega_q - 2 * params.omega_c + shift
    for d in (d1, d2):
        if abs(d) < 1e-9:
            raise DegeneracyError(f"vanishing denominator {d:.1e}")
    kl = params.kappa * params.lam
    return kl / d1 + kl / d2


def generic_second_order(params: ModelParams, space: HilbertSpace,
                         initial: BareLabel, final: BareLabel,
                         intermediates: list[BareLabel] | None = None) -> float:
    """Second-order sum over the displaced eigenbasis of H0.

    Includes every displaced intermediate (all Franck-Condon overlaps), so
    it quantifies what the two-path closed form drops. Degenerate
    intermediates are excluded with a warning.
    """
    if initial == final:
        raise ValueError("initial and final states must differ")
    V = build_V(params, space)
    W = displaced_basis_matrix(params, space)
    v_i = W[:, basis_index(initial, space)]
    v_f = W[:, basis_index(final, space)]
    e_i = bare_energy(initial, params)
    # all <l|V|i> and <l|V|f> in one pass
    Vi = W.conj().T @ (V @ v_i)
    Vf = W.conj().T @ (V @ v_f)
    total = 0.0
    allowed = None if intermediates is None else set(intermediates)
    for idx, label in enumerate(all_labels(space)):
        if label in (initial, final):
            continue
        if allowed is not None and label not in allowed:
            continue
        de = e_i - bare_energy(label, params)
        if abs(de) < 1e-9:
            warnings.warn(
                f"degenerate intermediate {label} (|dE|={abs(de):.1e}) "
                f"excluded from the second-order sum")
            continue
        total += float((np.conj(Vf[idx]) * Vi[idx]).real) / de
    return total
