"""Simulator for vacuum-mediated coupling between a mechanical oscillator
and an atom in a cavity with a movable mirror."""

from .dynamics import (DressedOperatorSet, LindbladConfig, TimeSeries,
                       bare_state_density, build_dressed, dissipator, evolve,
                       ground_state_density, levels_below, lindblad_rhs,
                       observables, run_driven_protocol)
from .fockspace import (BareLabel, HilbertSpace, annihilation, basis_index,
                        basis_state, creation, displacement, embed,
                        label_from_index)
from .model import (ONE_PHOTON, TWO_PHOTON, DriveParams, ModelParams,
                    analytic_optomech_energy, bare_energy, build_H0, build_V,
                    build_hamiltonian, displaced_eigvec, drive_envelope)
from .scenarios import (SCENARIOS, ScenarioConfig, default_config,
                        run_scenario)
from .spectra import (EigenSystem, LevelSweep, SplittingResult, diagonalize,
                      find_min_splitting, generic_second_order,
                      perturbative_coupling, sweep_levels)

__version__ = "0.1.0"

__all__ = [
    "BareLabel", "HilbertSpace", "annihilation", "creation", "displacement",
    "embed", "basis_index", "basis_state", "label_from_index",
    "ModelParams", "DriveParams", "TWO_PHOTON", "ONE_PHOTON",
    "build_H0", "build_V", "build_hamiltonian", "analytic_optomech_energy",
    "bare_energy", "displaced_eigvec", "drive_envelope",
    "EigenSystem", "LevelSweep", "SplittingResult", "diagonalize",
    "sweep_levels", "find_min_splitting", "perturbative_coupling",
    "generic_second_order",
    "DressedOperatorSet", "LindbladConfig", "TimeSeries", "build_dressed",
    "levels_below", "dissipator", "lindblad_rhs", "evolve", "observables",
    "bare_state_density", "ground_state_density", "run_driven_protocol",
    "SCENARIOS", "ScenarioConfig", "default_config", "run_scenario",
    "__version__",
]
