"""Config-driven reproduction runs and their file outputs.

Each scenario writes CSV data plus a summary.json into
<output_dir>/<scenario>/. Summaries always complete; soft checks are
recorded as pass/fail entries rather than raised, so a failed physics
check still leaves inspectable output (the CLI maps it to exit code 2).
"""

import dataclasses
import json
import os
from dataclasses import dataclass

import numpy as np

from .dynamics import (DressedOperatorSet, LindbladConfig, TimeSeries,
                       bare_state_density, build_dressed, evolve,
                       levels_below, run_driven_protocol)
from .fockspace import BareLabel, HilbertSpace
from .model import (ONE_PHOTON, TWO_PHOTON, DriveParams, ModelParams,
                    build_hamiltonian)
from .spectra import (SplittingResult, diagonalize, find_min_splitting,
                      perturbative_coupling, sweep_levels)

SCENARIOS = (
    "levels_two_photon",
    "splitting_vs_coupling",
    "dynamics_two_photon",
    "driven_dynamics",
    "levels_one_photon",
    "dynamics_one_photon",
    "converge",
)

OUTPUT_ENV_VAR = "VRSIM_OUT"

FIG2_MODEL = dict(omega_m=1.05, omega_q=1.0, kappa=0.05, lam=0.05,
                  coupling_kind=TWO_PHOTON)
FIG7_MODEL = dict(omega_m=1.2, omega_q=0.2, kappa=0.08, lam=0.08,
                  coupling_kind=ONE_PHOTON)
TWO_PHOTON_BRACKET = (1.0, 1.1)
ONE_PHOTON_BRACKET = (0.15, 0.26)

# quoted reference values the soft checks compare against
REF_TWO_PHOTON = {"gap": 6.8e-3, "omega_q": 1.052}
REF_ONE_PHOTON = {"gap": 1.55e-2, "omega_q": 0.199}


@dataclass
class SweepSpec:
    start: float
    stop: float
    num: int

    def grid(self) -> np.ndarray:
        if self.num < 2 or self.stop <= self.start:
            raise ValueError("sweep must be increasing with >= 2 points")
        return np.linspace(self.start, self.stop, self.num)


@dataclass
class ScenarioConfig:
    scenario: str
    model: ModelParams
    space: HilbertSpace
    lindblad: LindbladConfig
    drive: DriveParams | None = None
    sweep: SweepSpec | None = None
    output_dir: str = "out"
    bracket: tuple[float, float] | None = None
    n_levels_plot: int = 8
    energy_ceiling: float = 5.0
    t_final: float | None = None
    n_samples: int = 401
    rtol: float = 1e-8
    atol: float = 1e-10

    def to_dict(self) -> dict:
        d = {
            "scenario": self.scenario,
            "model": {
                "omega_c": self.model.omega_c,
                "omega_m": self.model.omega_m,
                "omega_q": self.model.omega_q,
                "kappa": self.model.kappa,
                "lambda": self.model.lam,
                "coupling_kind": self.model.coupling_kind,
            },
            "space": {
                "n_photon_max": self.space.n_photon_max,
                "n_phonon_max": self.space.n_phonon_max,
            },
            "lindblad": dataclasses.asdict(self.lindblad),
            "drive": dataclasses.asdict(self.drive) if self.drive else None,
            "sweep": dataclasses.asdict(self.sweep) if self.sweep else None,
            "output_dir": self.output_dir,
            "bracket": list(self.bracket) if self.bracket else None,
            "n_levels_plot": self.n_levels_plot,
            "energy_ceiling": self.energy_ceiling,
            "t_final": self.t_final,
            "n_samples": self.n_samples,
            "rtol": self.rtol,
            "atol": self.atol,
        }
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioConfig":
        model = dict(d["model"])
        model["lam"] = model.pop("lambda")
        drive = d.get("drive")
        sweep = d.get("sweep")
        bracket = d.get("bracket")
        return cls(
            scenario=d["scenario"],
            model=ModelParams(**model),
            space=HilbertSpace(**d["space"]),
            lindblad=LindbladConfig(**d.get("lindblad", {})),
            drive=DriveParams(**drive) if drive else None,
            sweep=SweepSpec(**sweep) if sweep else None,
            output_dir=d.get("output_dir", "out"),
            bracket=tuple(bracket) if bracket else None,
            n_levels_plot=d.get("n_levels_plot", 8),
            energy_ceiling=d.get("energy_ceiling", 5.0),
            t_final=d.get("t_final"),
            n_samples=d.get("n_samples", 401),
            rtol=d.get("rtol", 1e-8),
            atol=d.get("atol", 1e-10),
        )


def _default_output_root() -> str:
    return os.environ.get(OUTPUT_ENV_VAR, "out")


def default_config(scenario: str, output_dir: str | None = None) -> ScenarioConfig:
    """Parameter sets of the reference figures, with derived quantities.

    Dynamics scenarios pin the atomic frequency to the located splitting
    minimum and size the drive pulse from the measured exchange frequency,
    so building these defaults runs a quick splitting search.
    """
    if scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario {scenario!r}; "
                         f"choose from {', '.join(SCENARIOS)}")
    out = output_dir or _default_output_root()
    space = HilbertSpace(10, 6)
    if scenario == "levels_two_photon":
        return ScenarioConfig(
            scenario=scenario, model=ModelParams(**FIG2_MODEL), space=space,
            lindblad=LindbladConfig(), sweep=SweepSpec(0.8, 1.3, 201),
            bracket=TWO_PHOTON_BRACKET, output_dir=out)
    if scenario == "levels_one_photon":
        return ScenarioConfig(
            scenario=scenario, model=ModelParams(**FIG7_MODEL), space=space,
            lindblad=LindbladConfig(), sweep=SweepSpec(0.05, 0.45, 201),
            bracket=ONE_PHOTON_BRACKET, output_dir=out)
    if scenario == "splitting_vs_coupling":
        return ScenarioConfig(
            scenario=scenario, model=ModelParams(**FIG2_MODEL), space=space,
            lindblad=LindbladConfig(),
            sweep=SweepSpec(0.005, 0.12, 24),  # swept kappa = lambda
            bracket=(1.0, 1.2), output_dir=out)
    if scenario == "converge":
        return ScenarioConfig(
            scenario=scenario, model=ModelParams(**FIG2_MODEL), space=space,
            lindblad=LindbladConfig(), bracket=TWO_PHOTON_BRACKET,
            output_dir=out)
    if scenario == "dynamics_two_photon":
        model = ModelParams(**FIG2_MODEL)
        split = find_min_splitting(model, space, TWO_PHOTON_BRACKET)
        return ScenarioConfig(
            scenario=scenario, model=model.with_omega_q(split.omega_q_min),
            space=space, lindblad=LindbladConfig(gamma_a=5e-4, gamma_m=1e-3,
                                                 gamma_q=5e-4),
            bracket=TWO_PHOTON_BRACKET, energy_ceiling=5.0, output_dir=out)
    if scenario == "dynamics_one_photon":
        model = ModelParams(**FIG7_MODEL)
        split = find_min_splitting(model, space, ONE_PHOTON_BRACKET)
        return ScenarioConfig(
            scenario=scenario, model=model.with_omega_q(split.omega_q_min),
            space=space, lindblad=LindbladConfig(),
            bracket=ONE_PHOTON_BRACKET, energy_ceiling=5.0, output_dir=out)
    # driven_dynamics
    model = ModelParams(**FIG2_MODEL)
    split = find_min_splitting(model, space, TWO_PHOTON_BRACKET)
    sigma = 1.0 / (10.0 * split.omega_eff)
    drive = DriveParams(amplitude=np.pi, omega_d=model.omega_m,
                        sigma_pulse=sigma, t0=6.0 * sigma)
    return ScenarioConfig(
        scenario=scenario, model=model.with_omega_q(split.omega_q_min),
        space=space,
        lindblad=LindbladConfig(gamma_a=1e-4, gamma_m=1e-4, gamma_q=1e-4),
        drive=drive, bracket=TWO_PHOTON_BRACKET, energy_ceiling=7.6,
        n_samples=301, output_dir=out)


@dataclass
class ScenarioResult:
    scenario: str
    out_dir: str
    files: list[str]
    summary: dict

    @property
    def checks_passed(self) -> bool:
        return all(c["passed"] for c in self.summary.get("checks", []))


def _check(name: str, passed: bool, detail: str) -> dict:
    return {"name": name, "passed": bool(passed), "detail": detail}


def _write_summary(out_dir: str, summary: dict) -> str:
    path = os.path.join(out_dir, "summary.json")
    with open(path, "w") as f:
        json.dump(summary, f, indent=2, sort_keys=True, default=float)
        f.write("\n")
    return path


def _splitting_pipeline(cfg: ScenarioConfig, ref: dict):
    sweep = sweep_levels(cfg.model, cfg.space, cfg.sweep.grid(),
                         n_levels=cfg.n_levels_plot)
    split = find_min_splitting(cfg.model, cfg.space, cfg.bracket)
    checks = [
        _check("gap_within_10pct_of_reference",
               abs(split.gap - ref["gap"]) <= 0.1 * ref["gap"],
               f"gap={split.gap:.6e}, reference {ref['gap']:.2e}"),
        _check("location_within_0.003_of_reference",
               abs(split.omega_q_min - ref["omega_q"]) <= 3e-3,
               f"omega_q_min={split.omega_q_min:.6f}, "
               f"reference {ref['omega_q']}"),
        _check("branch_tracking_clean", not sweep.warnings,
               f"{len(sweep.warnings)} continuity warnings"),
    ]
    return sweep, split, checks


def _run_levels(cfg: ScenarioConfig, ref: dict, out_dir: str) -> ScenarioResult:
    sweep, split, checks = _splitting_pipeline(cfg, ref)
    files = []
    p = os.path.join(out_dir, "levels.csv")
    sweep.write_csv(p)
    files.append(p)
    p = os.path.join(out_dir, "splitting.json")
    split.write_json(p)
    files.append(p)
    summary = {
        "scenario": cfg.scenario,
        "splitting": split.to_dict(),
        "reference": ref,
        "sweep_min_overlap": sweep.min_overlap,
        "checks": checks,
    }
    files.append(_write_summary(out_dir, summary))
    return ScenarioResult(cfg.scenario, out_dir, files, summary)


def _run_splitting_vs_coupling(cfg: ScenarioConfig, out_dir: str) -> ScenarioResult:
    grid = cfg.sweep.grid()
    rows = []
    agree_limit = 0.086
    worst_inside = 0.0
    mismatch = []
    for lam in grid:
        model = ModelParams(omega_m=cfg.model.omega_m,
                            omega_q=cfg.model.omega_q, kappa=lam, lam=lam,
                            coupling_kind=TWO_PHOTON,
                            omega_c=cfg.model.omega_c)
        split = find_min_splitting(model, cfg.space, cfg.bracket)
        pert = 2 * abs(perturbative_coupling(
            model.with_omega_q(split.omega_q_min)))
        rel = abs(pert - split.gap) / split.gap
        rows.append((lam, split.gap, pert, split.omega_q_min, rel))
        if lam <= agree_limit:
            worst_inside = max(worst_inside, rel)
        mismatch.append(rel)
    path = os.path.join(out_dir, "splitting_vs_coupling.csv")
    with open(path, "w", newline="\n") as f:
        f.write("lambda,gap_numeric,gap_perturbative,omega_q_min,"
                "relative_mismatch\n")
        for row in rows:
            f.write(",".join(f"{x:.12g}" for x in row) + "\n")
    beyond = [m for lam, m in zip(grid, mismatch) if lam > agree_limit]
    grows = all(b2 >= b1 for b1, b2 in zip(beyond, beyond[1:])) if beyond else True
    checks = [
        _check("agreement_within_10pct_up_to_0.086",
               worst_inside <= 0.10,
               f"worst relative mismatch {worst_inside:.4f} "
               f"for lambda <= {agree_limit}"),
        _check("mismatch_grows_beyond_0.086", grows,
               f"mismatch beyond limit: {[f'{b:.4f}' for b in beyond]}"),
    ]
    summary = {
        "scenario": cfg.scenario,
        "agree_limit": agree_limit,
        "worst_relative_mismatch_inside_limit": worst_inside,
        "checks": checks,
    }
    files = [path, _write_summary(out_dir, summary)]
    return ScenarioResult(cfg.scenario, out_dir, files, summary)


def _dressed_for(cfg: ScenarioConfig) -> tuple[DressedOperatorSet, SplittingResult]:
    split = find_min_splitting(cfg.model, cfg.space, cfg.bracket)
    model = cfg.model.with_omega_q(split.omega_q_min)
    eigen = diagonalize(build_hamiltonian(model, cfg.space), cfg.space, model)
    dressed = build_dressed(eigen, cfg.space)
    dressed = dressed.truncate(levels_below(dressed, cfg.energy_ceiling))
    return dressed, split


def _exchange_run(cfg: ScenarioConfig, dressed: DressedOperatorSet,
                  split: SplittingResult, lindblad: LindbladConfig,
                  t_final: float, include_half_pi: bool = True) -> TimeSeries:
    rho0, weight = bare_state_density(BareLabel(0, 1, "g"), dressed, cfg.space)
    ts = np.linspace(0.0, t_final, cfg.n_samples)
    if include_half_pi:
        t_half = (np.pi / 2) / split.omega_eff
        if t_half < t_final:
            ts = np.unique(np.concatenate([ts, [t_half]]))
    return evolve(rho0, ts, dressed, lindblad, omega_eff=split.omega_eff,
                  rtol=cfg.rtol, atol=cfg.atol, kept_weight=weight)


def _first_peak(values: np.ndarray) -> float:
    for i in range(1, len(values) - 1):
        if values[i] >= values[i - 1] and values[i] >= values[i + 1] \
                and values[i] > 0.1:
            return float(values[i])
    return float(values.max())


def _run_dynamics_two_photon(cfg: ScenarioConfig, out_dir: str) -> ScenarioResult:
    dressed, split = _dressed_for(cfg)
    t_total = cfg.t_final or 2.2 * np.pi / split.omega_eff
    files = []

    ideal = _exchange_run(cfg, dressed, split, LindbladConfig(), t_total)
    cavity = _exchange_run(cfg, dressed, split,
                           LindbladConfig(gamma_a=1e-2),
                           min(t_total, 1.3 * np.pi / split.omega_eff))
    lossy = _exchange_run(cfg, dressed, split, cfg.lindblad,
                          2.6 * np.pi / split.omega_eff)
    for name, ts in (("timeseries_ideal", ideal),
                     ("timeseries_cavity_loss", cavity),
                     ("timeseries_all_loss", lossy)):
        p = os.path.join(out_dir, f"{name}.csv")
        ts.write_csv(p)
        files.append(p)

    i_half = int(np.argmin(np.abs(ideal.times - (np.pi / 2) / split.omega_eff)))
    atom_half = ideal.exp_atom[i_half]
    phonon_half = ideal.exp_phonon[i_half]
    photon_max = ideal.exp_photon.max()
    purity_err = np.abs(ideal.purity - 1).max()
    first_max = _first_peak(cavity.exp_atom)
    checks = [
        _check("ideal_atom_at_quarter_period", atom_half >= 0.95,
               f"exp_atom={atom_half:.4f} at omega_eff*t=pi/2"),
        _check("ideal_phonon_emptied", phonon_half <= 0.05,
               f"exp_phonon={phonon_half:.4f} at omega_eff*t=pi/2"),
        _check("ideal_photon_virtual", photon_max <= 0.05,
               f"max exp_photon={photon_max:.4f}"),
        _check("ideal_purity_preserved", purity_err <= 1e-7,
               f"max |purity-1|={purity_err:.2e}"),
        _check("cavity_loss_first_max", first_max >= 0.9,
               f"first atomic maximum {first_max:.4f} at gamma_a=1e-2"),
    ]
    summary = {
        "scenario": cfg.scenario,
        "splitting": split.to_dict(),
        "levels_kept": dressed.dim,
        "ideal": {"atom_at_half_pi": atom_half,
                  "phonon_at_half_pi": phonon_half,
                  "photon_max": photon_max,
                  "purity_error": purity_err},
        "cavity_loss_first_atomic_max": first_max,
        "checks": checks,
    }
    files.append(_write_summary(out_dir, summary))
    return ScenarioResult(cfg.scenario, out_dir, files, summary)


def _run_dynamics_one_photon(cfg: ScenarioConfig, out_dir: str) -> ScenarioResult:
    dressed, split = _dressed_for(cfg)
    t_total = cfg.t_final or 2.2 * np.pi / split.omega_eff
    run = _exchange_run(cfg, dressed, split, cfg.lindblad, t_total)
    p = os.path.join(out_dir, "timeseries_ideal.csv")
    run.write_csv(p)
    files = [p]
    atom_max = run.exp_atom.max()
    photon_max = run.exp_photon.max()
    g2_dev = np.abs(run.exp_atom - run.g2_qp).max()
    resonance_dev = abs(split.omega_q_min + cfg.model.omega_c
                        - cfg.model.omega_m)
    checks = [
        _check("photon_and_atom_rise_together",
               atom_max >= 0.9 and photon_max >= 0.9,
               f"max atom={atom_max:.4f}, max photon={photon_max:.4f}"),
        _check("atom_matches_correlator", g2_dev <= 0.05,
               f"max |exp_atom - g2_qp|={g2_dev:.4f}"),
        _check("resonance_energy_conservation", resonance_dev <= 3e-3,
               f"|omega_q + omega_c - omega_m|={resonance_dev:.4f} "
               f"(mirror displacement shifts the true resonance)"),
    ]
    summary = {
        "scenario": cfg.scenario,
        "splitting": split.to_dict(),
        "levels_kept": dressed.dim,
        "atom_max": atom_max,
        "photon_max": photon_max,
        "g2_max_deviation": g2_dev,
        "checks": checks,
    }
    files.append(_write_summary(out_dir, summary))
    return ScenarioResult(cfg.scenario, out_dir, files, summary)


def _run_driven(cfg: ScenarioConfig, out_dir: str) -> ScenarioResult:
    if cfg.drive is None:
        raise ValueError("driven_dynamics requires a drive block")
    dressed, split = _dressed_for(cfg)
    files = []
    peaks = {}
    photon_max = {}
    for tag, amp in (("quarter_pi", np.pi / 4), ("pi", np.pi)):
        drive = DriveParams(amplitude=amp, omega_d=cfg.drive.omega_d,
                            sigma_pulse=cfg.drive.sigma_pulse,
                            t0=cfg.drive.t0)
        run = run_driven_protocol(
            cfg.model.with_omega_q(split.omega_q_min), cfg.space,
            cfg.lindblad, drive, dressed=dressed,
            omega_eff=split.omega_eff, t_final=cfg.t_final,
            n_samples=cfg.n_samples, rtol=cfg.rtol, atol=cfg.atol)
        p = os.path.join(out_dir, f"timeseries_{tag}.csv")
        run.write_csv(p)
        files.append(p)
        peaks[tag] = float(run.exp_phonon.max())
        photon_max[tag] = float(run.exp_photon.max())
    checks = [
        _check("amplitude_orders_phonon_peaks",
               peaks["pi"] > peaks["quarter_pi"],
               f"peak phonon: pi={peaks['pi']:.4f} > "
               f"pi/4={peaks['quarter_pi']:.4f}"),
        _check("photon_bounded_quarter_pi", photon_max["quarter_pi"] <= 0.05,
               f"max photon {photon_max['quarter_pi']:.4f}"),
        _check("photon_bounded_pi", photon_max["pi"] <= 0.05,
               f"max photon {photon_max['pi']:.4f} (pair creation from "
               f"high phonon occupation is real at this pulse area)"),
    ]
    summary = {
        "scenario": cfg.scenario,
        "splitting": split.to_dict(),
        "levels_kept": dressed.dim,
        "peak_phonon": peaks,
        "max_photon": photon_max,
        "checks": checks,
    }
    files.append(_write_summary(out_dir, summary))
    return ScenarioResult(cfg.scenario, out_dir, files, summary)


def _run_converge(cfg: ScenarioConfig, out_dir: str) -> ScenarioResult:
    base = find_min_splitting(cfg.model, cfg.space, cfg.bracket)
    bigger = HilbertSpace(cfg.space.n_photon_max + 2,
                          cfg.space.n_phonon_max + 2)
    refined = find_min_splitting(cfg.model, bigger, cfg.bracket)
    rel = abs(refined.gap - base.gap) / base.gap
    checks = [_check("gap_converged_below_1pct", rel < 0.01,
                     f"relative gap change {rel:.2e} on cutoff increase")]
    summary = {
        "scenario": cfg.scenario,
        "base": {"space": [cfg.space.n_photon_max, cfg.space.n_phonon_max],
                 **base.to_dict()},
        "refined": {"space": [bigger.n_photon_max, bigger.n_phonon_max],
                    **refined.to_dict()},
        "relative_gap_change": rel,
        "checks": checks,
    }
    files = [_write_summary(out_dir, summary)]
    return ScenarioResult(cfg.scenario, out_dir, files, summary)


def run_scenario(config: ScenarioConfig) -> ScenarioResult:
    """Execute one scenario, writing its CSVs and summary.json."""
    if config.scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario {config.scenario!r}")
    out_dir = os.path.join(config.output_dir, config.scenario)
    os.makedirs(out_dir, exist_ok=True)
    if config.scenario == "levels_two_photon":
        return _run_levels(config, REF_TWO_PHOTON, out_dir)
    if config.scenario == "levels_one_photon":
        return _run_levels(config, REF_ONE_PHOTON, out_dir)
    if config.scenario == "splitting_vs_coupling":
        return _run_splitting_vs_coupling(config, out_dir)
    if config.scenario == "dynamics_two_photon":
        return _run_dynamics_two_photon(config, out_dir)
    if config.scenario == "dynamics_one_photon":
        return _run_dynamics_one_photon(config, out_dir)
    if config.scenario == "driven_dynamics":
        return _run_driven(config, out_dir)
    return _run_converge(config, out_dir)


def apply_overrides(d: dict, overrides: list[str]) -> dict:
    """Apply --set key.path=value pairs onto a config dictionary."""
    for item in overrides:
        if "=" not in item:
            raise ValueError(f"override {item!r} is not key=value")
        key, raw = item.split("=", 1)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = d
        parts = key.split(".")
        for part in parts[:-1]:
            if node.get(part) is None:
                node[part] = {}
            node = node[part]
        node[parts[-1]] = value
    return d
