import json
import os

import numpy as np
import pytest

from vrsim.cli import main
from vrsim.scenarios import (SCENARIOS, ScenarioConfig, apply_overrides,
                             default_config, run_scenario)


def test_default_config_paper_values():
    cfg = default_config("levels_two_photon", output_dir="x")
    assert cfg.model.omega_m == 1.05
    assert cfg.model.kappa == cfg.model.lam == 0.05
    cfg1 = default_config("levels_one_photon", output_dir="x")
    assert cfg1.model.kappa == 0.08
    assert cfg1.model.omega_m == 1.2
    assert cfg1.model.coupling_kind == "one_photon"


def test_default_config_derived_drive(two_photon_splitting):
    cfg = default_config("driven_dynamics", output_dir="x")
    assert cfg.drive.omega_d == cfg.model.omega_m
    # pulse width is a tenth of the inverse exchange frequency
    assert cfg.drive.sigma_pulse * 10 * two_photon_splitting.omega_eff \
        == pytest.approx(1.0, rel=1e-9)
    # atomic frequency pinned at the located anticrossing
    assert cfg.model.omega_q == pytest.approx(
        two_photon_splitting.omega_q_min, abs=1e-9)
    assert cfg.lindblad.gamma_a == cfg.lindblad.gamma_m \
        == cfg.lindblad.gamma_q == 1e-4


def test_default_config_unknown_scenario():
    with pytest.raises(ValueError):
        default_config("nope")


def test_config_dict_roundtrip():
    cfg = default_config("levels_two_photon", output_dir="somewhere")
    d = cfg.to_dict()
    assert d["model"]["lambda"] == 0.05  # published symbol in the file format
    back = ScenarioConfig.from_dict(json.loads(json.dumps(d)))
    assert back.model == cfg.model
    assert back.space == cfg.space
    assert back.sweep == cfg.sweep
    assert back.output_dir == "somewhere"


def test_apply_overrides_nested_and_typed():
    d = {"model": {"kappa": 0.05}, "n_samples": 100}
    apply_overrides(d, ["model.kappa=0.08", "n_samples=50",
                        "model.coupling_kind=one_photon"])
    assert d["model"]["kappa"] == 0.08
    assert d["n_samples"] == 50
    assert d["model"]["coupling_kind"] == "one_photon"
    with pytest.raises(ValueError):
        apply_overrides(d, ["oops"])


def test_scenario_names_stable():
    assert set(SCENARIOS) == {
        "levels_two_photon", "splitting_vs_coupling", "dynamics_two_photon",
        "driven_dynamics", "levels_one_photon", "dynamics_one_photon",
        "converge"}


def test_converge_scenario(tmp_path):
    cfg = default_config("converge", output_dir=str(tmp_path))
    result = run_scenario(cfg)
    assert result.checks_passed
    assert os.path.exists(os.path.join(tmp_path, "converge", "summary.json"))
    with open(result.files[-1]) as f:
        summary = json.load(f)
    assert summary["relative_gap_change"] < 0.01


def test_levels_scenario_outputs_and_determinism(tmp_path):
    cfg = default_config("levels_two_photon", output_dir=str(tmp_path / "a"))
    cfg.sweep.num = 41
    result = run_scenario(cfg)
    assert result.checks_passed
    levels_a = os.path.join(tmp_path, "a", "levels_two_photon", "levels.csv")
    with open(levels_a, "rb") as f:
        bytes_a = f.read()
    # identical config, fresh run: byte-identical data
    cfg_b = default_config("levels_two_photon", output_dir=str(tmp_path / "b"))
    cfg_b.sweep.num = 41
    run_scenario(cfg_b)
    with open(os.path.join(tmp_path, "b", "levels_two_photon",
                           "levels.csv"), "rb") as f:
        bytes_b = f.read()
    assert bytes_a == bytes_b
    with open(os.path.join(tmp_path, "a", "levels_two_photon",
                           "splitting.json")) as f:
        split = json.load(f)
    assert split["gap"] == pytest.approx(7.007e-3, rel=1e-3)


def test_summary_written_even_when_checks_fail(tmp_path):
    # an intentionally tight space shifts nothing here, so force a failing
    # check by running the one-photon levels, whose quoted reference values
    # are not met by the stated model (see notes)
    cfg = default_config("levels_one_photon", output_dir=str(tmp_path))
    cfg.sweep.num = 31
    result = run_scenario(cfg)
    assert not result.checks_passed
    with open(os.path.join(tmp_path, "levels_one_photon",
                           "summary.json")) as f:
        summary = json.load(f)
    failed = [c for c in summary["checks"] if not c["passed"]]
    assert failed, "failures must be recorded, not swallowed"
    assert summary["splitting"]["gap"] > 0


def test_cli_converge_exit_zero(tmp_path, capsys):
    code = main(["converge", "--out", str(tmp_path)])
    out = capsys.readouterr().out
    assert code == 0
    assert "[pass]" in out


def test_cli_exit_two_on_failed_checks(tmp_path):
    code = main(["levels_one_photon", "--out", str(tmp_path),
                 "--set", "sweep.num=31"])
    assert code == 2


def test_cli_rejects_unknown_scenario():
    with pytest.raises(SystemExit):
        main(["not_a_scenario"])


def test_cli_bad_override_exit_one(tmp_path, capsys):
    code = main(["converge", "--out", str(tmp_path), "--set", "garbage"])
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_cli_config_file_merge(tmp_path):
    config_path = tmp_path / "cfg.json"
    with open(config_path, "w") as f:
        json.dump({"sweep": {"num": 31}, "n_levels_plot": 4}, f)
    code = main(["levels_two_photon", "--config", str(config_path),
                 "--out", str(tmp_path)])
    assert code == 0
    data = np.genfromtxt(tmp_path / "levels_two_photon" / "levels.csv",
                         delimiter=",", names=True)
    assert len(data.dtype.names) == 1 + 4
    assert data.shape == (31,)


def test_cli_env_var_output_root(tmp_path, monkeypatch):
    monkeypatch.setenv("VRSIM_OUT", str(tmp_path / "envroot"))
    code = main(["converge"])
    assert code == 0
    assert os.path.exists(tmp_path / "envroot" / "converge" / "summary.json")
