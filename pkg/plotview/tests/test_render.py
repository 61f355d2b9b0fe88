import json
import os
import subprocess
import sys

import numpy as np
import pytest

from vrplot import FIGURES, RenderError, figure_spec, render, render_all
from vrplot.cli import main

TS_HEADER = "t,omega_eff_t,exp_atom,exp_photon,exp_phonon,g2_qp,trace,purity"


def write_timeseries(path, n=50):
    t = np.linspace(0, 900, n)
    om = 0.0035
    atom = np.sin(om * t) ** 2
    phonon = np.cos(om * t) ** 2
    photon = 0.01 * np.ones(n)
    rows = np.column_stack([t, om * t, atom, photon, phonon, atom,
                            np.ones(n), np.ones(n)])
    with open(path, "w") as f:
        f.write(TS_HEADER + "\n")
        for row in rows:
            f.write(",".join(f"{x:.12g}" for x in row) + "\n")


def write_levels(path, n=60):
    wq = np.linspace(0.8, 1.3, n)
    levels = [np.zeros(n), np.abs(wq - 1.052) + 0.003, 1.05 * np.ones(n),
              wq + 0.4]
    with open(path, "w") as f:
        f.write("omega_q," + ",".join(f"level_{i}" for i in range(4)) + "\n")
        for i in range(n):
            f.write(",".join(f"{v[i]:.12g}" for v in [wq] + levels) + "\n")


def write_splitting(path):
    with open(path, "w") as f:
        json.dump({"omega_q_min": 1.052, "gap": 0.007, "omega_eff": 0.0035,
                   "branch_states": [2, 3],
                   "hybrid_overlaps": [[0.5, 0.5], [0.5, 0.5]],
                   "targets": ["|0,1,g>", "|0,0,e>"]}, f)


@pytest.fixture
def synthetic_run(tmp_path):
    """Contract-conformant output tree for every scenario a figure reads."""
    for scen in ("levels_two_photon", "levels_one_photon"):
        d = tmp_path / scen
        d.mkdir()
        write_levels(d / "levels.csv")
        write_splitting(d / "splitting.json")
    d = tmp_path / "splitting_vs_coupling"
    d.mkdir()
    lam = np.linspace(0.005, 0.12, 10)
    with open(d / "splitting_vs_coupling.csv", "w") as f:
        f.write("lambda,gap_numeric,gap_perturbative,omega_q_min,"
                "relative_mismatch\n")
        for x in lam:
            f.write(f"{x:.12g},{2.8*x*x:.12g},{2.78*x*x:.12g},1.052,0.01\n")
    d = tmp_path / "dynamics_two_photon"
    d.mkdir()
    for name in ("ideal", "cavity_loss", "all_loss"):
        write_timeseries(d / f"timeseries_{name}.csv")
    d = tmp_path / "driven_dynamics"
    d.mkdir()
    for name in ("quarter_pi", "pi"):
        write_timeseries(d / f"timeseries_{name}.csv")
    d = tmp_path / "dynamics_one_photon"
    d.mkdir()
    write_timeseries(d / "timeseries_ideal.csv")
    return tmp_path


def test_render_all_synthetic(synthetic_run, tmp_path):
    out = tmp_path / "figs"
    results = render_all(FIGURES, str(synthetic_run), str(out))
    assert len(results) == 6
    for r in results:
        assert len(r.paths) == 2  # png and svg
        for p in r.paths:
            assert os.path.getsize(p) > 0


def test_levels_axes_ranges(synthetic_run, tmp_path):
    spec = figure_spec("fig2", str(synthetic_run), str(tmp_path / "f"))
    r = render(spec)
    assert r.xlim == (0.8, 1.3)
    assert r.ylim == (0.0, 2.3)
    spec7 = figure_spec("fig7", str(synthetic_run), str(tmp_path / "f"))
    # fig7 reads the one-photon sweep with its own axis window
    assert spec7.xlim == (0.05, 0.45)


def test_rerender_is_idempotent(synthetic_run, tmp_path):
    spec = figure_spec("fig8", str(synthetic_run), str(tmp_path / "f"))
    first = render(spec)
    sizes = [os.path.getsize(p) for p in first.paths]
    again = render(spec)
    assert again.paths == first.paths
    assert [os.path.getsize(p) for p in again.paths] == sizes


def test_missing_input_fails_descriptively(tmp_path):
    spec = figure_spec("fig5", str(tmp_path), str(tmp_path / "f"))
    with pytest.raises(RenderError, match="not found"):
        render(spec)


def test_empty_csv_fails_without_image(synthetic_run, tmp_path):
    target = synthetic_run / "dynamics_one_photon" / "timeseries_ideal.csv"
    with open(target, "w") as f:
        f.write(TS_HEADER + "\n")
    out = tmp_path / "f"
    spec = figure_spec("fig8", str(synthetic_run), str(out))
    with pytest.raises(RenderError, match="no data rows"):
        render(spec)
    assert not os.path.exists(out / "fig8.png")


def test_malformed_csv_rejected(synthetic_run, tmp_path):
    target = synthetic_run / "dynamics_one_photon" / "timeseries_ideal.csv"
    with open(target, "w") as f:
        f.write(TS_HEADER + "\n1,2,3\n")
    spec = figure_spec("fig8", str(synthetic_run), str(tmp_path / "f"))
    with pytest.raises(RenderError):
        render(spec)


def test_unknown_figure_rejected(tmp_path):
    with pytest.raises(RenderError):
        figure_spec("fig1", str(tmp_path), str(tmp_path))


def test_cli_subset(synthetic_run, tmp_path, capsys):
    out = tmp_path / "cli_figs"
    code = main(["--in", str(synthetic_run), "--figs", "fig2,fig8",
                 "--out", str(out)])
    assert code == 0
    assert sorted(os.listdir(out)) == ["fig2.png", "fig2.svg",
                                       "fig8.png", "fig8.svg"]


def test_cli_unknown_figure(tmp_path, capsys):
    code = main(["--in", str(tmp_path), "--figs", "fig9",
                 "--out", str(tmp_path)])
    assert code == 1
    assert "unknown figures" in capsys.readouterr().err


def test_cli_missing_input(tmp_path, capsys):
    code = main(["--in", str(tmp_path / "nothing"), "--figs", "fig2",
                 "--out", str(tmp_path)])
    assert code == 1


@pytest.fixture(scope="session")
def completed_scenarios(tmp_path_factory):
    """Real scenario output produced through the simulator CLI."""
    root = tmp_path_factory.mktemp("scenario_out")
    jobs = [
        ["levels_two_photon", "--set", "sweep.num=81"],
        ["levels_one_photon", "--set", "sweep.num=81"],
        ["splitting_vs_coupling", "--set", "sweep.num=10"],
        ["dynamics_two_photon", "--set", "n_samples=201"],
        ["dynamics_one_photon", "--set", "n_samples=201"],
        ["driven_dynamics", "--set", "n_samples=161"],
    ]
    for job in jobs:
        proc = subprocess.run(
            [sys.executable, "-m", "vrsim.cli", job[0], "--out", str(root)]
            + job[1:], capture_output=True, text=True)
        # exit 2 = completed with recorded check failures; output still valid
        assert proc.returncode in (0, 2), proc.stderr
    return root


def test_acceptance_figures_from_real_run(completed_scenarios, tmp_path):
    out = tmp_path / "figs"
    results = render_all(FIGURES, str(completed_scenarios), str(out))
    assert [r.name for r in results] == list(FIGURES)
    for r in results:
        for p in r.paths:
            assert os.path.getsize(p) > 1000, p
    by_name = {r.name: r for r in results}
    assert by_name["fig2"].xlim == (0.8, 1.3)
    assert by_name["fig7"].xlim == (0.05, 0.45)
    assert by_name["fig2"].ylim == (0.0, 2.3)
    assert by_name["fig5"].ylim == (-0.02, 1.1)
