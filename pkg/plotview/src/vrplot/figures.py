"""Render simulator CSV output into the reference figure layouts.

Consumes only the documented file contract: level sweeps
(omega_q,level_0..level_N), time series
(t,omega_eff_t,exp_atom,exp_photon,exp_phonon,g2_qp,trace,purity),
the coupling-sweep table, and splitting.json sidecars. No access to
simulator internals, so renders are reproducible from archived output.
"""

import json
import os
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


class RenderError(RuntimeError):
    """Missing or ill-formed input; no image is produced."""


FIGURES = ("fig2", "fig4", "fig5", "fig6", "fig7", "fig8")

# caption line styles: atom black, photon red, phonon blue, correlator yellow
ATOM_STYLE = dict(color="black", linestyle="-", label=r"$\langle C^-C^+\rangle$")
PHONON_STYLE = dict(color="tab:blue", linestyle="--",
                    label=r"$\langle B^-B^+\rangle$")
PHOTON_DOTTED = dict(color="tab:red", linestyle=":",
                     label=r"$\langle A^-A^+\rangle$")
PHOTON_SOLID = dict(color="tab:red", linestyle="-",
                    label=r"$\langle A^-A^+\rangle$")
G2_STYLE = dict(color="gold", linestyle="--", label=r"$G^{(2)}_{q\!-\!p}$")


@dataclass
class FigureSpec:
    """One output figure: its inputs, axes contract, and destination."""

    name: str
    scenario: str
    inputs: list[str]
    xlabel: str
    ylabel: str
    xlim: tuple[float, float] | None
    ylim: tuple[float, float] | None
    output_stem: str
    extras: dict = field(default_factory=dict)


@dataclass
class RenderResult:
    name: str
    paths: list[str]
    xlim: tuple[float, float]
    ylim: tuple[float, float]


def figure_spec(name: str, in_dir: str, out_dir: str) -> FigureSpec:
    if name == "fig2":
        return FigureSpec(
            name=name, scenario="levels_two_photon",
            inputs=[os.path.join(in_dir, "levels_two_photon", "levels.csv"),
                    os.path.join(in_dir, "levels_two_photon",
                                 "splitting.json")],
            xlabel=r"$\omega_q/\omega_c$", ylabel=r"$\omega/\omega_c$",
            xlim=(0.8, 1.3), ylim=(0.0, 2.3),
            output_stem=os.path.join(out_dir, "fig2"))
    if name == "fig7":
        return FigureSpec(
            name=name, scenario="levels_one_photon",
            inputs=[os.path.join(in_dir, "levels_one_photon", "levels.csv"),
                    os.path.join(in_dir, "levels_one_photon",
                                 "splitting.json")],
            xlabel=r"$\omega_q/\omega_c$", ylabel=r"$\omega/\omega_c$",
            xlim=(0.05, 0.45), ylim=(0.0, 2.3),
            output_stem=os.path.join(out_dir, "fig7"))
    if name == "fig4":
        return FigureSpec(
            name=name, scenario="splitting_vs_coupling",
            inputs=[os.path.join(in_dir, "splitting_vs_coupling",
                                 "splitting_vs_coupling.csv")],
            xlabel=r"$\lambda/\omega_c$",
            ylabel=r"$2\Omega_{\mathrm{eff}}/\omega_c$",
            xlim=None, ylim=None,  # log-log, data-driven
            output_stem=os.path.join(out_dir, "fig4"))
    if name == "fig5":
        base = os.path.join(in_dir, "dynamics_two_photon")
        return FigureSpec(
            name=name, scenario="dynamics_two_photon",
            inputs=[os.path.join(base, "timeseries_ideal.csv"),
                    os.path.join(base, "timeseries_cavity_loss.csv"),
                    os.path.join(base, "timeseries_all_loss.csv")],
            xlabel=r"$\Omega_{\mathrm{eff}}t$", ylabel="populations",
            xlim=None, ylim=(-0.02, 1.1),
            output_stem=os.path.join(out_dir, "fig5"),
            extras={"panels": ["(a)", "(b)", "(c)"],
                    "photon_style": PHOTON_DOTTED})
    if name == "fig6":
        base = os.path.join(in_dir, "driven_dynamics")
        return FigureSpec(
            name=name, scenario="driven_dynamics",
            inputs=[os.path.join(base, "timeseries_quarter_pi.csv"),
                    os.path.join(base, "timeseries_pi.csv")],
            xlabel=r"$\Omega_{\mathrm{eff}}t$", ylabel="populations",
            xlim=None, ylim=None,
            output_stem=os.path.join(out_dir, "fig6"),
            extras={"panels": [r"(a) $\Lambda=\pi/4$", r"(b) $\Lambda=\pi$"],
                    "photon_style": PHOTON_DOTTED})
    if name == "fig8":
        return FigureSpec(
            name=name, scenario="dynamics_one_photon",
            inputs=[os.path.join(in_dir, "dynamics_one_photon",
                                 "timeseries_ideal.csv")],
            xlabel=r"$\Omega_{\mathrm{eff}}t$", ylabel="populations",
            xlim=None, ylim=(-0.02, 1.2),
            output_stem=os.path.join(out_dir, "fig8"),
            extras={"photon_style": PHOTON_SOLID, "with_g2": True})
    raise RenderError(f"unknown figure {name!r}; choose from {FIGURES}")


def _load_csv(path: str, min_columns: int) -> tuple[list[str], np.ndarray]:
    if not os.path.exists(path):
        raise RenderError(f"input not found: {path}")
    with open(path) as f:
        header = f.readline().strip()
        body = f.read().strip()
    if not header:
        raise RenderError(f"empty file: {path}")
    names = header.split(",")
    if len(names) < min_columns:
        raise RenderError(f"{path}: expected at least {min_columns} columns, "
                          f"found {len(names)}")
    if not body:
        raise RenderError(f"{path}: no data rows")
    data = np.genfromtxt(path, delimiter=",", skip_header=1)
    data = np.atleast_2d(data)
    if data.shape[1] != len(names):
        raise RenderError(f"{path}: ragged rows")
    if np.isnan(data).any():
        raise RenderError(f"{path}: non-numeric cells")
    return names, data


def _load_splitting(path: str) -> dict:
    if not os.path.exists(path):
        raise RenderError(f"input not found: {path}")
    with open(path) as f:
        d = json.load(f)
    for key in ("omega_q_min", "gap"):
        if key not in d:
            raise RenderError(f"{path}: missing key {key!r}")
    return d


def _save(fig, stem: str) -> list[str]:
    paths = []
    for ext in ("png", "svg"):
        p = f"{stem}.{ext}"
        fig.savefig(p, dpi=200, bbox_inches="tight")
        paths.append(p)
    plt.close(fig)
    return paths


def _render_levels(spec: FigureSpec) -> RenderResult:
    names, data = _load_csv(spec.inputs[0], min_columns=2)
    split = _load_splitting(spec.inputs[1])
    wq = data[:, 0]
    fig, ax = plt.subplots(figsize=(4.6, 3.6))
    for b in range(1, data.shape[1]):
        ax.plot(wq, data[:, b], lw=1.0, color="tab:blue")
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(spec.ylabel)
    ax.set_xlim(*spec.xlim)
    ax.set_ylim(*spec.ylim)

    # enlarged view of the anticrossing, marked by a circle on the main axes
    wq0, gap = split["omega_q_min"], split["gap"]
    i0 = int(np.argmin(np.abs(wq - wq0)))
    pair = np.sort(data[i0, 1:])
    mid = None
    for lo, hi in zip(pair, pair[1:]):
        if abs((hi - lo) - gap) < 5 * gap:
            mid = 0.5 * (lo + hi)
            break
    if mid is not None:
        ax.plot([wq0], [mid], "o", ms=14, mfc="none", mec="red", mew=1.2)
        half_x = max(12 * gap, 8 * (wq[1] - wq[0]))
        axins = ax.inset_axes([0.58, 0.08, 0.38, 0.34])
        for b in range(1, data.shape[1]):
            axins.plot(wq, data[:, b], lw=1.0, color="tab:blue")
        axins.set_xlim(wq0 - half_x, wq0 + half_x)
        axins.set_ylim(mid - 4 * gap, mid + 4 * gap)
        axins.tick_params(labelsize=6)
    fig.tight_layout()
    return RenderResult(spec.name, _save(fig, spec.output_stem),
                        ax.get_xlim(), ax.get_ylim())


def _render_coupling_sweep(spec: FigureSpec) -> RenderResult:
    names, data = _load_csv(spec.inputs[0], min_columns=3)
    lam, numeric, pert = data[:, 0], data[:, 1], data[:, 2]
    fig, ax = plt.subplots(figsize=(4.6, 3.4))
    ax.loglog(lam, pert, "-", color="tab:blue", lw=1.4,
              label="second-order theory")
    ax.loglog(lam, numeric, "o", color="tab:red", ms=4.5, mfc="none",
              label="numerical splitting")
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(spec.ylabel)
    ax.legend(fontsize=8, frameon=False)
    fig.tight_layout()
    return RenderResult(spec.name, _save(fig, spec.output_stem),
                        ax.get_xlim(), ax.get_ylim())


def _plot_timeseries(ax, names, data, photon_style, with_g2=False):
    cols = {n: data[:, i] for i, n in enumerate(names)}
    x = cols["omega_eff_t"]
    ax.plot(x, cols["exp_atom"], **ATOM_STYLE)
    ax.plot(x, cols["exp_photon"], **photon_style)
    ax.plot(x, cols["exp_phonon"], **PHONON_STYLE)
    if with_g2:
        ax.plot(x, cols["g2_qp"], **G2_STYLE)
    return x


def _render_dynamics(spec: FigureSpec) -> RenderResult:
    panels = spec.extras.get("panels")
    photon_style = spec.extras.get("photon_style", PHOTON_DOTTED)
    with_g2 = spec.extras.get("with_g2", False)
    n = len(spec.inputs)
    fig, axes = plt.subplots(n, 1, figsize=(4.8, 2.4 * n), sharex=False,
                             squeeze=False)
    first_ax = axes[0][0]
    for i, path in enumerate(spec.inputs):
        ax = axes[i][0]
        names, data = _load_csv(path, min_columns=8)
        x = _plot_timeseries(ax, names, data, photon_style, with_g2)
        ax.set_xlim(x[0], x[-1])
        if spec.ylim is not None:
            ax.set_ylim(*spec.ylim)
        ax.set_ylabel(spec.ylabel)
        if panels:
            ax.set_title(panels[i], fontsize=9, loc="left")
        if i == 0:
            ax.legend(fontsize=7, frameon=False, ncol=2)
    axes[-1][0].set_xlabel(spec.xlabel)
    fig.tight_layout()
    return RenderResult(spec.name, _save(fig, spec.output_stem),
                        first_ax.get_xlim(), first_ax.get_ylim())


def render(spec: FigureSpec) -> RenderResult:
    """Produce PNG and SVG for one figure; raises RenderError on bad input."""
    os.makedirs(os.path.dirname(spec.output_stem) or ".", exist_ok=True)
    if spec.name in ("fig2", "fig7"):
        return _render_levels(spec)
    if spec.name == "fig4":
        return _render_coupling_sweep(spec)
    if spec.name in ("fig5", "fig6", "fig8"):
        return _render_dynamics(spec)
    raise RenderError(f"unknown figure {spec.name!r}")


def render_all(names, in_dir: str, out_dir: str) -> list[RenderResult]:
    return [render(figure_spec(name, in_dir, out_dir)) for name in names]
