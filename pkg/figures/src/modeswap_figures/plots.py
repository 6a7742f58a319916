"""Standard figure panels for protocol runs and decay sweeps."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .data import align_grids, load_run, load_summary

# strip the matplotlib version stamp so identical inputs give identical bytes
_PNG_METADATA = {"Software": "modeswap-figures"}


def _save(fig, out_path: str | Path):
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, dpi=150, metadata=_PNG_METADATA)
    plt.close(fig)


def plot_protocol(csv_path: str | Path, out_path: str | Path, title: str | None = None):
    """Three-panel protocol figure: pulses, occupations, transfer fidelity."""
    run = load_run(csv_path)
    tau = run["tau"]

    fig, axes = plt.subplots(3, 1, figsize=(6.0, 7.5), sharex=True)

    ax = axes[0]
    ax.plot(tau, run["G1"], label=r"$G_1$", color="tab:blue")
    ax.plot(tau, run["G2"], label=r"$G_2$", color="tab:orange")
    ax.set_ylabel("coupling (units of $G$)")
    ax.legend(loc="best")

    ax = axes[1]
    ax.plot(tau, run["n_a1"], label=r"$\langle n_{a_1}\rangle$", color="tab:blue")
    ax.plot(tau, run["n_b"], label=r"$\langle n_b\rangle$", color="tab:green")
    ax.plot(tau, run["n_a2"], label=r"$\langle n_{a_2}\rangle$", color="tab:orange")
    ax.plot(tau, run["n_dark"], label=r"$\langle n_{d}\rangle$", color="tab:gray",
            linestyle="--")
    ax.set_ylabel("occupation")
    ax.legend(loc="best")

    ax = axes[2]
    ax.plot(tau, run["fidelity"], color="tab:red")
    peak = run["fidelity"].argmax()
    ax.axvline(tau[peak], color="tab:gray", linestyle=":", linewidth=1)
    ax.annotate(
        f"peak {run['fidelity'][peak]:.3f}",
        (tau[peak], run["fidelity"][peak]),
        textcoords="offset points",
        xytext=(6, -12),
    )
    ax.set_ylabel("fidelity")
    ax.set_xlabel(r"$\tau$ (units of $1/G$)")
    ax.set_ylim(-0.02, 1.02)

    if title:
        fig.suptitle(title)
    fig.tight_layout()
    _save(fig, out_path)
    return out_path


def plot_sweep(
    summary_path: str | Path,
    out_path: str | Path,
    run_paths: list[str | Path] | None = None,
    title: str | None = None,
):
    """Sweep figure: fidelity traces per decay rate plus peak-vs-rate panel.

    ``run_paths`` optionally supplies the per-rate time series; without them
    only the summary panel is drawn.
    """
    summary = load_summary(summary_path)

    if run_paths:
        fig, (ax_traces, ax_peaks) = plt.subplots(
            1, 2, figsize=(9.0, 3.8), gridspec_kw={"width_ratios": [2, 1]}
        )
        runs = align_grids([load_run(p) for p in run_paths])
        for gamma, run in zip(summary["gamma_s"], runs):
            ax_traces.plot(run["tau"], run["fidelity"], label=rf"$\gamma_s = {gamma:g}$")
        ax_traces.set_xlabel(r"$\tau$ (units of $1/G$)")
        ax_traces.set_ylabel("fidelity")
        ax_traces.set_ylim(-0.02, 1.02)
        ax_traces.legend(loc="best")
    else:
        fig, ax_peaks = plt.subplots(figsize=(4.5, 3.8))

    ax_peaks.plot(summary["gamma_s"], summary["peak_fidelity"], marker="o",
                  color="tab:red")
    ax_peaks.set_xlabel(r"$\gamma_s$ (units of $G$)")
    ax_peaks.set_ylabel("peak fidelity")

    if title:
        fig.suptitle(title)
    fig.tight_layout()
    _save(fig, out_path)
    return out_path
