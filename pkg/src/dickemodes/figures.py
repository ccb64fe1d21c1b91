"""Figure rendering for the CLI report path.

Each function draws one matplotlib figure from already-computed data and
saves it next to the delimited output.  Rendering is headless (Agg).
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _save(fig, path) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_populations(trajectory, path, time_scale=1.0, time_label="t") -> None:
    n = trajectory.params.n_emitters
    t = trajectory.grid.points * time_scale
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    step = max(1, (n + 1) // 12)
    for m in range(0, n + 1, step):
        ax.plot(t, trajectory.populations[:, m], lw=1.0, label=f"m={m}")
    ax.set_xlabel(time_label)
    ax.set_ylabel(r"$\pi_m$")
    ax.legend(fontsize=7, ncol=2)
    _save(fig, path)


def plot_intensity(blocks, path, time_scale=1.0, time_label="t") -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for method, times, samples in blocks:
        ax.plot(np.asarray(times) * time_scale, samples, lw=1.2, label=method)
    ax.set_xlabel(time_label)
    ax.set_ylabel("intensity")
    ax.legend()
    _save(fig, path)


def plot_kernel(kernel, path, time_scale=1.0, time_label="t") -> None:
    t = kernel.grid.points * time_scale
    fig, ax = plt.subplots(figsize=(5.0, 4.2))
    pcm = ax.pcolormesh(t, t, kernel.values, shading="auto")
    fig.colorbar(pcm, ax=ax, label="K(t, t')")
    ax.set_xlabel(time_label)
    ax.set_ylabel(time_label + "'")
    _save(fig, path)


def plot_modes(grid, modes, occupations, path, time_scale=1.0, time_label="t") -> None:
    t = grid.points * time_scale
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for i, v in enumerate(modes):
        ax.plot(t, v, lw=1.2, label=f"n{i + 1} = {occupations[i]:.4g}")
    ax.axhline(0.0, color="k", lw=0.6)
    ax.set_xlabel(time_label)
    ax.set_ylabel("mode amplitude")
    ax.legend(fontsize=8)
    _save(fig, path)
