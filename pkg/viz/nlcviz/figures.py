"""Figure rendering for the four batch figure kinds.

energy_decay / separation come from CSV traces; director_quiver / vorticity
come from field snapshots. Vorticity uses centered finite differences on
the periodic grid so these scripts stay independent of the simulator's
spectral machinery.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .readers import read_separation, read_snapshot, read_trajectory

MAX_QUIVER = 32


def plot_energy(csv_path, out_path, logy: bool = False, title: str | None = None):
    """Line plot of total, kinetic, and director (elastic+penalty) energy."""
    cols = read_trajectory(csv_path)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(cols["t"], cols["E_total"], label="total", lw=2)
    ax.plot(cols["t"], cols["E_kin"], label="kinetic", lw=1)
    ax.plot(cols["t"], cols["E_elastic"] + cols["E_penalty"], label="director", lw=1)
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel("energy")
    ax.legend()
    ax.set_title(title or "energy decay")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def plot_separation(csv_path, out_path, logy: bool = True, title: str | None = None):
    """Squared separation of a perturbed trajectory pair versus time."""
    cols = read_separation(csv_path)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(cols["t"], cols["S"], lw=1.5)
    if logy and np.all(cols["S"] > 0):
        ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel(r"$\|\delta v\|^2 + \|\delta d\|_{H^1}^2$")
    ax.set_title(title or "trajectory separation")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def vorticity_fd(v_x: np.ndarray, v_y: np.ndarray) -> np.ndarray:
    """Centered-difference curl d(v_y)/dx - d(v_x)/dy on the periodic grid."""
    n = v_x.shape[0]
    h = 1.0 / n
    dvy_dx = (np.roll(v_y, -1, axis=1) - np.roll(v_y, 1, axis=1)) / (2 * h)
    dvx_dy = (np.roll(v_x, -1, axis=0) - np.roll(v_x, 1, axis=0)) / (2 * h)
    return dvy_dx - dvx_dy


def _quiver_panel(ax, d_x, d_y):
    n = d_x.shape[0]
    stride = max(1, int(np.ceil(n / MAX_QUIVER)))
    coords = np.arange(0, n, stride) / n
    X, Y = np.meshgrid(coords, coords)
    ax.quiver(
        X,
        Y,
        d_x[::stride, ::stride],
        d_y[::stride, ::stride],
        pivot="middle",
        scale=40,
        width=0.003,
    )
    ax.set_aspect("equal")
    ax.set_title("director field")
    ax.set_xlabel("x")
    ax.set_ylabel("y")


def _vorticity_panel(ax, fig, v_x, v_y):
    w = vorticity_fd(v_x, v_y)
    lim = max(np.max(np.abs(w)), 1e-30)
    im = ax.imshow(
        w,
        origin="lower",
        extent=(0, 1, 0, 1),
        cmap="RdBu_r",
        vmin=-lim,
        vmax=lim,
    )
    fig.colorbar(im, ax=ax, shrink=0.8)
    ax.set_title("vorticity")
    ax.set_xlabel("x")
    ax.set_ylabel("y")


def plot_fields(snapshot_path, out_path, panels=("quiver", "vorticity")):
    """Director quiver and/or finite-difference vorticity heatmap.

    With both panels selected (the default) they are drawn side by side.
    """
    n, t, v_x, v_y, d_x, d_y = read_snapshot(snapshot_path)
    fig, axes = plt.subplots(1, len(panels), figsize=(5.5 * len(panels), 5), squeeze=False)
    for ax, panel in zip(axes[0], panels):
        if panel == "quiver":
            _quiver_panel(ax, d_x, d_y)
        elif panel == "vorticity":
            _vorticity_panel(ax, fig, v_x, v_y)
        else:
            raise ValueError(f"unknown panel {panel!r}")
    fig.suptitle(f"t = {t:g}, n = {n}")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path
