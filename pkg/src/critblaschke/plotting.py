"""Figures written next to the CSV/JSON outputs of the command-line tools."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.patches import Circle  # noqa: E402

FIGSIZE = (5.5, 5.0)
DPI = 150


def _disk_axes(ax):
    ax.add_patch(Circle((0, 0), 1.0, fill=False, color="k", lw=0.8))
    ax.set_xlim(-1.05, 1.05)
    ax.set_ylim(-1.05, 1.05)
    ax.set_aspect("equal")
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")


def plot_metric_field(samples, path, zeros=(), critical_points=(), title=None) -> Path:
    """Scatter-shaded map of the distance ratio R_f, with zeros and critical points marked."""
    path = Path(path)
    z = np.array([s.z for s in samples])
    ratio = np.array([s.ratio for s in samples])
    fig, ax = plt.subplots(figsize=FIGSIZE)
    n = max(int(np.sqrt(len(z))), 1)
    sc = ax.scatter(z.real, z.imag, c=ratio, s=max(2.0, 4000.0 / n**2), marker="s",
                    cmap="viridis", vmin=0.0, vmax=1.0, linewidths=0)
    cbar = fig.colorbar(sc, ax=ax)
    cbar.set_label("distance ratio $R_f$")
    _mark(ax, zeros, critical_points)
    _disk_axes(ax)
    ax.set_title(title or "pull-back / Poincare density ratio")
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path


def plot_configuration(path, zeros=(), critical_points=(), title=None) -> Path:
    """Zeros (including the one at 0) and critical points of a normalized product."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    _mark(ax, zeros, critical_points)
    _disk_axes(ax)
    ax.legend(loc="upper right", fontsize=8)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path


def _mark(ax, zeros, critical_points):
    zs = np.array([0j] + [complex(a) for a in zeros])
    cs = np.array([complex(c) for c in critical_points])
    ax.plot(zs.real, zs.imag, "o", mfc="white", mec="tab:red", label="zeros")
    if len(cs):
        ax.plot(cs.real, cs.imag, "x", color="tab:blue", label="critical points")
