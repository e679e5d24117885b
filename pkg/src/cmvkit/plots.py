"""Static panel plots of circle spectra, rendered headlessly to image files."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .errors import DomainError

__all__ = ["render_panels", "render_support"]

_CIRCLE_T = np.linspace(0.0, 2.0 * math.pi, 512)


def _draw_circle(ax):
    ax.plot(np.cos(_CIRCLE_T), np.sin(_CIRCLE_T), color="0.6", linewidth=0.8, zorder=1)
    ax.set_xlim(-1.15, 1.15)
    ax.set_ylim(-1.15, 1.15)
    ax.set_aspect("equal")
    ax.set_xticks(())
    ax.set_yticks(())


def render_panels(panels, path: str, suptitle: str | None = None) -> None:
    """Render one panel per (label, points) pair; points are complex values.

    Panels are laid out on a two-column grid in input order; each shows the
    unit circle with the points as small dots.
    """
    panels = [(str(label), np.asarray(list(pts), dtype=np.complex128)) for label, pts in panels]
    if not panels:
        raise DomainError("nothing to plot")
    cols = 2 if len(panels) > 1 else 1
    rows = (len(panels) + cols - 1) // cols
    fig, axes = plt.subplots(rows, cols, figsize=(4.0 * cols, 4.0 * rows), squeeze=False)
    flat = axes.ravel()
    for ax, (label, pts) in zip(flat, panels):
        _draw_circle(ax)
        ax.plot(pts.real, pts.imag, ".", color="black", markersize=3.0, zorder=2)
        ax.set_title(label, fontsize=10)
    for ax in flat[len(panels):]:
        ax.set_visible(False)
    if suptitle:
        fig.suptitle(suptitle, fontsize=11)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_support(estimate, path: str, suptitle: str | None = None) -> None:
    """Render a support estimate: persistent points solid, sporadic ones open."""
    doubles = np.array([complex(c.point) for c in estimate.doubles], dtype=np.complex128)
    weak = np.array([complex(c.point) for c in estimate.weak_only], dtype=np.complex128)
    fig, ax = plt.subplots(figsize=(5.0, 5.0))
    _draw_circle(ax)
    if weak.size:
        ax.plot(weak.real, weak.imag, "o", markerfacecolor="none",
                markeredgecolor="0.45", markersize=4.0, zorder=2, label="weak-only")
    if doubles.size:
        ax.plot(doubles.real, doubles.imag, ".", color="black", markersize=5.0,
                zorder=3, label="double")
    ax.legend(loc="upper left", fontsize=8, frameon=False)
    ax.set_title(f"orders {', '.join(str(o) for o in estimate.orders)}", fontsize=10)
    if suptitle:
        fig.suptitle(suptitle, fontsize=11)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
