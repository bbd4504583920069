"""Figure rendering for the report-producing CLI paths.

Renders to files only (Agg backend); the CSV outputs remain the primary
machine-readable artifacts and the figures are companions for quick
inspection.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_region_figure(points, path: str, title: str = "No-feedback capacity region boundary"):
    """Rate-region boundary curve from a list of RegionPoint."""
    r1 = [pt.rates.r1_bits for pt in points]
    r2 = [pt.rates.r2_bits for pt in points]
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    ax.plot(r1, r2, "-", color="C0")
    ax.fill_between(r1, 0.0, r2, color="C0", alpha=0.15)
    ax.set_xlabel("$R_1$ [bits/use]")
    ax.set_ylabel("$R_2$ [bits/use]")
    ax.set_title(title)
    ax.grid(True, alpha=0.4)
    ax.set_xlim(left=0.0)
    ax.set_ylim(bottom=0.0)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_phase_map_figure(rows, path: str):
    """Scatter of the feedback-useless classification with the y = x + x^2 boundary curve."""
    xs = np.array([r.x for r in rows])
    ys = np.array([r.y for r in rows])
    useless = np.array([r.useless for r in rows], dtype=bool)
    fig, ax = plt.subplots(figsize=(5.0, 4.6))
    ax.scatter(xs[useless], ys[useless], s=3, color="0.45",
               label="feedback provably useless")
    ax.scatter(xs[~useless], ys[~useless], s=3, color="C1", alpha=0.5,
               label="not covered")
    if xs.size:
        cx = np.linspace(0.0, float(np.max(xs)), 400)
        curve = cx + cx ** 2
        mask = curve <= float(np.max(ys)) * 1.02
        ax.plot(cx[mask], curve[mask], "k-", lw=1.2, label="$y = x + x^2$")
        ax.plot(cx, cx, "k--", lw=0.8, label="$y = x$")
    ax.set_xlabel(r"$\sigma_1^2/\sigma_{fb}^2$")
    ax.set_ylabel(r"$\sigma_2^2/\sigma_{fb}^2$")
    ax.legend(loc="upper left", fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
