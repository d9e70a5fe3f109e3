"""Figures for benchmark reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _fit_line(ax, xs, ys, color, label):
    slope, intercept = np.polyfit(np.log(xs), np.log(ys), 1)
    grid = np.geomspace(min(xs), max(xs), 50)
    ax.plot(grid, np.exp(intercept) * grid ** slope, "--", color=color, lw=1,
            label=f"{label} fit, slope {slope:.2f}")


def plot_bench(rows, path, title=None):
    """Log-log panels of edge count and wall time against word length."""
    xs = np.array([r.length for r in rows], dtype=float)
    edges = np.array([max(r.edges, 1) for r in rows], dtype=float)
    secs = np.array([r.nanos for r in rows], dtype=float) / 1e9

    fig, (left, right) = plt.subplots(1, 2, figsize=(9, 3.6))
    left.loglog(xs, edges, "o-", color="C0", label="GSS edges")
    left.loglog(xs, edges[0] * (xs / xs[0]) ** 2, ":", color="grey", label="quadratic")
    right.loglog(xs, secs, "s-", color="C1", label="wall time")
    right.loglog(xs, secs[0] * (xs / xs[0]) ** 3, ":", color="grey", label="cubic")
    if len(rows) >= 2:
        _fit_line(left, xs, edges, "C0", "edges")
        _fit_line(right, xs, secs, "C1", "time")
    left.set_xlabel("word length")
    left.set_ylabel("edges")
    right.set_xlabel("word length")
    right.set_ylabel("seconds")
    for ax in (left, right):
        ax.legend(fontsize=8, frameon=False)
        ax.grid(True, which="both", lw=0.3, alpha=0.5)
    if title:
        fig.suptitle(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
