"""Render figure PNGs from the same rows the CLI writes as CSV."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def plot_explicit(sweeps: Mapping[int, Sequence[Sequence[float]]], path: Path, title: str) -> Path:
    """One panel per zero count: the exact half-jump sum in blue, the formula in red.

    ``sweeps`` maps a pair count to rows ``(x, actual_sharp, formula, ...)``.
    """
    fig, axes = plt.subplots(1, len(sweeps), figsize=(5.5 * len(sweeps), 4), squeeze=False)
    for ax, (pairs, rows) in zip(axes[0], sorted(sweeps.items())):
        xs = [r[0] for r in rows]
        ax.step(xs, [r[1] for r in rows], where="mid", color="tab:blue", lw=1.0, label="exact")
        ax.plot(xs, [r[2] for r in rows], color="tab:red", lw=0.9, label=f"{pairs} pairs")
        ax.set_xlabel("x")
        ax.legend(loc="best", fontsize="small")
        ax.set_title(f"{title}, {pairs} pairs", fontsize="medium")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_partial_sums(panels: Sequence[tuple[str, Sequence[int], Sequence[float]]], path: Path) -> Path:
    """Side-by-side line plots of ``(label, Q values, y values)`` panels."""
    fig, axes = plt.subplots(1, len(panels), figsize=(5.5 * len(panels), 4), squeeze=False)
    for ax, (label, qs, ys) in zip(axes[0], panels):
        ax.plot(qs, ys, lw=0.8, color="tab:blue")
        ax.axhline(0.0, color="0.6", lw=0.6)
        ax.set_xlabel("Q")
        ax.set_title(label, fontsize="medium")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
