"""Figure for naming-game monitors."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .naming_game import MonitorSeries  # noqa: E402


def plot_series(series: MonitorSeries, path, window: int = 100, title: str = "") -> Path:
    """Three stacked panels: windowed success, mean lexicon size, conventionality."""
    path = Path(path)
    x = range(1, len(series) + 1)
    fig, axes = plt.subplots(3, 1, figsize=(7, 7), sharex=True)
    panels = [
        (series.windowed_success(window), f"success (window {window})", (0, 1.05)),
        (series.lexicon_size, "mean lexicon size", None),
        (series.conventionality, "conventionality", (0, 1.05)),
    ]
    for ax, (ys, label, ylim) in zip(axes, panels):
        ax.plot(x, ys, linewidth=1.2)
        ax.set_ylabel(label)
        if ylim:
            ax.set_ylim(*ylim)
        ax.grid(alpha=0.3)
    axes[-1].set_xlabel("interactions")
    if title:
        axes[0].set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return path
