"""Render measurement statistics to figure files.

Used by the CLI report path (``--plot``); figures always go to files, never
to stdout, so machine-readable output stays clean.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def plot_counts(counts: Mapping[str, int], path: str | Path,
                *, title: str | None = None) -> Path:
    """Histogram of measurement counts, saved to ``path``; returns the path."""
    path = Path(path)
    keys = sorted(counts)
    values = [counts[key] for key in keys]
    shots = sum(values)

    fig, ax = plt.subplots(figsize=(max(4.0, 0.9 * len(keys) + 2.0), 3.2))
    bars = ax.bar(range(len(keys)), values, color="#4878cf")
    ax.set_xticks(range(len(keys)))
    ax.set_xticklabels(keys, rotation=45 if len(keys) > 6 else 0, family="monospace")
    ax.set_ylabel("counts")
    ax.set_xlabel("outcome")
    if title:
        ax.set_title(title)
    for bar, value in zip(bars, values):
        ax.annotate(
            f"{value / shots:.1%}" if shots else "0",
            xy=(bar.get_x() + bar.get_width() / 2, value),
            xytext=(0, 2), textcoords="offset points",
            ha="center", va="bottom", fontsize=8,
        )
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
