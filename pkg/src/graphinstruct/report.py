"""Figure rendering for eval reports and allocation plans."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def save_metrics_figure(report: dict, path, title: str = "Evaluation metrics"):
    """Bar chart of a metric report, written next to the JSON output."""
    names = list(report)
    values = [report[k] for k in names]
    fig, ax = plt.subplots(figsize=(max(4, 1.4 * len(names)), 3.2))
    ax.bar(names, values, color="#4878a8")
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("score")
    ax.set_title(title)
    for i, v in enumerate(values):
        ax.text(i, v + 0.02, f"{v:.4f}", ha="center", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_allocation_figure(counts: dict, path, title: str = "Package allocation"):
    """Bar chart of package counts per (task, dataset) pair."""
    pairs = sorted(counts)
    labels = [f"{t}\n{d}" for t, d in pairs]
    values = [counts[p] for p in pairs]
    fig, ax = plt.subplots(figsize=(max(4, 1.6 * len(pairs)), 3.2))
    ax.bar(labels, values, color="#6aa86a")
    ax.set_ylabel("packages")
    ax.set_title(title)
    for i, v in enumerate(values):
        ax.text(i, v + 0.05, str(v), ha="center", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
