"""Static figures for benchmark and training artifacts.

Everything renders through the Agg backend straight to files; nothing here
opens a window.  Signatures take plain arrays so the plotting layer stays
decoupled from the run bookkeeping.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import BoundaryNorm, ListedColormap

Array = np.ndarray

# one fixed color per class of feature cell
COLOR_PLUS = "#1f77b4"
COLOR_MINUS = "#d62728"
COLOR_NOISE = "#7f7f7f"


def score_strip_plot(
    path,
    scores: list[Array],
    expected_sign: Array,
    eval_mask: Array,
    feature_names,
    hsic_features=(),
    title: str = "",
) -> None:
    """Per-feature attribution scores across replicates.

    One marker per (run, group, feature) cell, features along the x axis.
    Cells whose planted effect is positive are blue, negative red, noise
    gray; features under the dependence penalty are drawn as crosses.
    """
    stack = np.stack(scores)  # runs x K x d1
    n_runs, k, d1 = stack.shape
    penalized = set(int(j) for j in hsic_features)

    fig, ax = plt.subplots(figsize=(max(6.0, 0.28 * d1), 4.0))
    rng = np.random.default_rng(0)  # jitter only, cosmetic
    for j in range(d1):
        for g in range(k):
            if not eval_mask[g, j]:
                continue
            exp = expected_sign[g, j]
            color = COLOR_PLUS if exp > 0 else COLOR_MINUS if exp < 0 else COLOR_NOISE
            xs = j + (rng.random(n_runs) - 0.5) * 0.55
            ax.scatter(
                xs,
                stack[:, g, j],
                s=18,
                marker="x" if j in penalized else "o",
                facecolors=color if j in penalized else "none",
                edgecolors=None if j in penalized else color,
                linewidths=1.0,
                alpha=0.8,
            )
    ax.axhline(0.0, color="black", linewidth=0.6)
    shown = [j for j in range(d1) if eval_mask[:, j].any()]
    ax.set_xticks(shown)
    ax.set_xticklabels([feature_names[j] for j in shown], rotation=90, fontsize=7)
    ax.set_ylabel("attribution score")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def sign_grid_heatmap(path, signs: Array, feature_names, group_names, title: str = "") -> None:
    """Estimated sign per (group, feature) cell as a three-color grid."""
    signs = np.asarray(signs, dtype=float)
    cmap = ListedColormap([COLOR_MINUS, "#f0f0f0", COLOR_PLUS])
    norm = BoundaryNorm([-1.5, -0.5, 0.5, 1.5], cmap.N)
    k, d1 = signs.shape

    fig, ax = plt.subplots(figsize=(max(6.0, 0.22 * d1), max(2.5, 0.18 * k)))
    ax.imshow(signs, cmap=cmap, norm=norm, aspect="auto", interpolation="nearest")
    ax.set_xticks(range(d1))
    ax.set_xticklabels(feature_names, rotation=90, fontsize=6)
    if k <= 40:
        ax.set_yticks(range(k))
        ax.set_yticklabels(group_names, fontsize=6)
    else:
        ax.set_ylabel(f"{k} groups")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def training_curve_plot(path, trace: list[dict], title: str = "") -> None:
    """Loss components over epochs on a log-x grid."""
    epochs = [t["epoch"] for t in trace]
    fig, ax = plt.subplots(figsize=(6.5, 4.0))
    for key in ("total", "recon", "kl_row", "kl_col", "plant", "hsic"):
        vals = [t[key] for t in trace]
        if any(v != 0.0 for v in vals) or key == "total":
            ax.plot(epochs, vals, label=key, linewidth=1.2)
    ax.set_xlabel("epoch")
    ax.set_ylabel("loss")
    ax.legend(fontsize=8)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def method_bar_plot(path, summary: dict[str, dict[str, float]], title: str = "") -> None:
    """Mean sign rates and AUC per attribution method."""
    methods = list(summary)
    metrics = ("plus", "minus", "auc")
    x = np.arange(len(methods))
    width = 0.26

    fig, ax = plt.subplots(figsize=(1.8 * len(methods) + 2.0, 4.0))
    for i, metric in enumerate(metrics):
        vals = [summary[m][metric] for m in methods]
        ax.bar(x + (i - 1) * width, vals, width, label=metric)
    ax.set_xticks(x)
    ax.set_xticklabels(methods)
    ax.set_ylim(0.0, 1.05)
    ax.axhline(0.5, color="black", linewidth=0.6, linestyle=":")
    ax.legend(fontsize=8)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def median_rank_plot(path, report_rows: list[dict], top: int = 40, title: str = "") -> None:
    """Horizontal bars for the best-ranked feature cells of a rank report."""
    rows = report_rows[:top]
    labels = [f"{r['group']}:{r['feature']}" for r in rows]
    ranks = [r["median_rank"] for r in rows]
    colors = [
        COLOR_PLUS if r.get("grad_positive_rate", 0.5) > 0.5 else COLOR_MINUS for r in rows
    ]

    fig, ax = plt.subplots(figsize=(7.0, max(3.0, 0.22 * len(rows))))
    ax.barh(range(len(rows)), ranks, color=colors)
    ax.set_yticks(range(len(rows)))
    ax.set_yticklabels(labels, fontsize=6)
    ax.invert_yaxis()
    ax.set_xlabel("median rank (lower is more important)")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
