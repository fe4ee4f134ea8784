"""Matplotlib figures written next to the CSV/JSON reports."""

from __future__ import annotations

import math
from collections import Counter
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Rectangle  # noqa: E402

GOLDEN = (math.sqrt(5) - 1.0) / 2.0
FILL = "#3b6ea8"
END_FILL = "#b23a3a"


def figsize(width=6.0, height=None):
    return (width, height if height is not None else width * GOLDEN)


def _draw_board(ax, board, n, k, title=None):
    ax.set_xlim(0, n)
    ax.set_ylim(0, k)
    ax.set_aspect("equal")
    ax.set_xticks([])
    ax.set_yticks([])
    if board.is_end:
        ax.add_patch(Rectangle((0, 0), n, k, color=END_FILL, alpha=0.6))
        ax.text(n / 2, k / 2, "E", ha="center", va="center", fontsize=14, color="white")
    for c, r in board.filled:
        ax.add_patch(Rectangle((c, r), 1, 1, facecolor=FILL, edgecolor="white", linewidth=1.5))
    for x in range(n + 1):
        ax.axvline(x, color="0.85", linewidth=0.5, zorder=0)
    for y in range(k + 1):
        ax.axhline(y, color="0.85", linewidth=0.5, zorder=0)
    if title:
        ax.set_title(title, fontsize=9)


def plot_boards(space, indices, path, titles=None, ncols=None, suptitle=None):
    """Draw the boards ``space.states[i]`` side by side."""
    indices = list(indices)
    n, k = space.config.n, space.config.k
    ncols = ncols or min(len(indices), 6)
    nrows = math.ceil(len(indices) / ncols)
    fig, axes = plt.subplots(nrows, ncols, figsize=(1.3 * ncols * n / 3 + 0.4, 1.5 * nrows * k / 3 + 0.4),
                             squeeze=False)
    for ax in axes.ravel()[len(indices):]:
        ax.axis("off")
    for ax, i, title in zip(axes.ravel(), indices, titles or [f"state {i}" for i in indices]):
        _draw_board(ax, space.states[i], n, k, title)
    if suptitle:
        fig.suptitle(suptitle, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def plot_height_profile(report, path, title=None):
    """Class representatives per height, with non-trivial groups marked."""
    if report.height is None:
        return None
    counts = Counter(c.height for c in report.components)
    heights = list(range(1, report.height + 1))
    fig, ax = plt.subplots(figsize=figsize(7.0))
    ax.bar(heights, [counts.get(h, 0) for h in heights], color="0.7", width=0.8)
    top = max(counts.values(), default=1)
    for c in report.nontrivial():
        ax.bar([c.height], [counts[c.height]], color=FILL, width=0.8)
        ax.annotate(f"({c.degree},{c.identified.name})", (c.height, counts[c.height]),
                    xytext=(0, 4), textcoords="offset points", ha="center", fontsize=8, rotation=60)
    ax.set_xlabel("height")
    ax.set_ylabel("representatives")
    ax.set_ylim(0, top * 1.35 + 1)
    ax.set_title(title or f"|X| = {report.n_states}, |Q| = {report.skeleton_size}, h(X) = {report.height}",
                 fontsize=10)
    for side in ("top", "right"):
        ax.spines[side].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def plot_component_states(space, component, path):
    """Boards of the representative set of one holonomy component."""
    members = list(component.representative_set.members)
    title = f"({component.degree},{component.identified.name})"
    if component.height is not None:
        title += f" at height {component.height}"
    return plot_boards(space, members, path, titles=[f"state {m}" for m in members], suptitle=title)
