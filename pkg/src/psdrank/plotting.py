"""Report figures.  Rendered with the Agg backend straight to PNG files."""
from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Rectangle  # noqa: E402

# no timestamp/version metadata, so repeated runs give identical files
_PNG_METADATA = {"Software": None}


def pretty_plot(width=6, height=None):
    """Figure and axes with consistent font sizes; height defaults to width * golden ratio."""
    golden_ratio = (math.sqrt(5) - 1.0) / 2.0
    if not height:
        height = width * golden_ratio
    fig, ax = plt.subplots(figsize=(width, height), facecolor="w")
    ax.tick_params(labelsize=width * 1.6)
    return fig, ax


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata=_PNG_METADATA)
    plt.close(fig)


def plot_support(m, path, triangular=None, cycle=None, title=""):
    """Entries of ``m`` as a grid; triangular witness cells shaded, cycle cells outlined."""
    fig, ax = pretty_plot(width=0.8 * m.cols + 2, height=0.6 * m.rows + 1.5)
    vals = [[float(m[i, j]) for j in range(m.cols)] for i in range(m.rows)]
    ax.imshow(vals, cmap="Greys", vmin=0, vmax=max(max(r) for r in vals) * 2.5 or 1)
    if triangular is not None:
        for i in triangular.rows:
            for j in triangular.cols:
                ax.add_patch(Rectangle((j - 0.5, i - 0.5), 1, 1, color="tab:blue", alpha=0.25, lw=0))
    if cycle is not None:
        for i, j in cycle.cells():
            ax.add_patch(Rectangle((j - 0.45, i - 0.45), 0.9, 0.9, fill=False, ec="tab:red", lw=2))
    for i in range(m.rows):
        for j in range(m.cols):
            ax.text(j, i, str(m[i, j]), ha="center", va="center", fontsize=11)
    ax.set_xticks(range(m.cols), [str(j + 1) for j in range(m.cols)])
    ax.set_yticks(range(m.rows), [str(i + 1) for i in range(m.rows)])
    ax.set_xlabel("column")
    ax.set_ylabel("row")
    if title:
        ax.set_title(title)
    _save(fig, path)


def plot_rank_histogram(rank_counts, path, lower=None, title=""):
    """Bar chart of square-root ranks over the searched sign classes."""
    fig, ax = pretty_plot(width=6)
    ranks = sorted(int(k) for k in rank_counts)
    counts = [rank_counts[k] if k in rank_counts else rank_counts[str(k)] for k in ranks]
    ax.bar(ranks, counts, color="tab:gray", width=0.6)
    ax.set_yscale("log")
    ax.set_ylim(0.5, max(counts) * 4)
    for r, c in zip(ranks, counts):
        ax.text(r, c, str(c), ha="center", va="bottom", fontsize=9)
    if lower is not None:
        ax.axvline(lower - 0.5, color="tab:red", ls="--", lw=1.5, label=f"triangular lower bound {lower}")
        ax.legend(fontsize=9, frameon=False)
    ax.set_xticks(sorted(set(ranks) | ({lower} if lower else set())))
    ax.set_xlabel("rank of entry-wise square root")
    ax.set_ylabel("sign classes")
    if title:
        ax.set_title(title)
    _save(fig, path)
