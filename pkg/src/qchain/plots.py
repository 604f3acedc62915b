"""Figure rendering for the CLI report path.

Every figure goes through the Agg backend straight to a PNG file, with
no timestamps or run-dependent metadata, so repeated runs with the same
inputs produce stable output next to the delimited reports.
"""
from __future__ import annotations

from typing import Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  backend must be set first

_PASS = "#2a9d4e"
_FAIL = "#c3413c"


def save_check_chart(rows: Sequence[Tuple[str, int, bool]], title: str,
                     path: str) -> None:
    """Horizontal bar per configuration: bar length is the number of
    exact checks performed, color encodes pass/fail."""
    labels = [r[0] for r in rows]
    counts = [r[1] for r in rows]
    colors = [_PASS if r[2] else _FAIL for r in rows]
    height = max(2.0, 0.28 * len(rows) + 1.2)
    fig, ax = plt.subplots(figsize=(7.5, height))
    ypos = range(len(rows))
    ax.barh(list(ypos), counts, color=colors)
    ax.set_yticks(list(ypos))
    ax.set_yticklabels(labels, fontsize=7)
    ax.invert_yaxis()
    ax.set_xlabel("exact checks")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_cayley_heatmap(class_ranks: Sequence[int],
                        cayley: Sequence[Sequence[int]], title: str,
                        path: str) -> None:
    """Cayley table of the Witt group as an annotated heatmap; ticks are
    class indices with the rank of the stored representative."""
    n = len(class_ranks)
    fig, ax = plt.subplots(figsize=(1.0 + 0.9 * n, 1.0 + 0.9 * n))
    ax.imshow([[cayley[i][j] for j in range(n)] for i in range(n)],
              cmap="viridis", vmin=0, vmax=max(1, n - 1))
    ticks = ["%d (r%d)" % (i, class_ranks[i]) for i in range(n)]
    ax.set_xticks(range(n))
    ax.set_yticks(range(n))
    ax.set_xticklabels(ticks, fontsize=8)
    ax.set_yticklabels(ticks, fontsize=8)
    for i in range(n):
        for j in range(n):
            ax.text(j, i, str(cayley[i][j]), ha="center", va="center",
                    color="white", fontsize=10)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_reduce_trace(steps: Sequence[Tuple[int, int, int, int]],
                      title: str, path: str) -> None:
    """Grouped bars per surgery step: total module rank of the input,
    widened, and truncated complexes."""
    if not steps:
        steps = [(0, 0, 0, 0)]
    xs = range(len(steps))
    width = 0.27
    fig, ax = plt.subplots(figsize=(1.5 + 1.2 * len(steps), 4.0))
    ax.bar([x - width for x in xs], [s[1] for s in steps], width,
           label="input", color="#4878a8")
    ax.bar(list(xs), [s[2] for s in steps], width,
           label="widened", color="#b48246")
    ax.bar([x + width for x in xs], [s[3] for s in steps], width,
           label="truncated", color=_PASS)
    ax.set_xticks(list(xs))
    ax.set_xticklabels(["n=%d" % s[0] for s in steps])
    ax.set_ylabel("total rank")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
