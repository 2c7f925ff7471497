"""Report rendering: Hasse-diagram figures and delimited verdict tables.

Figures are drawn with matplotlib using a layered layout (rank = longest
chain from a minimal element); they accompany, never replace, the JSON
and DOT outputs.
"""

from __future__ import annotations

import csv
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .poset import FinitePoset, hasse_edges, label_str


def _ranks(P: FinitePoset) -> dict:
    n = len(P)
    rank = {}
    remaining = set(range(n))
    level = 0
    while remaining:
        mins = [
            i
            for i in remaining
            if not any(j in remaining and j != i and P._up[j] >> i & 1 for j in range(n))
        ]
        if not mins:
            mins = sorted(remaining)
        for i in mins:
            rank[i] = level
            remaining.discard(i)
        level += 1
    return rank


def hasse_figure(P: FinitePoset, path: str, title: str = "") -> str:
    """Render the Hasse diagram to an image file; returns the path."""
    rank = _ranks(P)
    levels: dict[int, list[int]] = {}
    for i, r in rank.items():
        levels.setdefault(r, []).append(i)
    pos = {}
    for r, nodes in levels.items():
        nodes.sort(key=lambda i: label_str(P.elements[i]))
        width = len(nodes)
        for k, i in enumerate(nodes):
            pos[i] = (k - (width - 1) / 2.0, r)
    fig, ax = plt.subplots(figsize=(max(4, 1.3 * max(len(v) for v in levels.values())),
                                    max(3, 1.1 * (len(levels)))))
    idx = {e: i for i, e in enumerate(P.elements)}
    for p, q in hasse_edges(P):
        x0, y0 = pos[idx[p]]
        x1, y1 = pos[idx[q]]
        ax.plot([x0, x1], [y0, y1], color="gray", zorder=1, linewidth=1)
    for i, e in enumerate(P.elements):
        x, y = pos[i]
        ax.scatter([x], [y], s=240, color="white", edgecolors="black", zorder=2)
        ax.annotate(label_str(e), (x, y), ha="center", va="center", fontsize=8, zorder=3)
    ax.set_axis_off()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def write_delimited(rows: Iterable[Sequence], path: str, header: Sequence[str]) -> str:
    """Write a verdict table as comma-delimited text; returns the path."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow(list(row))
    return path
