"""Report figures: the gallery of weight-2 graph types and stabilizer orders."""

from __future__ import annotations

import math
import os
from collections import Counter
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _circle(n: int) -> list[tuple[float, float]]:
    return [(math.cos(2 * math.pi * k / n + math.pi / 2), math.sin(2 * math.pi * k / n + math.pi / 2))
            for k in range(n)]


def type_gallery(records: Sequence, path: str, cols: int = 8) -> str:
    """One panel per orbit: its weight-2 graph on a circle, figure number and |Stab|."""
    rows = max(1, math.ceil(len(records) / cols))
    fig, axes = plt.subplots(rows, cols, figsize=(1.6 * cols, 1.8 * rows))
    axes = list(getattr(axes, "flat", [axes]))
    for ax in axes:
        ax.set_axis_off()
    for ax, rec in zip(axes, records):
        form = rec.form
        pos = _circle(form.order)
        for i, j in form.edges:
            ax.plot([pos[i][0], pos[j][0]], [pos[i][1], pos[j][1]], color="0.2", lw=1)
        ax.scatter([p[0] for p in pos], [p[1] for p in pos], s=12, color="tab:blue", zorder=3)
        fid = rec.figure_id if rec.figure_id is not None else rec.index
        ax.set_title(f"{fid}  |Stab|={rec.stabilizer_order}", fontsize=7)
        ax.set_xlim(-1.3, 1.3)
        ax.set_ylim(-1.3, 1.3)
        ax.set_aspect("equal")
    fig.tight_layout()
    _save(fig, path)
    return path


def stabilizer_histogram(records: Sequence, path: str) -> str:
    counts = Counter(r.stabilizer_order for r in records)
    keys = sorted(counts)
    fig, ax = plt.subplots(figsize=(8, 3))
    ax.bar(range(len(keys)), [counts[k] for k in keys], color="tab:gray")
    ax.set_xticks(range(len(keys)))
    ax.set_xticklabels([str(k) for k in keys], rotation=60, fontsize=7)
    ax.set_xlabel("stabilizer order")
    ax.set_ylabel("orbits")
    fig.tight_layout()
    _save(fig, path)
    return path


def orbit_report(records: Sequence, outdir: str, prefix: str = "orbits") -> list[str]:
    os.makedirs(outdir, exist_ok=True)
    return [type_gallery(records, os.path.join(outdir, f"{prefix}-gallery.png")),
            stabilizer_histogram(records, os.path.join(outdir, f"{prefix}-stabilizers.png"))]


def _save(fig, path: str) -> None:
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    fig.savefig(path, dpi=120)
    plt.close(fig)
