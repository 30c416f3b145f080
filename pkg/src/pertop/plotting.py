"""Figure rendering for the report path.

Renders a summary of a period-index run: the cohomology groups of the space
through degree 5 as a bar chart of (log) orders, with the report verdict in a
side panel.  Figures are written to files next to the delimited records; no
interactive backend is ever touched.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .period_index import PeriodIndexReport

__all__ = ["render_report_figure", "group_summary"]


def group_summary(ctx, upto: int = 5) -> list[tuple[int, str, Optional[int]]]:
    """(degree, description, order or None for infinite) through degree upto."""
    out = []
    for k in range(upto + 1):
        G = ctx.group(k)
        out.append((k, G.describe(), G.presentation.order()))
    return out


def render_report_figure(report: PeriodIndexReport,
                         groups: Sequence[tuple[int, str, Optional[int]]],
                         path: str) -> None:
    fig, (ax, side) = plt.subplots(
        1, 2, figsize=(8.0, 3.2), gridspec_kw={"width_ratios": [3, 2]})
    degrees = [k for k, _, _ in groups]
    heights = []
    labels = []
    infinite = []
    for k, desc, order in groups:
        labels.append(desc)
        if order is None:
            heights.append(0.0)
            infinite.append(k)
        else:
            heights.append(math.log2(order) if order > 1 else 0.0)
    bars = ax.bar(degrees, heights, color="#4878a8", width=0.6)
    top = max(heights + [1.0])
    for k in infinite:
        ax.bar([k], [top * 1.1], color="none", edgecolor="#a84848",
               hatch="//", width=0.6)
    for rect, text in zip(bars, labels):
        ax.text(rect.get_x() + rect.get_width() / 2,
                rect.get_height() + 0.05 * top, text,
                ha="center", va="bottom", fontsize=8)
    ax.set_xticks(degrees)
    ax.set_xlabel("degree")
    ax.set_ylabel("log2 |H^k|  (hatched: infinite)")
    ax.set_title(f"integral cohomology of {report.space}", fontsize=9)
    ax.set_ylim(0, top * 1.35 + 0.5)

    side.axis("off")
    verdict = "= ind_top" if report.exact else "| ind_top"
    lines = [
        f"alpha = ({','.join(map(str, report.alpha)) or '0'})",
        f"period        {report.per}",
        f"ord(reduced Q) {report.ordQ}",
        f"index {verdict}   {report.index}",
        f"dimension bound {report.dimension}",
        f"ordQ | eps(per): {str(report.epsilon_ok).lower()}",
    ]
    if report.lift_independence is not None:
        lines.append(
            f"lift independence: {str(report.lift_independence).lower()}")
    side.text(0.0, 0.95, "\n".join(lines), va="top", ha="left",
              family="monospace", fontsize=9,
              transform=side.transAxes)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
