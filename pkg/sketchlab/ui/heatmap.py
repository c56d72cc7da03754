import io
import math
from collections import defaultdict

import matplotlib
from matplotlib.colors import LogNorm, Normalize
from matplotlib.figure import Figure

from sketchlab.constants import (
    HEATMAP_CMAP,
    HEATMAP_GRID_COLOR,
    HEATMAP_PANEL_SIZE,
    HEATMAP_TEXT_COLOR,
)

SWEEP_KIND = "tensor-n3-sweep"


def _norm(values):
    finite = [v for v in values if math.isfinite(v)]
    if not finite:
        return Normalize(0.0, 1.0)
    low, high = min(finite), max(finite)
    if low > 0:
        return LogNorm(low, high if high > low else low * 10)
    return Normalize(low, high if high > low else low + 1.0)


def _grid(rows):
    eps1 = sorted({row.eps1 for row in rows})
    eps2 = sorted({row.eps2 for row in rows})
    cells = {(row.eps1, row.eps2): row.median_rel_err for row in rows}
    grid = [[cells.get((e1, e2), math.nan) for e1 in eps1] for e2 in eps2]
    return eps1, eps2, grid


def draw_noise_heatmap(fig, ax, rows, r):
    """
    One r value: eps1 along x, eps2 along y, median relative error as colour.
    Cell values are printed on top of the colour so the panel reads without the bar.
    """
    eps1, eps2, grid = _grid(rows)
    norm = _norm([v for line in grid for v in line])
    image = ax.imshow(grid, origin="lower", cmap=HEATMAP_CMAP, norm=norm, aspect="auto")
    ax.set_xticks(range(len(eps1)), [f"{e:.0e}" for e in eps1], rotation=45)
    ax.set_yticks(range(len(eps2)), [f"{e:.0e}" for e in eps2])
    ax.set_xlabel("eps1 = ||Z||_F")
    ax.set_ylabel("eps2 = ||Z~||_F")
    ax.set_title(f"r = {r}")

    for y, line in enumerate(grid):
        for x, value in enumerate(line):
            if math.isfinite(value):
                ax.text(x, y, f"{value:.1e}", ha="center", va="center", fontsize=6, color=HEATMAP_TEXT_COLOR)

    # cell borders
    ax.set_xticks([i - 0.5 for i in range(1, len(eps1))], minor=True)
    ax.set_yticks([i - 0.5 for i in range(1, len(eps2))], minor=True)
    ax.grid(which="minor", color=HEATMAP_GRID_COLOR, linewidth=0.5)
    ax.tick_params(which="minor", length=0)
    fig.colorbar(image, ax=ax, label="median relative error")


def draw_n3_sweep(ax, rows):
    """Median relative error against tube length, one line per r."""
    by_r = defaultdict(list)
    for row in rows:
        by_r[row.r].append((row.n3, row.median_rel_err))
    for r in sorted(by_r):
        points = sorted(by_r[r])
        ax.plot([p[0] for p in points], [p[1] for p in points], marker="o", label=f"r = {r}")
    if all(row.median_rel_err > 0 for row in rows):
        ax.set_yscale("log")
    ax.set_xlabel("n3")
    ax.set_ylabel("median relative error")
    ax.set_title("tube length sweep")
    ax.legend(fontsize=6)


def render_heatmaps(rows, title=None):
    """
    SVG text with one heatmap panel per r value (plus a tube-length panel when
    sweep rows are present). Output bytes are stable for identical rows.
    """
    grid_rows = defaultdict(list)
    sweep_rows = []
    for row in rows:
        if row.kind == SWEEP_KIND:
            sweep_rows.append(row)
        else:
            grid_rows[row.r].append(row)

    panels = len(grid_rows) + (1 if sweep_rows else 0)
    fig = Figure(figsize=(HEATMAP_PANEL_SIZE * max(panels, 1) * 1.25, HEATMAP_PANEL_SIZE), layout="constrained")
    axes = fig.subplots(1, max(panels, 1), squeeze=False)[0]

    if panels == 0:
        axes[0].text(0.5, 0.5, "no results", ha="center", va="center")
        axes[0].set_axis_off()
    for ax, r in zip(axes, sorted(grid_rows)):
        draw_noise_heatmap(fig, ax, grid_rows[r], r)
    if sweep_rows:
        draw_n3_sweep(axes[-1], sweep_rows)
    if title:
        fig.suptitle(title)

    buf = io.StringIO()
    with matplotlib.rc_context({"svg.hashsalt": "sketchlab", "svg.fonttype": "none"}):
        fig.savefig(buf, format="svg", metadata={"Date": None})
    return buf.getvalue()
