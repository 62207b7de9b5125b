"""Dependency-free SVG heatmaps with a linear color ramp and legend."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .atomic import write_text

# white -> dark blue
_LOW = (255, 255, 255)
_HIGH = (8, 48, 107)


def _color(level: int) -> str:
    f = level / 255.0
    r, g, b = (round(lo + f * (hi - lo)) for lo, hi in zip(_LOW, _HIGH))
    return f"#{r:02x}{g:02x}{b:02x}"


def render_heatmap(
    values: np.ndarray,
    row_labels: list[str],
    col_labels: list[str],
    path: str | Path,
    title: str = "",
    cell: int = 0,
) -> None:
    """Write a square heatmap SVG; colors ramp linearly from min to max.

    Adjacent same-color cells in a row are merged into one rect to keep
    chapter-level matrices (hundreds of rows) reasonably small.
    """
    v = np.asarray(values, dtype=np.float64)
    n_rows, n_cols = v.shape
    if not cell:
        cell = max(2, min(24, 640 // max(n_rows, n_cols)))
    vmin = float(v.min())
    vmax = float(v.max())
    span = vmax - vmin
    levels = (
        np.zeros(v.shape, dtype=np.int64)
        if span == 0
        else np.rint((v - vmin) / span * 255).astype(np.int64)
    )

    margin_left, margin_top = 110, 40 if title else 16
    width = margin_left + n_cols * cell + 150
    height = margin_top + n_rows * cell + 60
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'font-family="sans-serif" font-size="10">',
    ]
    if title:
        out.append(f'<text x="{margin_left}" y="20" font-size="13">{_esc(title)}</text>')

    # merged cell rects
    for i in range(n_rows):
        j = 0
        while j < n_cols:
            k = j
            while k + 1 < n_cols and levels[i, k + 1] == levels[i, j]:
                k += 1
            out.append(
                f'<rect x="{margin_left + j * cell}" y="{margin_top + i * cell}" '
                f'width="{(k - j + 1) * cell}" height="{cell}" '
                f'fill="{_color(int(levels[i, j]))}"/>'
            )
            j = k + 1

    # axis labels, thinned when dense
    step_r = max(1, n_rows // 24)
    for i in range(0, n_rows, step_r):
        y = margin_top + i * cell + cell
        out.append(f'<text x="{margin_left - 6}" y="{y}" text-anchor="end">{_esc(row_labels[i])}</text>')
    step_c = max(1, n_cols // 24)
    for j in range(0, n_cols, step_c):
        x = margin_left + j * cell + cell // 2
        y = margin_top + n_rows * cell + 12
        out.append(f'<text x="{x}" y="{y}" text-anchor="middle">{_esc(col_labels[j])}</text>')

    # color legend
    lx = margin_left + n_cols * cell + 20
    for s in range(64):
        out.append(
            f'<rect x="{lx}" y="{margin_top + s * 3}" width="16" height="3" '
            f'fill="{_color(255 - s * 255 // 63)}"/>'
        )
    out.append(f'<text x="{lx + 20}" y="{margin_top + 8}">{vmax:.6g}</text>')
    out.append(f'<text x="{lx + 20}" y="{margin_top + 192}">{vmin:.6g}</text>')
    out.append("</svg>")
    write_text(path, "\n".join(out) + "\n")


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
