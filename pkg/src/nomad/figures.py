"""Static SVG emission: scatter plots and matrix heatmaps.

Hand-rolled SVG keeps the outputs byte-reproducible (no timestamps, no
library version strings). Heatmaps use a fixed 256-step diverging ramp,
blue through white to red, documented in docs/formats.md.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

__all__ = ["diverging_ramp", "heatmap_svg", "scatter_svg"]

_CANVAS = 640
_MARGIN = 40

# categorical colors for scatter labels
_PALETTE = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
]


def diverging_ramp(steps: int = 256) -> list[str]:
    """Blue -> white -> red ramp with `steps` entries as #rrggbb strings."""
    half = steps // 2
    colors = []
    for i in range(steps):
        if i < half:
            f = i / max(half - 1, 1)
            r, g, b = int(30 + f * 225), int(60 + f * 195), 255
        else:
            f = (i - half) / max(steps - half - 1, 1)
            r, g, b = 255, int(255 - f * 195), int(255 - f * 225)
        colors.append(f"#{r:02x}{g:02x}{b:02x}")
    return colors


_RAMP = diverging_ramp()


def heatmap_svg(matrix, path, title: str = "") -> None:
    """Write a dense-matrix heatmap; color scale symmetric around zero."""
    a = np.asarray(matrix, dtype=float)
    n, m = a.shape
    vmax = max(np.abs(a).max(), 1e-300)
    idx = np.clip(((a / vmax) * 127.5 + 127.5).astype(int), 0, 255)
    cell = _CANVAS / max(n, m)
    w, h = m * cell, n * cell
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w + 2 * _MARGIN:.0f}" '
        f'height="{h + 2 * _MARGIN:.0f}" viewBox="0 0 {w + 2 * _MARGIN:.0f} {h + 2 * _MARGIN:.0f}">',
        f'<rect width="100%" height="100%" fill="white"/>',
    ]
    if title:
        lines.append(
            f'<text x="{_MARGIN}" y="{_MARGIN - 12}" font-family="monospace" '
            f'font-size="14">{title}</text>'
        )
    for i in range(n):
        y = _MARGIN + i * cell
        run_start = 0
        run_color = _RAMP[idx[i, 0]]
        for j in range(1, m + 1):
            color = _RAMP[idx[i, j]] if j < m else None
            if color != run_color:
                x = _MARGIN + run_start * cell
                width = (j - run_start) * cell
                lines.append(
                    f'<rect x="{x:.2f}" y="{y:.2f}" width="{width:.2f}" '
                    f'height="{cell:.2f}" fill="{run_color}"/>'
                )
                run_start = j
                run_color = color
    lines.append("</svg>")
    Path(path).write_text("\n".join(lines) + "\n")


def scatter_svg(points, path, labels=None, title: str = "") -> None:
    """Write a 2D scatter plot; extra dimensions beyond the first two are
    ignored. Labels, when given, pick categorical colors."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] < 2:
        raise ValueError("scatter needs an n-by-(>=2) point array")
    xy = pts[:, :2]
    lo = xy.min(axis=0)
    hi = xy.max(axis=0)
    span = np.where(hi - lo < 1e-12, 1.0, hi - lo)
    scaled = (xy - lo) / span
    size = _CANVAS
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size + 2 * _MARGIN}" '
        f'height="{size + 2 * _MARGIN}" viewBox="0 0 {size + 2 * _MARGIN} {size + 2 * _MARGIN}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    if title:
        lines.append(
            f'<text x="{_MARGIN}" y="{_MARGIN - 12}" font-family="monospace" '
            f'font-size="14">{title}</text>'
        )
    for i, (x, y) in enumerate(scaled):
        color = _PALETTE[int(labels[i]) % len(_PALETTE)] if labels is not None else _PALETTE[0]
        cx = _MARGIN + x * size
        cy = _MARGIN + (1.0 - y) * size
        lines.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="3" fill="{color}" fill-opacity="0.8"/>')
    lines.append("</svg>")
    Path(path).write_text("\n".join(lines) + "\n")
