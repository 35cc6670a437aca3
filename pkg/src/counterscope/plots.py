"""Minimal static SVG plots (polylines and heatmaps).

Hand-rolled on purpose: output contains no timestamps or library version
strings, so a plot is byte-identical across runs for identical inputs.
"""

from __future__ import annotations

import numpy as np

_WIDTH = 640
_HEIGHT = 360
_MARGIN = 48

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
            "#8c564b", "#17becf", "#7f7f7f")


def _header(title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{_WIDTH / 2:.0f}" y="20" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{title}</text>',
    ]


def _axis(x_label: str, y_label: str) -> list[str]:
    x0, y0 = _MARGIN, _HEIGHT - _MARGIN
    x1, y1 = _WIDTH - _MARGIN, _MARGIN
    return [
        f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>',
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>',
        f'<text x="{(x0 + x1) / 2:.0f}" y="{_HEIGHT - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="11">{x_label}</text>',
        f'<text x="14" y="{(y0 + y1) / 2:.0f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="11" '
        f'transform="rotate(-90 14 {(y0 + y1) / 2:.0f})">{y_label}</text>',
    ]


def _scale(values: np.ndarray, lo: float, hi: float, out_lo: float, out_hi: float) -> np.ndarray:
    span = hi - lo
    if span == 0:
        return np.full_like(values, (out_lo + out_hi) / 2.0)
    return out_lo + (values - lo) / span * (out_hi - out_lo)


def line_plot(series: dict[str, tuple[np.ndarray, np.ndarray]], path,
              title: str = "", x_label: str = "", y_label: str = "",
              normalize: bool = False) -> None:
    """Polyline plot of named (x, y) series; normalize scales each y to [0, 1]."""
    parts = _header(title) + _axis(x_label, y_label)
    prepared = {}
    for name, (x, y) in series.items():
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if normalize:
            lo, hi = float(y.min()), float(y.max())
            y = _scale(y, lo, hi, 0.0, 1.0)
        prepared[name] = (x, y)
    all_x = np.concatenate([x for x, _ in prepared.values()])
    all_y = np.concatenate([y for _, y in prepared.values()])
    x_lo, x_hi = float(all_x.min()), float(all_x.max())
    y_lo, y_hi = float(all_y.min()), float(all_y.max())
    for i, (name, (x, y)) in enumerate(prepared.items()):
        px = _scale(x, x_lo, x_hi, _MARGIN, _WIDTH - _MARGIN)
        py = _scale(y, y_lo, y_hi, _HEIGHT - _MARGIN, _MARGIN)
        color = _PALETTE[i % len(_PALETTE)]
        points = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
        parts.append(f'<polyline points="{points}" fill="none" stroke="{color}" '
                     f'stroke-width="1.5"/>')
        parts.append(f'<text x="{_WIDTH - _MARGIN + 4}" y="{_MARGIN + 14 * i + 10}" '
                     f'font-family="sans-serif" font-size="9" fill="{color}" '
                     f'text-anchor="end">{name}</text>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")


def heatmap(matrix, row_labels, col_labels, path, title: str = "") -> None:
    """Grayscale-to-blue heatmap with row/column labels (confusion matrices)."""
    matrix = np.asarray(matrix, dtype=float)
    n_rows, n_cols = matrix.shape
    parts = _header(title)
    x0, y0 = _MARGIN + 30, _MARGIN
    cell_w = (_WIDTH - x0 - _MARGIN) / max(n_cols, 1)
    cell_h = (_HEIGHT - y0 - _MARGIN) / max(n_rows, 1)
    top = float(matrix.max()) if matrix.size else 1.0
    for i in range(n_rows):
        for j in range(n_cols):
            frac = matrix[i, j] / top if top else 0.0
            shade = int(255 - 205 * frac)
            parts.append(
                f'<rect x="{x0 + j * cell_w:.2f}" y="{y0 + i * cell_h:.2f}" '
                f'width="{cell_w:.2f}" height="{cell_h:.2f}" '
                f'fill="rgb({shade},{shade},255)" stroke="white" stroke-width="0.5"/>')
            if matrix[i, j]:
                parts.append(
                    f'<text x="{x0 + (j + 0.5) * cell_w:.2f}" '
                    f'y="{y0 + (i + 0.5) * cell_h + 3:.2f}" text-anchor="middle" '
                    f'font-family="sans-serif" font-size="8">{matrix[i, j]:g}</text>')
    step_r = max(1, n_rows // 12)
    for i in range(0, n_rows, step_r):
        parts.append(f'<text x="{x0 - 4}" y="{y0 + (i + 0.5) * cell_h + 3:.2f}" '
                     f'text-anchor="end" font-family="sans-serif" font-size="8">'
                     f'{row_labels[i]}</text>')
    step_c = max(1, n_cols // 12)
    for j in range(0, n_cols, step_c):
        parts.append(f'<text x="{x0 + (j + 0.5) * cell_w:.2f}" y="{y0 - 4}" '
                     f'text-anchor="middle" font-family="sans-serif" font-size="8">'
                     f'{col_labels[j]}</text>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")
