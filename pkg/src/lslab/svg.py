"""Minimal deterministic SVG writer: polyline plots and heatmaps only.

No plotting dependency; output contains no timestamps or randomness, so
identical data produces byte-identical files.
"""

from __future__ import annotations

import math

WIDTH = 640
HEIGHT = 480
MARGIN_LEFT = 70
MARGIN_RIGHT = 20
MARGIN_TOP = 40
MARGIN_BOTTOM = 50

PALETTE = ["#1660a8", "#c03020", "#2f8f2f", "#8040a0", "#c07820", "#505050"]


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def _fmt(x: float) -> str:
    return "%.6g" % x


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def line_plot(
    series: list[tuple[str, list[float], list[float]]],
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
) -> str:
    """SVG line plot; ``series`` is a list of (label, xs, ys)."""
    xs_all = [x for _, xs, _ in series for x in xs]
    ys_all = [y for _, _, ys in series for y in ys]
    if not xs_all:
        xs_all, ys_all = [0.0, 1.0], [0.0, 1.0]
    x_lo, x_hi = min(xs_all), max(xs_all)
    y_lo, y_hi = min(ys_all), max(ys_all)
    if x_hi <= x_lo:
        x_hi = x_lo + 1.0
    if y_hi <= y_lo:
        y_hi = y_lo + 1.0
    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def px(x):
        return MARGIN_LEFT + plot_w * (x - x_lo) / (x_hi - x_lo)

    def py(y):
        return MARGIN_TOP + plot_h * (1.0 - (y - y_lo) / (y_hi - y_lo))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" '
            f'font-family="sans-serif" font-size="16">{_esc(title)}</text>'
        )
    # axes
    x0, y0 = MARGIN_LEFT, MARGIN_TOP + plot_h
    parts.append(
        f'<line x1="{x0}" y1="{y0}" x2="{x0 + plot_w}" y2="{y0}" stroke="black"/>'
    )
    parts.append(f'<line x1="{x0}" y1="{MARGIN_TOP}" x2="{x0}" y2="{y0}" stroke="black"/>')
    for tx in _ticks(x_lo, x_hi):
        parts.append(
            f'<line x1="{px(tx):.2f}" y1="{y0}" x2="{px(tx):.2f}" y2="{y0 + 5}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{px(tx):.2f}" y="{y0 + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{_fmt(tx)}</text>'
        )
    for ty in _ticks(y_lo, y_hi):
        parts.append(
            f'<line x1="{x0 - 5}" y1="{py(ty):.2f}" x2="{x0}" y2="{py(ty):.2f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{x0 - 8}" y="{py(ty) + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{_fmt(ty)}</text>'
        )
    if xlabel:
        parts.append(
            f'<text x="{x0 + plot_w / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="13">{_esc(xlabel)}</text>'
        )
    if ylabel:
        parts.append(
            f'<text x="18" y="{MARGIN_TOP + plot_h / 2:.1f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="13" '
            f'transform="rotate(-90 18 {MARGIN_TOP + plot_h / 2:.1f})">{_esc(ylabel)}</text>'
        )
    for i, (label, xs, ys) in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2"/>')
        for x, y in zip(xs, ys):
            parts.append(f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="3" fill="{color}"/>')
        if label:
            ly = MARGIN_TOP + 16 + 16 * i
            lx = MARGIN_LEFT + plot_w - 150
            parts.append(
                f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
                f'stroke="{color}" stroke-width="2"/>'
            )
            parts.append(
                f'<text x="{lx + 28}" y="{ly}" font-family="sans-serif" '
                f'font-size="12">{_esc(label)}</text>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def heatmap(
    values: list[list[float]],
    row_labels: list[str],
    col_labels: list[str],
    title: str = "",
) -> str:
    """Grayscale heatmap; values in [0, 1] map dark (0) to light (1)."""
    rows = len(values)
    cols = len(values[0]) if rows else 0
    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    cw = plot_w / max(1, cols)
    ch = plot_h / max(1, rows)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" '
            f'font-family="sans-serif" font-size="16">{_esc(title)}</text>'
        )
    for i in range(rows):
        for j in range(cols):
            v = min(1.0, max(0.0, values[i][j]))
            shade = int(round(255 * v))
            x = MARGIN_LEFT + j * cw
            y = MARGIN_TOP + i * ch
            parts.append(
                f'<rect x="{x:.2f}" y="{y:.2f}" width="{math.ceil(cw)}" '
                f'height="{math.ceil(ch)}" fill="rgb({shade},{shade},{shade})"/>'
            )
    for i, label in enumerate(row_labels):
        parts.append(
            f'<text x="{MARGIN_LEFT - 8}" y="{MARGIN_TOP + (i + 0.5) * ch + 4:.2f}" '
            f'text-anchor="end" font-family="sans-serif" font-size="11">{_esc(label)}</text>'
        )
    for j, label in enumerate(col_labels):
        parts.append(
            f'<text x="{MARGIN_LEFT + (j + 0.5) * cw:.2f}" '
            f'y="{MARGIN_TOP + plot_h + 18:.2f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{_esc(label)}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
