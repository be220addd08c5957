"""Minimal self-contained SVG line charts with error bars.

The harness emits static figures without pulling in a plotting stack;
charts are plain polylines over a linear scale, one series per method.
"""
from __future__ import annotations

import math

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]

WIDTH, HEIGHT = 640, 440
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 160, 40, 55


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def _fmt(v: float) -> str:
    if v == 0:
        return "0"
    if abs(v) >= 1000 or abs(v) < 0.01:
        return f"{v:.2g}"
    return f"{v:.3g}"


def line_chart(series: dict, title: str, x_label: str, y_label: str) -> str:
    """Render ``{name: [(x, y, yerr), ...]}`` to an SVG document string."""
    xs = [p[0] for pts in series.values() for p in pts]
    ys = [p[1] + s * p[2] for pts in series.values() for p in pts for s in (-1, 1)]
    if not xs:
        xs, ys = [0.0, 1.0], [0.0, 1.0]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(min(ys), 0.0), max(ys)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    y_hi *= 1.05

    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def px(x: float) -> float:
        return MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return MARGIN_T + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{MARGIN_L + plot_w / 2:.1f}" y="22" text-anchor="middle" '
        f'font-size="15">{title}</text>',
    ]
    # Axes and ticks.
    x0, y0 = px(x_lo), py(y_lo)
    parts.append(
        f'<path d="M {x0:.1f} {MARGIN_T} V {y0:.1f} H {px(x_hi):.1f}" '
        f'fill="none" stroke="black"/>'
    )
    for tx in _ticks(x_lo, x_hi):
        parts.append(
            f'<line x1="{px(tx):.1f}" y1="{y0:.1f}" x2="{px(tx):.1f}" '
            f'y2="{y0 + 5:.1f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{px(tx):.1f}" y="{y0 + 19:.1f}" text-anchor="middle">'
            f"{_fmt(tx)}</text>"
        )
    for ty in _ticks(y_lo, y_hi):
        parts.append(
            f'<line x1="{x0 - 5:.1f}" y1="{py(ty):.1f}" x2="{x0:.1f}" '
            f'y2="{py(ty):.1f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{x0 - 8:.1f}" y="{py(ty) + 4:.1f}" text-anchor="end">'
            f"{_fmt(ty)}</text>"
        )
    parts.append(
        f'<text x="{MARGIN_L + plot_w / 2:.1f}" y="{HEIGHT - 12}" '
        f'text-anchor="middle">{x_label}</text>'
    )
    parts.append(
        f'<text x="18" y="{MARGIN_T + plot_h / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {MARGIN_T + plot_h / 2:.1f})">{y_label}</text>'
    )

    for si, (name, pts) in enumerate(series.items()):
        color = PALETTE[si % len(PALETTE)]
        pts = sorted(pts)
        coords = " ".join(f"{px(x):.1f},{py(y):.1f}" for x, y, _ in pts)
        if len(pts) > 1:
            parts.append(
                f'<polyline points="{coords}" fill="none" stroke="{color}" '
                f'stroke-width="1.8"/>'
            )
        for x, y, err in pts:
            cx, cy = px(x), py(y)
            parts.append(f'<circle cx="{cx:.1f}" cy="{cy:.1f}" r="3" fill="{color}"/>')
            if err > 0 and math.isfinite(err):
                parts.append(
                    f'<path d="M {cx - 3:.1f} {py(y - err):.1f} h 6 M {cx:.1f} '
                    f'{py(y - err):.1f} V {py(y + err):.1f} M {cx - 3:.1f} '
                    f'{py(y + err):.1f} h 6" stroke="{color}" fill="none"/>'
                )
        ly = MARGIN_T + 14 + 18 * si
        lx = WIDTH - MARGIN_R + 12
        parts.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="1.8"/>'
        )
        parts.append(f'<text x="{lx + 28}" y="{ly}">{name}</text>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
