"""Tiny dependency-free SVG line plots for scan and time-series output."""

from __future__ import annotations

import numpy as np

__all__ = ["plot_lines"]

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#8c564b", "#17becf", "#7f7f7f")

WIDTH, HEIGHT = 720, 440
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 20, 30, 50


def _ticks(lo: float, hi: float, n: int = 6):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10.0 ** np.floor(np.log10(raw))
    step = min(s for s in (1, 2, 2.5, 5, 10) if s * mag >= raw) * mag
    start = np.ceil(lo / step) * step
    return np.arange(start, hi + step / 2, step)


def plot_lines(path, x, curves: dict, xlabel: str = "", ylabel: str = "",
               title: str = ""):
    """Write an SVG with one polyline per (label -> y array) entry."""
    x = np.asarray(x, dtype=float)
    ys = {k: np.asarray(v, dtype=float) for k, v in curves.items()}
    x_lo, x_hi = float(x.min()), float(x.max())
    all_y = np.concatenate(list(ys.values()))
    y_lo, y_hi = float(all_y.min()), float(all_y.max())
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad
    px = lambda v: MARGIN_L + (v - x_lo) / (x_hi - x_lo or 1) * (WIDTH - MARGIN_L - MARGIN_R)
    py = lambda v: HEIGHT - MARGIN_B - (v - y_lo) / (y_hi - y_lo) * (HEIGHT - MARGIN_T - MARGIN_B)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH/2:.0f}" y="18" text-anchor="middle" font-size="14">{title}</text>',
    ]
    for tx in _ticks(x_lo, x_hi):
        parts.append(f'<line x1="{px(tx):.1f}" y1="{HEIGHT-MARGIN_B}" x2="{px(tx):.1f}" '
                     f'y2="{HEIGHT-MARGIN_B+5}" stroke="black"/>')
        parts.append(f'<text x="{px(tx):.1f}" y="{HEIGHT-MARGIN_B+18}" '
                     f'text-anchor="middle">{tx:g}</text>')
    for ty in _ticks(y_lo, y_hi):
        parts.append(f'<line x1="{MARGIN_L-5}" y1="{py(ty):.1f}" x2="{MARGIN_L}" '
                     f'y2="{py(ty):.1f}" stroke="black"/>')
        parts.append(f'<text x="{MARGIN_L-8}" y="{py(ty)+4:.1f}" '
                     f'text-anchor="end">{ty:g}</text>')
    parts.append(f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{WIDTH-MARGIN_L-MARGIN_R}" '
                 f'height="{HEIGHT-MARGIN_T-MARGIN_B}" fill="none" stroke="black"/>')
    parts.append(f'<text x="{(MARGIN_L+WIDTH-MARGIN_R)/2:.0f}" y="{HEIGHT-12}" '
                 f'text-anchor="middle">{xlabel}</text>')
    parts.append(f'<text x="16" y="{(MARGIN_T+HEIGHT-MARGIN_B)/2:.0f}" text-anchor="middle" '
                 f'transform="rotate(-90 16 {(MARGIN_T+HEIGHT-MARGIN_B)/2:.0f})">{ylabel}</text>')
    for i, (label, y) in enumerate(ys.items()):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{px(a):.1f},{py(b):.1f}" for a, b in zip(x, y))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = MARGIN_T + 16 + 16 * i
        parts.append(f'<line x1="{WIDTH-MARGIN_R-110}" y1="{ly-4}" x2="{WIDTH-MARGIN_R-90}" '
                     f'y2="{ly-4}" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{WIDTH-MARGIN_R-85}" y="{ly}">{label}</text>')
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")
