"""Minimal SVG line charts: a mean curve with +/- one std envelopes."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence
from xml.sax.saxutils import escape

# figure name -> (x column, y mean column, y std column, x label, y label)
FIGURES = {
    "error-vs-k": ("k", "meanError", "stdError", "learner order k", "generalization error"),
    "rho-vs-k": ("k", "meanRho", "stdRho", "learner order k", "sysRatio"),
    "ell0-vs-rho": ("meanRho", "meanEllZero", "stdEllZero", "mean sysRatio",
                    "compressed length of errorT0 (bytes)"),
    "delta0-vs-rho": ("meanRho", "meanDeltaZero", "stdDeltaZero", "mean sysRatio",
                      "divergence of errorT0 words (bits)"),
}

WIDTH, HEIGHT = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 20, 30, 50


@dataclass
class Series:
    x: List[float]
    mean: List[float]
    std: List[float]
    # original CSV strings, echoed verbatim into the sidecar
    raw: List[tuple]


def select_series(rows: Sequence[dict], figure: str) -> Series:
    xcol, mcol, scol = FIGURES[figure][:3]
    points = []
    for row in rows:
        if row[mcol] in ("", None) or row[xcol] in ("", None):
            continue
        std_text = row[scol] or "0.0"
        points.append((float(row[xcol]), float(row[mcol]), float(std_text),
                       (row[xcol], row[mcol], std_text)))
    points.sort(key=lambda t: t[0])
    return Series([p[0] for p in points], [p[1] for p in points], [p[2] for p in points],
                  [p[3] for p in points])


def sidecar_csv(series: Series, figure: str) -> str:
    xcol, mcol, scol = FIGURES[figure][:3]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([xcol, mcol, scol, "lower", "upper"])
    for (xs, ms, ss), m, s in zip(series.raw, series.mean, series.std):
        w.writerow([xs, ms, ss, repr(m - s), repr(m + s)])
    return buf.getvalue()


def _ticks(lo: float, hi: float, n: int = 8) -> List[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((s * mag for s in (1, 2, 5, 10) if s * mag >= raw), default=raw)
    start = math.ceil(lo / step) * step
    out = []
    v = start
    while v <= hi + 1e-12 * abs(hi):
        out.append(round(v, 12))
        v += step
    return out


def _fmt_tick(v: float) -> str:
    return f"{v:.4g}"


def render_svg(series: Series, figure: str, title: str = "",
               marker_x: Optional[float] = None, marker_label: str = "") -> str:
    xlabel, ylabel = FIGURES[figure][3:]
    lower = [m - s for m, s in zip(series.mean, series.std)]
    upper = [m + s for m, s in zip(series.mean, series.std)]
    xs = list(series.x) + ([marker_x] if marker_x is not None else [])
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(lower), max(upper)
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def sx(v):
        return LEFT + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return TOP + (1 - (v - y0) / (y1 - y0)) * ph

    def poly(ys, style):
        pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(series.x, ys))
        return f'<polyline fill="none" {style} points="{pts}"/>'

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
           f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
           f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>']
    for t in _ticks(x0, x1):
        out.append(f'<line x1="{sx(t):.2f}" y1="{TOP + ph}" x2="{sx(t):.2f}" y2="{TOP + ph + 4}" stroke="black"/>')
        out.append(f'<text x="{sx(t):.2f}" y="{TOP + ph + 16}" text-anchor="middle">{_fmt_tick(t)}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<line x1="{LEFT - 4}" y1="{sy(t):.2f}" x2="{LEFT}" y2="{sy(t):.2f}" stroke="black"/>')
        out.append(f'<text x="{LEFT - 6}" y="{sy(t) + 4:.2f}" text-anchor="end">{_fmt_tick(t)}</text>')
    out.append(f'<text x="{LEFT + pw / 2}" y="{HEIGHT - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="14" y="{TOP + ph / 2}" text-anchor="middle" '
               f'transform="rotate(-90 14 {TOP + ph / 2})">{escape(ylabel)}</text>')
    if title:
        out.append(f'<text x="{LEFT + pw / 2}" y="18" text-anchor="middle" font-size="13">{escape(title)}</text>')
    out.append(poly(upper, 'stroke="gray" stroke-dasharray="5,4" class="upper"'))
    out.append(poly(lower, 'stroke="gray" stroke-dasharray="5,4" class="lower"'))
    out.append(poly(series.mean, 'stroke="black" stroke-width="1.5" class="mean"'))
    for x, y in zip(series.x, series.mean):
        cx, cy = sx(x), sy(y)
        out.append(f'<path d="M{cx - 3:.2f},{cy - 3:.2f}L{cx + 3:.2f},{cy + 3:.2f}'
                   f'M{cx - 3:.2f},{cy + 3:.2f}L{cx + 3:.2f},{cy - 3:.2f}" stroke="black"/>')
    if marker_x is not None:
        mx = sx(marker_x)
        out.append(f'<line class="threshold" x1="{mx:.2f}" y1="{TOP}" x2="{mx:.2f}" y2="{TOP + ph}" '
                   f'stroke="red" stroke-dasharray="2,3"/>')
        out.append(f'<path d="M{mx:.2f},{TOP + ph - 2}l-5,-12h10z" fill="red"/>')
        out.append(f'<text x="{mx + 6:.2f}" y="{TOP + ph - 8}" fill="red">{escape(marker_label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
