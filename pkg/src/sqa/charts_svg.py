"""Static SVG rendering of chart specs for headless use.

The interactive renderer lives in the browser client; this one exists
so `--charts svg` can drop standalone files next to a CLI answer.
Plain string assembly, no drawing dependencies.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .visualizer import ChartSpec

WIDTH, HEIGHT = 640, 400
MARGIN = 48
PALETTE = ("#4063d8", "#389826", "#cb3c33", "#9558b2", "#e69f00", "#56b4e9")


def render_chart_svg(spec: ChartSpec) -> str:
    if spec.chart_type == "pie":
        body = _pie(spec)
    elif spec.chart_type == "line":
        body = _line(spec)
    else:
        body = _bars(spec, grouped=spec.chart_type == "grouped_bar")
    title = (
        f'<text x="{WIDTH / 2}" y="24" text-anchor="middle" font-size="16" '
        f'font-family="sans-serif">{escape(spec.title)}</text>'
    )
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">'
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>'
        f"{title}{body}</svg>"
    )


def _value_range(spec: ChartSpec) -> tuple[float, float]:
    values = [v for _, series in spec.series for v in series]
    lo, hi = min(0.0, min(values)), max(values)
    if hi == lo:
        hi = lo + 1.0
    return lo, hi


def _plot_box() -> tuple[float, float, float, float]:
    return MARGIN, 40, WIDTH - MARGIN, HEIGHT - MARGIN


def _bars(spec: ChartSpec, grouped: bool) -> str:
    x0, y0, x1, y1 = _plot_box()
    lo, hi = _value_range(spec)
    n_cat = len(spec.categories)
    n_series = len(spec.series) if grouped else 1
    slot = (x1 - x0) / n_cat
    bar_w = slot * 0.8 / n_series
    parts = [f'<line x1="{x0}" y1="{y1}" x2="{x1}" y2="{y1}" stroke="#333"/>']
    for ci, category in enumerate(spec.categories):
        cx = x0 + slot * ci + slot / 2
        parts.append(
            f'<text x="{cx:.1f}" y="{y1 + 16}" text-anchor="middle" font-size="10" '
            f'font-family="sans-serif">{escape(str(category))}</text>'
        )
    series = spec.series if grouped else spec.series[:1]
    for si, (label, values) in enumerate(series):
        color = PALETTE[si % len(PALETTE)]
        for ci, value in enumerate(values):
            frac = (value - lo) / (hi - lo)
            bar_h = frac * (y1 - y0)
            bx = x0 + slot * ci + slot * 0.1 + si * bar_w
            parts.append(
                f'<rect x="{bx:.1f}" y="{y1 - bar_h:.1f}" width="{bar_w:.1f}" '
                f'height="{bar_h:.1f}" fill="{color}"><title>{escape(label)}: {value}</title></rect>'
            )
    return "".join(parts)


def _line(spec: ChartSpec) -> str:
    x0, y0, x1, y1 = _plot_box()
    lo, hi = _value_range(spec)
    n_cat = len(spec.categories)
    parts = [f'<line x1="{x0}" y1="{y1}" x2="{x1}" y2="{y1}" stroke="#333"/>']
    for si, (label, values) in enumerate(spec.series):
        color = PALETTE[si % len(PALETTE)]
        points = []
        for ci, value in enumerate(values):
            px = x0 + (x1 - x0) * (ci / max(n_cat - 1, 1))
            py = y1 - (value - lo) / (hi - lo) * (y1 - y0)
            points.append(f"{px:.1f},{py:.1f}")
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="2" '
            f'points="{" ".join(points)}"><title>{escape(label)}</title></polyline>'
        )
    return "".join(parts)


def _pie(spec: ChartSpec) -> str:
    _, values = spec.series[0]
    total = sum(values) or 1.0
    cx, cy, radius = WIDTH / 2, (HEIGHT + 20) / 2, min(WIDTH, HEIGHT) / 3
    angle = -math.pi / 2
    parts = []
    for i, value in enumerate(values):
        frac = value / total
        sweep = frac * 2 * math.pi
        x_start = cx + radius * math.cos(angle)
        y_start = cy + radius * math.sin(angle)
        angle += sweep
        x_end = cx + radius * math.cos(angle)
        y_end = cy + radius * math.sin(angle)
        large = 1 if sweep > math.pi else 0
        label = spec.categories[i] if i < len(spec.categories) else str(i)
        parts.append(
            f'<path d="M{cx:.1f},{cy:.1f} L{x_start:.1f},{y_start:.1f} '
            f'A{radius:.1f},{radius:.1f} 0 {large} 1 {x_end:.1f},{y_end:.1f} Z" '
            f'fill="{PALETTE[i % len(PALETTE)]}"><title>{escape(str(label))}: {value}</title></path>'
        )
    return "".join(parts)
