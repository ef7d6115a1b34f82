"""Deterministic HTML renderer with hand-emitted inline SVG charts."""

from __future__ import annotations

import html
from dataclasses import dataclass

from .deck_model import ChartSpec, Deck, InsightBlock, Slide, TableBlock
from .errors import DegenerateDataError, ValidationError


@dataclass(frozen=True)
class RenderOptions:
    theme: str = "light"
    page_size: tuple[int, int] = (960, 540)
    embed_data: bool = False

    def __post_init__(self) -> None:
        if self.theme not in ("light", "dark"):
            raise ValidationError(f"unknown theme {self.theme!r}")
        w, h = self.page_size
        if w <= 0 or h <= 0:
            raise ValidationError("page dimensions must be positive")


_PALETTE = ("#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#9c755f")


def _fmt(x: float) -> str:
    return f"{x:.4f}".rstrip("0").rstrip(".")


def pie_angles(values: list[float]) -> list[float]:
    """Wedge angles in degrees, proportional to values; total is exactly 360."""
    total = sum(values)
    if total <= 0:
        raise DegenerateDataError("piechart values sum to zero")
    return [360.0 * v / total for v in values]


def _wedge_path(cx: float, cy: float, r: float, start_deg: float, sweep_deg: float) -> str:
    import math

    # a full-circle wedge would collapse as an SVG arc; nudge it under 360
    sweep = min(sweep_deg, 359.9999)
    a0 = math.radians(start_deg - 90.0)
    a1 = math.radians(start_deg + sweep - 90.0)
    x0, y0 = cx + r * math.cos(a0), cy + r * math.sin(a0)
    x1, y1 = cx + r * math.cos(a1), cy + r * math.sin(a1)
    large = 1 if sweep > 180.0 else 0
    return (
        f"M {_fmt(cx)} {_fmt(cy)} L {_fmt(x0)} {_fmt(y0)} "
        f"A {_fmt(r)} {_fmt(r)} 0 {large} 1 {_fmt(x1)} {_fmt(y1)} Z"
    )


def render_chart_svg(chart: ChartSpec, opts: RenderOptions = RenderOptions()) -> str:
    """Self-contained SVG for one chart; geometry is proportional to the data."""
    w, h = opts.page_size
    pad = 40.0
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}" '
        f'width="{w}" height="{h}" role="img">'
    ]
    parts.append(f'<text x="{_fmt(w / 2)}" y="24" text-anchor="middle" font-size="18">'
                 f"{html.escape(chart.title)}</text>")

    if chart.chart_kind == "piechart":
        label, values = chart.series[0]
        angles = pie_angles(list(values))
        cx, cy, r = w / 2, h / 2 + 10, min(w, h) / 2 - pad
        start = 0.0
        for i, sweep in enumerate(angles):
            color = _PALETTE[i % len(_PALETTE)]
            parts.append(
                f'<path d="{_wedge_path(cx, cy, r, start, sweep)}" fill="{color}" '
                f'stroke="#fff" data-label="{html.escape(chart.x_labels[i])}" '
                f'data-angle="{_fmt(sweep)}"/>'
            )
            start += sweep
    elif chart.chart_kind == "barchart":
        values_max = max((max(v) for _, v in chart.series if v), default=0.0)
        n = len(chart.x_labels)
        group_w = (w - 2 * pad) / max(n, 1)
        bar_w = group_w / max(len(chart.series), 1) * 0.8
        for si, (label, values) in enumerate(chart.series):
            color = _PALETTE[si % len(_PALETTE)]
            for i, v in enumerate(values):
                bh = 0.0 if values_max <= 0 else (h - 2 * pad) * (v / values_max)
                x = pad + i * group_w + si * bar_w
                y = h - pad - bh
                parts.append(
                    f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(bar_w)}" '
                    f'height="{_fmt(bh)}" fill="{color}" data-value="{_fmt(v)}"/>'
                )
    elif chart.chart_kind == "linechart":
        all_vals = [v for _, vs in chart.series for v in vs]
        lo, hi = (min(all_vals), max(all_vals)) if all_vals else (0.0, 1.0)
        span = hi - lo or 1.0
        n = len(chart.x_labels)
        for si, (label, values) in enumerate(chart.series):
            color = _PALETTE[si % len(_PALETTE)]
            pts = []
            for i, v in enumerate(values):
                x = pad + (w - 2 * pad) * (i / max(n - 1, 1))
                y = h - pad - (h - 2 * pad) * ((v - lo) / span)
                pts.append(f"{_fmt(x)},{_fmt(y)}")
            parts.append(
                f'<polyline points="{" ".join(pts)}" fill="none" stroke="{color}" '
                f'stroke-width="2" data-label="{html.escape(label)}"/>'
            )
    else:  # table rendered as rows of text
        y = 60.0
        header = "  ".join(["#", *[html.escape(l) for l, _ in chart.series]])
        parts.append(f'<text x="{_fmt(pad)}" y="{_fmt(y)}" font-size="14">{header}</text>')
        for i, xl in enumerate(chart.x_labels):
            y += 20.0
            row = "  ".join([html.escape(xl), *[_fmt(v[i]) for _, v in chart.series]])
            parts.append(f'<text x="{_fmt(pad)}" y="{_fmt(y)}" font-size="12">{row}</text>')

    parts.append("</svg>")
    return "".join(parts)


def _render_object(obj, opts: RenderOptions) -> str:
    if isinstance(obj, ChartSpec):
        return f'<div class="chart">{render_chart_svg(obj, opts)}</div>'
    if isinstance(obj, InsightBlock):
        items = "".join(f"<li>{html.escape(line)}</li>" for line in obj.lines)
        return f'<ul class="insights">{items}</ul>'
    if isinstance(obj, TableBlock):
        head = "".join(f"<th>{html.escape(c)}</th>" for c in obj.headers)
        body = "".join(
            "<tr>" + "".join(f"<td>{html.escape(c)}</td>" for c in row) + "</tr>"
            for row in obj.rows
        )
        return f"<table><thead><tr>{head}</tr></thead><tbody>{body}</tbody></table>"
    raise ValidationError(f"unknown slide object {type(obj).__name__}")


def _render_slide(slide: Slide, opts: RenderOptions) -> str:
    parts = [
        '<section class="slide">',
        f"<h2>{html.escape(slide.title)}</h2>",
        f'<p class="date">{slide.date.isoformat()}</p>',
    ]
    parts.extend(_render_object(obj, opts) for obj in slide.objects)
    parts.append("</section>")
    return "".join(parts)


_CSS = {
    "light": "body{font-family:sans-serif;background:#fff;color:#111}"
    ".slide{border:1px solid #ccc;margin:16px;padding:16px}",
    "dark": "body{font-family:sans-serif;background:#111;color:#eee}"
    ".slide{border:1px solid #444;margin:16px;padding:16px}",
}


def render_html(deck: Deck, opts: RenderOptions = RenderOptions()) -> str:
    """Standalone HTML document: one section per slide, inline SVG charts."""
    parts = [
        "<!DOCTYPE html>",
        '<html lang="en"><head><meta charset="utf-8">',
        f"<title>{html.escape(deck.name)}</title>",
        f"<style>{_CSS[opts.theme]}</style>",
        "</head><body>",
        f"<h1>{html.escape(deck.name)}</h1>",
    ]
    parts.extend(_render_slide(s, opts) for s in deck.slides)
    parts.append("</body></html>")
    return "".join(parts)
