"""
rendering.py - Profile and virtual-profile figures in codimension × weight axes.

One RenderPlan of exact coordinates feeds three outputs:
  - SVG 1.1 document (filled staircase, polyline with dots, tick marks)
  - monospace ASCII grid, at most 120 columns wide
  - interactive plotly HTML figure
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import plotly.graph_objects as go

from virtual_profile import VirtualProfile
from xtilde_profile import XtildeFiltration, xtilde_step_profile

logger = logging.getLogger(__name__)

FORMATS = ("svg", "ascii", "html")

PROFILE_COLOR = "#3b82f6"
VIRTUAL_COLOR = "#ef4444"
AXIS_COLOR = "#334155"
TEXT_COLOR = "#0f172a"

SVG_WIDTH = 800
SVG_HEIGHT = 500
SVG_MARGIN = 60
MAX_TICKS = 12

ASCII_MAX_WIDTH = 120
ASCII_HEIGHT = 20
ASCII_FILL = "#"
ASCII_DOT = "o"
ASCII_LINE = "+"


# ─── Plan ─────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class RenderPlan:
    rects: tuple        # (x0, x1, weight): profile steps of positive width
    dots: tuple         # (codim, weight): virtual-profile vertices
    x_max: Fraction
    y_max: Fraction
    x_ticks: tuple
    y_ticks: tuple
    terminal_width: int = 0    # drawn width of the terminal stage
    terminal_dim: int = 0      # its true width

    @property
    def truncated(self) -> bool:
        return self.terminal_width < self.terminal_dim

    def truncation_note(self) -> str:
        return f"last step truncated (width {self.terminal_width} of {self.terminal_dim})"


def _thin(values: list) -> tuple:
    """At most MAX_TICKS evenly spaced entries, always keeping the first."""
    if len(values) <= MAX_TICKS:
        return tuple(values)
    stride = math.ceil(len(values) / MAX_TICKS)
    return tuple(values[::stride])


def build_plan(xf: XtildeFiltration, vp: VirtualProfile) -> RenderPlan:
    """
    Exact geometry of the figure. The terminal stage is drawn over a
    quarter of the terminal codimension (its full width when that is 0);
    every output notes when that cuts it short.
    """
    profile = xtilde_step_profile(xf)
    rects = []
    for (start, weight), width in zip(profile.steps, profile.widths()):
        if width > 0:
            rects.append((Fraction(start), Fraction(start + width), weight))

    codim, weight, dim = profile.terminal
    tail = dim if codim == 0 else min(dim, max(1, math.ceil(codim / 4)))
    if tail > 0:
        rects.append((Fraction(codim), Fraction(codim + tail), weight))

    x_max = Fraction(codim + tail) if tail > 0 else Fraction(max(codim, 1))
    weights = [w for _, _, w in rects] + [y for _, y in vp.vertices]
    y_max = max(weights, default=Fraction(1)) or Fraction(1)

    pitch = xf.mf.u * xf.mf.v
    x_ticks = _thin(list(range(0, int(x_max) + 1, pitch)))
    y_ticks = _thin(sorted({y for _, y in vp.vertices}))
    return RenderPlan(
        rects=tuple(rects),
        dots=tuple(vp.vertices),
        x_max=x_max,
        y_max=y_max,
        x_ticks=x_ticks,
        y_ticks=y_ticks,
        terminal_width=tail,
        terminal_dim=dim,
    )


# ─── SVG ──────────────────────────────────────────────────────────────────────

class SvgCanvas:
    def __init__(self):
        self.svg = ""

    def header(self, width, height):
        self.svg += f"""<?xml version="1.0" standalone="no"?>
<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" "http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">
<svg version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}" xmlns="http://www.w3.org/2000/svg">
"""

    def filled_rectangle(self, x1, y1, x2, y2, fill, extra=""):
        self.svg += f'<rect x="{x1:.2f}" y="{y1:.2f}" width="{x2 - x1:.2f}" height="{y2 - y1:.2f}" fill="{fill}" {extra}/>\n'

    def line(self, x1, y1, x2, y2, stroke, extra=""):
        self.svg += f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" stroke="{stroke}" {extra}/>\n'

    def polyline(self, points, stroke, extra=""):
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in points)
        self.svg += f'<polyline points="{coords}" fill="none" stroke="{stroke}" {extra}/>\n'

    def circle(self, x, y, radius, fill):
        self.svg += f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{radius}" fill="{fill}"/>\n'

    def string_ttf(self, x, y, string, extra=""):
        self.svg += f'<text x="{x:.2f}" y="{y:.2f}" {extra}>{string}</text>\n'

    def get_svg(self):
        return f"{self.svg}</svg>\n"


def render_svg(plan: RenderPlan, title: str = "") -> str:
    width = SVG_WIDTH - 2 * SVG_MARGIN
    height = SVG_HEIGHT - 2 * SVG_MARGIN
    sx = width / plan.x_max
    sy = height / plan.y_max

    def px(x) -> float:
        return SVG_MARGIN + float(x * sx)

    def py(y) -> float:
        return SVG_MARGIN + height - float(y * sy)

    canvas = SvgCanvas()
    canvas.header(SVG_WIDTH, SVG_HEIGHT)
    if title:
        canvas.string_ttf(SVG_MARGIN, SVG_MARGIN / 2, title, f'font-size="16" fill="{TEXT_COLOR}"')

    for x0, x1, weight in plan.rects:
        canvas.filled_rectangle(px(x0), py(weight), px(x1), py(0), PROFILE_COLOR, 'fill-opacity="0.45"')

    # Axes and ticks
    canvas.line(px(0), py(0), px(plan.x_max), py(0), AXIS_COLOR)
    canvas.line(px(0), py(0), px(0), py(plan.y_max), AXIS_COLOR)
    for x in plan.x_ticks:
        canvas.line(px(x), py(0), px(x), py(0) + 5, AXIS_COLOR)
        canvas.string_ttf(px(x), py(0) + 18, x, f'font-size="10" text-anchor="middle" fill="{TEXT_COLOR}"')
    for y in plan.y_ticks:
        canvas.line(px(0) - 5, py(y), px(0), py(y), AXIS_COLOR)
        canvas.string_ttf(px(0) - 8, py(y) + 3, y, f'font-size="10" text-anchor="end" fill="{TEXT_COLOR}"')
    canvas.string_ttf(px(plan.x_max), py(0) + 34, "codimension", f'font-size="12" text-anchor="end" fill="{TEXT_COLOR}"')
    canvas.string_ttf(px(0), SVG_MARGIN - 8, "weight", f'font-size="12" fill="{TEXT_COLOR}"')
    if plan.truncated:
        canvas.string_ttf(px(plan.x_max), SVG_MARGIN - 8, plan.truncation_note(), f'font-size="11" text-anchor="end" fill="{TEXT_COLOR}"')

    canvas.polyline([(px(x), py(y)) for x, y in plan.dots], VIRTUAL_COLOR, 'stroke-width="2"')
    for x, y in plan.dots:
        canvas.circle(px(x), py(y), 4, VIRTUAL_COLOR)
    return canvas.get_svg()


# ─── ASCII ────────────────────────────────────────────────────────────────────

def _profile_at(plan: RenderPlan, x: Fraction) -> Fraction:
    for x0, x1, weight in plan.rects:
        if x0 <= x < x1:
            return weight
    return Fraction(0)


def _virtual_at(plan: RenderPlan, x: Fraction) -> Fraction | None:
    """Height of the polyline at codim x; the highest value at a vertical jump."""
    best = None
    for (x0, y0), (x1, y1) in zip(plan.dots, plan.dots[1:]):
        if x0 <= x <= x1:
            y = y0 if x1 == x0 else y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            best = y if best is None else max(best, y)
    return best


def render_ascii(plan: RenderPlan) -> str:
    columns_available = ASCII_MAX_WIDTH - 2
    span = math.ceil(plan.x_max)
    step = max(1, math.ceil(Fraction(span, columns_available)))
    columns = math.ceil(Fraction(span, step))
    H = ASCII_HEIGHT

    grid = [[" "] * columns for _ in range(H)]

    def row_of(y: Fraction) -> int:
        return min(H - 1, max(0, H - round(y * H / plan.y_max)))

    for col in range(columns):
        x = Fraction(col * step)
        value = _profile_at(plan, x)
        for row in range(H):
            if value * H >= (H - row) * plan.y_max:
                grid[row][col] = ASCII_FILL
        virtual = _virtual_at(plan, x)
        if virtual is not None:
            grid[row_of(virtual)][col] = ASCII_LINE
    for x, y in plan.dots:
        col = min(columns - 1, int(x // step))
        grid[row_of(y)][col] = ASCII_DOT

    lines = ["|" + "".join(row).rstrip() for row in grid]
    lines.append("+" + "-" * columns)
    caption = f"codim 0..{plan.x_max}, weight 0..{plan.y_max}"
    if step > 1:
        caption += f" (downsampled: 1 column = {step} codim)"
    if plan.truncated:
        caption += f"; {plan.truncation_note()}"
    lines.append(caption)
    return "\n".join(lines) + "\n"


# ─── Plotly ───────────────────────────────────────────────────────────────────

def build_profile_figure(plan: RenderPlan, title: str = "") -> go.Figure:
    """
    Interactive figure: the staircase as a filled step trace and the
    virtual profile as a line with markers.
    """
    step_x, step_y = [], []
    for x0, x1, weight in plan.rects:
        step_x += [float(x0), float(x1)]
        step_y += [float(weight), float(weight)]

    fig = go.Figure()
    fig.add_trace(go.Scatter(
        x=step_x,
        y=step_y,
        mode="lines",
        line=dict(color=PROFILE_COLOR, shape="hv"),
        fill="tozeroy",
        name="profile",
        hovertemplate="codim %{x}<br>weight %{y}<extra></extra>",
    ))
    fig.add_trace(go.Scatter(
        x=[float(x) for x, _ in plan.dots],
        y=[float(y) for _, y in plan.dots],
        mode="lines+markers",
        line=dict(color=VIRTUAL_COLOR, width=2),
        marker=dict(size=8, color=VIRTUAL_COLOR),
        name="virtual profile",
        customdata=[[str(x), str(y)] for x, y in plan.dots],
        hovertemplate="codim %{customdata[0]}<br>weight %{customdata[1]}<extra></extra>",
    ))
    fig.update_layout(
        title=dict(text=title, font=dict(size=18), x=0.01),
        xaxis=dict(title="codimension", tickvals=[float(x) for x in plan.x_ticks]),
        yaxis=dict(title="weight", tickvals=[float(y) for y in plan.y_ticks]),
        legend=dict(bordercolor=AXIS_COLOR, borderwidth=1),
        margin=dict(l=40, r=20, t=50, b=40),
        height=520,
    )
    if plan.truncated:
        fig.add_annotation(
            text=plan.truncation_note(),
            xref="paper", yref="paper", x=1, y=1.02,
            showarrow=False, xanchor="right",
        )
    return fig


def render(xf: XtildeFiltration, vp: VirtualProfile, fmt: str, title: str = "") -> str | go.Figure:
    """SVG or ASCII text, or a plotly Figure for "html"."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}, expected one of {', '.join(FORMATS)}")
    plan = build_plan(xf, vp)
    logger.debug("render %s: %d steps, %d dots", fmt, len(plan.rects), len(plan.dots))
    if fmt == "svg":
        return render_svg(plan, title)
    if fmt == "ascii":
        return render_ascii(plan)
    return build_profile_figure(plan, title)
