"""Minimal hand-written SVG charts: axes, point markers, polylines and labels."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 480, 360
MARGIN = 56
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"]


@dataclass
class Chart:
    title: str = ""
    xlabel: str = "x"
    ylabel: str = "y"
    logx: bool = False
    logy: bool = False
    lines: list = field(default_factory=list)      # (label, [(x, y)], colour)
    scatters: list = field(default_factory=list)   # (label, [(x, y)], colour)
    notes: list = field(default_factory=list)

    def line(self, points, label="", color=None):
        self.lines.append((label, list(points), color or PALETTE[len(self.lines) % len(PALETTE)]))
        return self

    def scatter(self, points, label="", color="#333333"):
        self.scatters.append((label, list(points), color))
        return self

    def note(self, text):
        self.notes.append(text)
        return self

    def _tx(self, v):
        return math.log10(v) if self.logx else v

    def _ty(self, v):
        return math.log10(v) if self.logy else v

    def _usable(self, p):
        x, y = p
        return (not self.logx or x > 0) and (not self.logy or y > 0) and \
            math.isfinite(x) and math.isfinite(y)

    def render(self) -> str:
        pts = [p for _, ps, _ in self.lines + self.scatters for p in ps if self._usable(p)]
        if pts:
            xs = [self._tx(x) for x, _ in pts]
            ys = [self._ty(y) for _, y in pts]
            x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
        else:
            x0, x1, y0, y1 = 0.0, 1.0, 0.0, 1.0
        if x1 == x0:
            x0, x1 = x0 - 0.5, x1 + 0.5
        if y1 == y0:
            y0, y1 = y0 - 0.5, y1 + 0.5
        pw, ph = WIDTH - 2 * MARGIN, HEIGHT - 2 * MARGIN

        def sx(v):
            return MARGIN + (self._tx(v) - x0) / (x1 - x0) * pw

        def sy(v):
            return HEIGHT - MARGIN - (self._ty(v) - y0) / (y1 - y0) * ph

        out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
               f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
               f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
               f'<text class="title" x="{WIDTH / 2}" y="20" text-anchor="middle" '
               f'font-size="13">{escape(self.title)}</text>',
               f'<g class="axes" stroke="black"><line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" '
               f'x2="{WIDTH - MARGIN}" y2="{HEIGHT - MARGIN}"/>'
               f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{HEIGHT - MARGIN}"/></g>']
        for frac in (0.0, 0.5, 1.0):
            xv, yv = x0 + frac * (x1 - x0), y0 + frac * (y1 - y0)
            xt = 10 ** xv if self.logx else xv
            yt = 10 ** yv if self.logy else yv
            out.append(f'<text class="tick" x="{MARGIN + frac * pw:.1f}" y="{HEIGHT - MARGIN + 14}" '
                       f'text-anchor="middle">{xt:.3g}</text>')
            out.append(f'<text class="tick" x="{MARGIN - 4}" y="{HEIGHT - MARGIN - frac * ph + 4:.1f}" '
                       f'text-anchor="end">{yt:.3g}</text>')
        scale = (" (log)" if self.logx else "", " (log)" if self.logy else "")
        out.append(f'<text x="{WIDTH / 2}" y="{HEIGHT - 16}" text-anchor="middle">'
                   f'{escape(self.xlabel + scale[0])}</text>')
        out.append(f'<text x="14" y="{HEIGHT / 2}" text-anchor="middle" '
                   f'transform="rotate(-90 14 {HEIGHT / 2})">{escape(self.ylabel + scale[1])}</text>')
        for label, ps, color in self.lines:
            coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in ps if self._usable((x, y)))
            out.append(f'<polyline class="curve" fill="none" stroke="{color}" stroke-width="1.5" '
                       f'points="{coords}"><title>{escape(label)}</title></polyline>')
        for label, ps, color in self.scatters:
            for x, y in ps:
                if self._usable((x, y)):
                    out.append(f'<circle class="point" cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" '
                               f'fill="{color}"/>')
        legend = [(lab, col) for lab, _, col in self.lines + self.scatters if lab]
        for i, (lab, col) in enumerate(legend):
            y = MARGIN + 4 + 14 * i
            out.append(f'<text class="legend" x="{WIDTH - MARGIN - 4}" y="{y}" text-anchor="end" '
                       f'fill="{col}">{escape(lab)}</text>')
        for i, text in enumerate(self.notes):
            out.append(f'<text class="annotation" x="{MARGIN + 8}" y="{MARGIN + 4 + 14 * i}">'
                       f'{escape(text)}</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"


def stack(charts, columns: int = 2) -> str:
    """Lay several charts out on one page."""
    rows = math.ceil(len(charts) / columns) if charts else 1
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH * columns}" '
           f'height="{HEIGHT * rows}">']
    for i, chart in enumerate(charts):
        x, y = (i % columns) * WIDTH, (i // columns) * HEIGHT
        body = chart.render().replace('<svg xmlns="http://www.w3.org/2000/svg"',
                                      f'<svg x="{x}" y="{y}"', 1)
        out.append(body)
    out.append("</svg>")
    return "\n".join(out) + "\n"
