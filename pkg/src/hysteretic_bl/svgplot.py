"""Minimal static SVG line and scatter plots.

Enough for profile overlays and wave-fan diagrams: linear axes with
rounded ticks, polylines, markers and a legend. Output depends only on
the inputs, so repeated runs give identical files.
"""

import math
from dataclasses import dataclass, field
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

PALETTE = ("#1f4e9c", "#c0392b", "#222222", "#2e8b57", "#8e44ad", "#d4860b")


def nice_ticks(lo, hi, target=6):
    """Round tick positions covering ``[lo, hi]``."""
    if not math.isfinite(lo) or not math.isfinite(hi):
        raise ValueError("axis limits must be finite")
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(target - 1, 1)
    mag = 10 ** math.floor(math.log10(raw))
    step = next(k * mag for k in (1, 2, 2.5, 5, 10) if k * mag >= raw)
    k0 = math.ceil(lo / step - 1e-9)
    k1 = math.floor(hi / step + 1e-9)
    ticks = [round(k * step, 12) + 0.0 for k in range(k0, k1 + 1)]
    return ticks


def _num(v):
    return f"{v:.2f}"


def _label(v):
    s = f"{v:.6g}"
    return "0" if s == "-0" else s


@dataclass
class Series:
    x: np.ndarray
    y: np.ndarray
    label: str | None
    color: str
    kind: str = "line"
    dash: str | None = None
    width: float = 1.6
    size: float = 2.0


@dataclass
class Plot:
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    width: int = 640
    height: int = 420
    xlim: tuple | None = None
    ylim: tuple | None = None
    series: list = field(default_factory=list)

    margin = (64, 24, 40, 56)  # left, right, top, bottom

    def _color(self, color):
        return color or PALETTE[len(self.series) % len(PALETTE)]

    def line(self, x, y, label=None, color=None, dash=None, width=1.6):
        self.series.append(Series(np.asarray(x, float), np.asarray(y, float), label, self._color(color), "line", dash, width))
        return self

    def scatter(self, x, y, label=None, color=None, size=2.0):
        self.series.append(Series(np.asarray(x, float), np.asarray(y, float), label, self._color(color), "scatter", size=size))
        return self

    def _limits(self):
        xs = np.concatenate([s.x for s in self.series]) if self.series else np.array([0.0, 1.0])
        ys = np.concatenate([s.y for s in self.series]) if self.series else np.array([0.0, 1.0])
        xs, ys = xs[np.isfinite(xs)], ys[np.isfinite(ys)]
        xl = self.xlim or (float(xs.min()), float(xs.max()))
        if self.ylim:
            yl = self.ylim
        else:
            pad = 0.05 * (ys.max() - ys.min() or 1.0)
            yl = (float(ys.min() - pad), float(ys.max() + pad))
        return xl, yl

    def render(self):
        (x0, x1), (y0, y1) = self._limits()
        if x1 <= x0:
            x1 = x0 + 1.0
        if y1 <= y0:
            y1 = y0 + 1.0
        ml, mr, mt, mb = self.margin
        pw, ph = self.width - ml - mr, self.height - mt - mb

        def X(v):
            return ml + (v - x0) / (x1 - x0) * pw

        def Y(v):
            return mt + ph - (v - y0) / (y1 - y0) * ph

        out = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}" font-family="sans-serif" font-size="11">',
            f'<rect width="{self.width}" height="{self.height}" fill="white"/>',
            f'<defs><clipPath id="plotarea"><rect x="{ml}" y="{mt}" width="{pw}" height="{ph}"/></clipPath></defs>',
        ]
        for t in nice_ticks(x0, x1):
            if x0 - 1e-12 <= t <= x1 + 1e-12:
                out.append(f'<line x1="{_num(X(t))}" y1="{mt + ph}" x2="{_num(X(t))}" y2="{mt + ph + 4}" stroke="black"/>')
                out.append(f'<text x="{_num(X(t))}" y="{mt + ph + 16}" text-anchor="middle">{_label(t)}</text>')
        for t in nice_ticks(y0, y1):
            if y0 - 1e-12 <= t <= y1 + 1e-12:
                out.append(f'<line x1="{ml - 4}" y1="{_num(Y(t))}" x2="{ml}" y2="{_num(Y(t))}" stroke="black"/>')
                out.append(f'<text x="{ml - 7}" y="{_num(Y(t) + 4)}" text-anchor="end">{_label(t)}</text>')
        out.append(f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')

        out.append('<g clip-path="url(#plotarea)">')
        for s in self.series:
            ok = np.isfinite(s.x) & np.isfinite(s.y)
            if s.kind == "line":
                pts = " ".join(f"{_num(X(a))},{_num(Y(b))}" for a, b in zip(s.x[ok], s.y[ok]))
                dash = f' stroke-dasharray="{s.dash}"' if s.dash else ""
                out.append(f'<polyline points="{pts}" fill="none" stroke="{s.color}" stroke-width="{s.width}"{dash}/>')
            else:
                for a, b in zip(s.x[ok], s.y[ok]):
                    out.append(f'<circle cx="{_num(X(a))}" cy="{_num(Y(b))}" r="{s.size}" fill="{s.color}"/>')
        out.append("</g>")

        if self.title:
            out.append(f'<text x="{ml + pw / 2:.2f}" y="{mt - 14}" text-anchor="middle" font-size="13">{escape(self.title)}</text>')
        if self.xlabel:
            out.append(f'<text x="{ml + pw / 2:.2f}" y="{self.height - 12}" text-anchor="middle">{escape(self.xlabel)}</text>')
        if self.ylabel:
            cy = mt + ph / 2
            out.append(f'<text x="16" y="{cy:.2f}" text-anchor="middle" transform="rotate(-90 16 {cy:.2f})">{escape(self.ylabel)}</text>')

        labelled = [s for s in self.series if s.label]
        for i, s in enumerate(labelled):
            ly = mt + 14 + 15 * i
            lx = ml + pw - 150
            if s.kind == "line":
                dash = f' stroke-dasharray="{s.dash}"' if s.dash else ""
                out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" stroke="{s.color}" stroke-width="{s.width}"{dash}/>')
            else:
                out.append(f'<circle cx="{lx + 11}" cy="{ly - 4}" r="{s.size + 1}" fill="{s.color}"/>')
            out.append(f'<text x="{lx + 28}" y="{ly}">{escape(s.label)}</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"

    def save(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.render())
        return path
