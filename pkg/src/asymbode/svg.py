"""Two-panel Bode chart as a standalone SVG document.

Output depends only on the bundle and options: fixed number formatting,
no timestamps, no generated ids beyond fixed names.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from html import escape

import numpy as np

from .direct import phase_polyline, stepwise_polyline
from .report import PlotBundle

BLUE = "#1f4fd8"
RED = "#d81f1f"
GRID = "#dddddd"
PANEL_W = 800
PANEL_H = 600
MARGIN = dict(left=72, right=24, top=44, bottom=52)
# exact curves may spike at resonances; keep them within this band around the asymptote
EXACT_HEADROOM_DB = 40.0


def _f(x: float) -> str:
    return f"{x:.2f}"


@dataclass(frozen=True)
class Axes:
    """Maps (omega, value) to pixel coordinates inside one panel."""

    x0: float
    y0: float
    width: float
    height: float
    w_min: float
    w_max: float
    v_min: float
    v_max: float

    def px(self, omega: float) -> float:
        t = (math.log10(omega) - math.log10(self.w_min)) / (math.log10(self.w_max) - math.log10(self.w_min))
        return self.x0 + t * self.width

    def py(self, value: float) -> float:
        t = (value - self.v_min) / (self.v_max - self.v_min)
        return self.y0 + (1 - t) * self.height

    def omega_of(self, x: float) -> float:
        t = (x - self.x0) / self.width
        return 10 ** (math.log10(self.w_min) + t * (math.log10(self.w_max) - math.log10(self.w_min)))

    def value_of(self, y: float) -> float:
        t = 1 - (y - self.y0) / self.height
        return self.v_min + t * (self.v_max - self.v_min)


def _nice_range(values, step: float) -> tuple[float, float]:
    v = np.asarray([x for x in values if math.isfinite(x)], dtype=float)
    if not v.size:
        return -step, step
    lo = math.floor(float(v.min()) / step) * step
    hi = math.ceil(float(v.max()) / step) * step
    # keep flat curves off the frame
    if lo == float(v.min()):
        lo -= step / 2
    if hi == float(v.max()):
        hi += step / 2
    return lo, hi


def _points(ax: Axes, pts) -> str:
    return " ".join(f"{_f(ax.px(w))},{_f(ax.py(v))}" for w, v in pts)


def _runs(omega: np.ndarray, values: np.ndarray, lo: float, hi: float):
    """Split a sampled curve into finite runs, clamped to [lo, hi]."""
    run = []
    for w, v in zip(omega, values):
        if math.isfinite(v):
            run.append((float(w), min(max(float(v), lo), hi)))
        elif run:
            yield run
            run = []
    if run:
        yield run


def _frame(ax: Axes, step: float, unit: str, clip_id: str) -> list[str]:
    out = [f'<rect x="{_f(ax.x0)}" y="{_f(ax.y0)}" width="{_f(ax.width)}" height="{_f(ax.height)}" fill="white" stroke="#444444"/>']
    out.append(f'<clipPath id="{clip_id}"><rect x="{_f(ax.x0)}" y="{_f(ax.y0)}" width="{_f(ax.width)}" height="{_f(ax.height)}"/></clipPath>')
    for d in range(math.ceil(math.log10(ax.w_min) - 1e-9), math.floor(math.log10(ax.w_max) + 1e-9) + 1):
        x = ax.px(10.0**d)
        out.append(f'<line x1="{_f(x)}" y1="{_f(ax.y0)}" x2="{_f(x)}" y2="{_f(ax.y0 + ax.height)}" stroke="{GRID}"/>')
        out.append(f'<text x="{_f(x)}" y="{_f(ax.y0 + ax.height + 18)}" text-anchor="middle" font-size="12">1e{d}</text>')
    first = math.ceil(ax.v_min / step - 1e-9)
    last = math.floor(ax.v_max / step + 1e-9)
    for i in range(first, last + 1):
        v = i * step
        y = ax.py(v)
        out.append(f'<line x1="{_f(ax.x0)}" y1="{_f(y)}" x2="{_f(ax.x0 + ax.width)}" y2="{_f(y)}" stroke="{GRID}"/>')
        out.append(f'<text x="{_f(ax.x0 - 6)}" y="{_f(y + 4)}" text-anchor="end" font-size="12">{v:g}</text>')
    out.append(
        f'<text x="{_f(ax.x0 - 52)}" y="{_f(ax.y0 + ax.height / 2)}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 {_f(ax.x0 - 52)} {_f(ax.y0 + ax.height / 2)})">{unit}</text>'
    )
    out.append(f'<text x="{_f(ax.x0 + ax.width / 2)}" y="{_f(ax.y0 + ax.height + 40)}" text-anchor="middle" font-size="13">omega [rad/s]</text>')
    return out


def _legend(ax: Axes, entries) -> list[str]:
    x = ax.x0 + ax.width - 150
    y = ax.y0 + 10
    out = [f'<rect x="{_f(x)}" y="{_f(y)}" width="140" height="{_f(10 + 18 * len(entries))}" fill="white" stroke="#444444"/>']
    for i, (label, color, dash) in enumerate(entries):
        yy = y + 18 + 18 * i
        extra = ' stroke-dasharray="6,4"' if dash else ""
        out.append(f'<line x1="{_f(x + 8)}" y1="{_f(yy - 4)}" x2="{_f(x + 40)}" y2="{_f(yy - 4)}" stroke="{color}" stroke-width="2"{extra}/>')
        out.append(f'<text x="{_f(x + 48)}" y="{_f(yy)}" font-size="12">{label}</text>')
    return out


def magnitude_axes(bundle: PlotBundle, width: int = PANEL_W, height: int = PANEL_H, top: float = 0.0) -> Axes:
    w_min, w_max = bundle.span
    asym = bundle.magnitude.db_at(bundle.grid.omega)
    lo, hi = float(np.min(asym)), float(np.max(asym))
    exact = np.clip(bundle.exact_mag_db, lo - EXACT_HEADROOM_DB, hi + EXACT_HEADROOM_DB)
    v_min, v_max = _nice_range(np.concatenate([asym, exact]), 20.0)
    return Axes(MARGIN["left"], top + MARGIN["top"], width - MARGIN["left"] - MARGIN["right"],
                height - MARGIN["top"] - MARGIN["bottom"], w_min, w_max, v_min, v_max)


def phase_axes(bundle: PlotBundle, width: int = PANEL_W, height: int = PANEL_H, top: float = 0.0) -> Axes:
    w_min, w_max = bundle.span
    values = np.degrees(np.concatenate([np.asarray(bundle.stepwise.levels), bundle.exact_phase_rad]))
    v_min, v_max = _nice_range(values, 90.0)
    return Axes(MARGIN["left"], top + MARGIN["top"], width - MARGIN["left"] - MARGIN["right"],
                height - MARGIN["top"] - MARGIN["bottom"], w_min, w_max, v_min, v_max)


def render_svg(bundle: PlotBundle, title: str = "", width: int = PANEL_W, height: int = PANEL_H) -> str:
    """Magnitude panel above phase panel, sharing the log-frequency axis."""
    w_min, w_max = bundle.span
    w = bundle.grid.omega
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{2 * height}" '
        f'viewBox="0 0 {width} {2 * height}" font-family="sans-serif">',
        f'<rect x="0" y="0" width="{width}" height="{2 * height}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{width / 2:.2f}" y="24" text-anchor="middle" font-size="15">{escape(title)}</text>')

    # magnitude
    ax = magnitude_axes(bundle, width, height)
    out.append('<g class="magnitude">')
    out += _frame(ax, 20.0, "magnitude [dB]", "clip-mag")
    out.append('<g clip-path="url(#clip-mag)">')
    for run in _runs(w, bundle.exact_mag_db, ax.v_min, ax.v_max):
        out.append(f'<polyline class="exact" points="{_points(ax, run)}" fill="none" stroke="{RED}" stroke-width="1.5"/>')
    verts = bundle.magnitude.vertices(w_min, w_max)
    out.append(f'<polyline class="asymptotic" points="{_points(ax, verts)}" fill="none" stroke="{BLUE}" stroke-width="2"/>')
    for b in bundle.magnitude.breakpoints:
        if w_min <= b.omega <= w_max:
            out.append(
                f'<circle class="breakpoint" cx="{_f(ax.px(b.omega))}" cy="{_f(ax.py(b.gain_db))}" r="3.5" fill="{BLUE}" '
                f'data-omega="{b.omega:.12g}" data-mag-db="{b.gain_db:.12g}"/>'
            )
    # slope shorthand: 1 means +20 dB/dec, -2 means -40 dB/dec
    for (wa, va), (wb, vb), t in zip(verts[:-1], verts[1:], _segment_slopes(bundle, verts)):
        xm = (ax.px(wa) + ax.px(wb)) / 2
        ym = (ax.py(va) + ax.py(vb)) / 2 - 8
        out.append(f'<text class="slope" x="{_f(xm)}" y="{_f(ym)}" text-anchor="middle" font-size="12" fill="{BLUE}">{-t}</text>')
    out.append("</g>")
    out += _legend(ax, [("Asymptotic", BLUE, False), ("Actual", RED, False)])
    out.append("</g>")

    # phase
    ax = phase_axes(bundle, width, height, top=height)
    out.append('<g class="phase">')
    out += _frame(ax, 90.0, "phase [deg]", "clip-phase")
    out.append('<g clip-path="url(#clip-phase)">')
    for run in _runs(w, np.degrees(bundle.exact_phase_rad), ax.v_min, ax.v_max):
        out.append(f'<polyline class="exact" points="{_points(ax, run)}" fill="none" stroke="{RED}" stroke-width="1.5"/>')
    step = [(x, math.degrees(v)) for x, v in stepwise_polyline(bundle.stepwise, w_min, w_max)]
    out.append(f'<polyline class="stepwise" points="{_points(ax, step)}" fill="none" stroke="{BLUE}" stroke-width="2"/>')
    asym = [(x, math.degrees(v)) for x, v in phase_polyline(bundle.asymptotic, w_min, w_max)]
    out.append(
        f'<polyline class="asymptotic" points="{_points(ax, asym)}" fill="none" stroke="{BLUE}" '
        f'stroke-width="1.5" stroke-dasharray="6,4"/>'
    )
    for r in bundle.asymptotic.ramps:
        for x in (r.omega_a, r.omega_b):
            if w_min <= x <= w_max:
                out.append(
                    f'<line class="ramp-marker" x1="{_f(ax.px(x))}" y1="{_f(ax.y0)}" x2="{_f(ax.px(x))}" '
                    f'y2="{_f(ax.y0 + ax.height)}" stroke="{BLUE}" stroke-dasharray="2,3" stroke-width="0.8"/>'
                )
    out.append("</g>")
    out += _legend(ax, [("Stepwise", BLUE, False), ("Asymptotic", BLUE, True), ("Actual", RED, False)])
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _segment_slopes(bundle: PlotBundle, verts) -> list[int]:
    """Band slope t_k of each drawn segment, found from its midpoint."""
    edges = [b.omega for b in bundle.magnitude.breakpoints]
    slopes = []
    for (wa, _), (wb, _) in zip(verts[:-1], verts[1:]):
        mid = math.sqrt(wa * wb)
        k = sum(1 for e in edges if e <= mid)
        slopes.append(bundle.magnitude.slopes[k])
    return slopes
