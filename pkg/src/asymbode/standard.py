"""Classical factor-summation construction, kept independent as an oracle.

G(s) is split into a constant gain, an origin pole/zero and one
unity-DC-gain factor per polynomial term (``1 + c1 s + c2 s^2``).  Each
factor gets its own textbook asymptotes, evaluated on a shared grid, and
the curves are added.  Corner frequencies, damping and phase signs are
derived here from the normalised coefficients, not borrowed from the
direct method.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .model import TransferFunction, ensure_valid
from .response import FrequencyGrid, log_grid

RAMP_BASE = 4.81
DEFAULT_PPD = 200


class GridMismatch(ValueError):
    pass


class ComponentKind(enum.Enum):
    GAIN = "gain"
    ORIGIN_POLE = "origin"
    FIRST_ORDER = "first"
    SECOND_ORDER = "second"


@dataclass(frozen=True)
class Component:
    kind: ComponentKind
    value: float = 1.0  # gain for GAIN, exponent h for ORIGIN_POLE
    c1: float = 0.0
    c2: float = 0.0
    multiplicity: int = 1
    numerator: bool = True
    term_index: int | None = None

    def __call__(self, s):
        if self.kind is ComponentKind.GAIN:
            return self.value + 0 * s
        if self.kind is ComponentKind.ORIGIN_POLE:
            return s ** (-int(self.value))
        p = (1 + self.c1 * s + self.c2 * s * s) ** self.multiplicity
        return p if self.numerator else 1 / p

    @property
    def corner(self) -> float:
        if self.kind is ComponentKind.FIRST_ORDER:
            return 1.0 / abs(self.c1)
        if self.kind is ComponentKind.SECOND_ORDER:
            return 1.0 / math.sqrt(self.c2)
        raise AttributeError("only polynomial components have a corner")

    @property
    def damping(self) -> float:
        if self.kind is ComponentKind.SECOND_ORDER:
            return self.c1 / (2.0 * math.sqrt(self.c2))
        return 1.0

    def __str__(self) -> str:
        if self.kind is ComponentKind.GAIN:
            return f"{self.value:g}"
        if self.kind is ComponentKind.ORIGIN_POLE:
            h = int(self.value)
            return f"1/s^{h}" if h > 0 else f"s^{-h}"
        body = f"1{self.c1:+g}*s"
        if self.kind is ComponentKind.SECOND_ORDER:
            body += f"{self.c2:+g}*s^2"
        power = f"^{self.multiplicity}" if self.multiplicity > 1 else ""
        return f"({body}){power}" if self.numerator else f"1/({body}){power}"


@dataclass(frozen=True)
class SampledPlot:
    grid: np.ndarray
    mag_db: np.ndarray
    phase_rad: np.ndarray

    def __post_init__(self):
        if not (len(self.grid) == len(self.mag_db) == len(self.phase_rad)):
            raise ValueError("grid, magnitude and phase must have equal lengths")
        if np.any(np.diff(self.grid) <= 0):
            raise ValueError("grid must be strictly increasing")


def factor_components(tf: TransferFunction) -> list[Component]:
    """Gain, origin factor and unity-DC factors whose product is ``tf``.

    Normalising ``a0 + a1 s + a2 s^2`` to ``a0 (1 + a1/a0 s + a2/a0 s^2)``
    moves ``a0`` (and with it any sign) into the gain component.
    """
    ensure_valid(tf)
    gain = tf.gain
    comps = []
    for i, t in enumerate(tf.terms):
        scale = t.a0**t.multiplicity
        gain = gain * scale if t.is_numerator else gain / scale
        kind = ComponentKind.SECOND_ORDER if t.a2 != 0 else ComponentKind.FIRST_ORDER
        comps.append(Component(kind, 1.0, t.a1 / t.a0, t.a2 / t.a0, t.multiplicity, t.is_numerator, i))
    head = [Component(ComponentKind.GAIN, gain)]
    if tf.origin_exp:
        head.append(Component(ComponentKind.ORIGIN_POLE, float(tf.origin_exp)))
    return head + comps


def component_asymptotes(c: Component, grid, phase: str = "stepwise") -> SampledPlot:
    """Textbook asymptotes of one component on ``grid``.

    ``phase`` selects the stepwise (``"stepwise"``) or ramped
    (``"asymptotic"``) phase approximation.
    """
    w = np.asarray(grid.omega if isinstance(grid, FrequencyGrid) else grid, dtype=float)
    if np.any(w <= 0) or np.any(np.diff(w) <= 0):
        raise ValueError("grid must be positive and strictly increasing")
    if phase not in ("stepwise", "asymptotic"):
        raise ValueError(f"unknown phase model {phase!r}")
    lw = np.log10(w)
    if c.kind is ComponentKind.GAIN:
        ph = 0.0 if c.value > 0 else -math.pi
        return SampledPlot(w, np.full(w.shape, 20.0 * math.log10(abs(c.value))), np.full(w.shape, ph))
    if c.kind is ComponentKind.ORIGIN_POLE:
        h = int(c.value)
        return SampledPlot(w, -20.0 * h * lw, np.full(w.shape, -h * math.pi / 2))
    n = 1 if c.kind is ComponentKind.FIRST_ORDER else 2
    side = 1 if c.numerator else -1
    wc = c.corner
    lc = math.log10(wc)
    mag = side * c.multiplicity * 20.0 * n * np.maximum(lw - lc, 0.0)
    # left-half-plane roots iff the normalised s coefficient is positive
    stable = c.c1 > 0 if n == 1 else c.c1 >= 0
    jump = side * (1 if stable else -1) * n * c.multiplicity * math.pi / 2
    if phase == "stepwise":
        ph = np.where(w >= wc, jump, 0.0)
    else:
        width = 1.0 if n == 1 else abs(c.damping)
        half = width * math.log10(RAMP_BASE)
        if half == 0:
            ph = np.where(w >= wc, jump, 0.0)
        else:
            ph = jump * np.clip((lw - (lc - half)) / (2 * half), 0.0, 1.0)
    return SampledPlot(w, mag, ph)


def sum_components(plots: list[SampledPlot], grid=None) -> SampledPlot:
    """Add component curves in list order; an empty list needs ``grid``."""
    if not plots:
        if grid is None:
            raise GridMismatch("an empty sum needs an explicit grid")
        w = np.asarray(grid.omega if isinstance(grid, FrequencyGrid) else grid, dtype=float)
        return SampledPlot(w, np.zeros(w.shape), np.zeros(w.shape))
    w = plots[0].grid
    mag = np.zeros(w.shape)
    ph = np.zeros(w.shape)
    for p in plots:
        if p.grid.shape != w.shape or np.any(p.grid != w):
            raise GridMismatch("component plots were sampled on different grids")
        mag = mag + p.mag_db
        ph = ph + p.phase_rad
    return SampledPlot(w, mag, ph)


def standard_plot(tf: TransferFunction, grid, phase: str = "stepwise") -> SampledPlot:
    comps = factor_components(tf)
    return sum_components([component_asymptotes(c, grid, phase) for c in comps])


def corner_frequencies(tf: TransferFunction) -> list[float]:
    return sorted({c.corner for c in factor_components(tf) if c.kind in (ComponentKind.FIRST_ORDER, ComponentKind.SECOND_ORDER)})


def default_grid(tf: TransferFunction, ppd: int = DEFAULT_PPD) -> FrequencyGrid:
    """One decade below min(corners, 1) to one decade above max(corners, 1)."""
    freqs = corner_frequencies(tf) + [1.0]
    return log_grid(min(freqs) / 10.0, max(freqs) * 10.0, ppd)
