"""Direct construction of asymptotic Bode plots from approximating functions.

The distinct corner frequencies split the frequency axis into bands.  On
band ``k`` every term whose corner lies at or below ``omega_k`` is
replaced by its highest-order monomial and every other term by its
constant coefficient, which collapses G(s) to a single monomial
``K_k / s**t_k``.  Magnitude breakpoints and phase levels follow from
these monomials without drawing any per-factor plots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model import (
    ApproxFunction,
    TransferFunction,
    compute_attributes,
    ensure_valid,
    reduced_monomial,
)

MERGE_RTOL = 1e-9
GAIN_RTOL = 1e-9
RAMP_BASE = 4.81


class InconsistentGain(ArithmeticError):
    """The two evaluations of a critical gain disagree."""


@dataclass(frozen=True)
class CriticalSet:
    freqs: tuple[float, ...]
    index_sets: tuple[frozenset[int], ...]

    def __len__(self) -> int:
        return len(self.freqs)

    def group_of(self, term_index: int) -> int:
        """1-based band index k whose corner owns the term."""
        for k, members in enumerate(self.index_sets, start=1):
            if term_index in members:
                return k
        raise KeyError(term_index)

    def bands(self) -> list[tuple[float, float]]:
        edges = [0.0, *self.freqs, math.inf]
        return list(zip(edges[:-1], edges[1:]))


@dataclass(frozen=True)
class Breakpoint:
    omega: float
    gain: float
    gain_db: float


@dataclass(frozen=True)
class MagnitudePlot:
    breakpoints: tuple[Breakpoint, ...]
    slopes: tuple[int, ...]
    low_gain: float  # |K_0|, only used when there are no breakpoints

    @property
    def slopes_db_per_decade(self) -> tuple[float, ...]:
        return tuple(-20.0 * t for t in self.slopes)

    def db_at(self, omega) -> np.ndarray:
        """Asymptotic magnitude in dB, vectorised over ``omega``."""
        w = np.asarray(omega, dtype=float)
        lw = np.log10(w)
        if not self.breakpoints:
            return 20.0 * np.log10(self.low_gain) - 20.0 * self.slopes[0] * lw
        bw = np.array([b.omega for b in self.breakpoints])
        bdb = np.array([b.gain_db for b in self.breakpoints])
        lb = np.log10(bw)
        out = np.empty_like(lw)
        low = w < bw[0]
        out[low] = bdb[0] - 20.0 * self.slopes[0] * (lw[low] - lb[0])
        high = w >= bw[-1]
        out[high] = bdb[-1] - 20.0 * self.slopes[-1] * (lw[high] - lb[-1])
        inner = ~(low | high)
        if np.any(inner):
            k = np.searchsorted(bw, w[inner], side="right") - 1
            frac = (lw[inner] - lb[k]) / (lb[k + 1] - lb[k])
            out[inner] = bdb[k] + (bdb[k + 1] - bdb[k]) * frac
        return out

    def vertices(self, omega_min: float, omega_max: float) -> list[tuple[float, float]]:
        """Polyline (omega, dB) spanning ``[omega_min, omega_max]``."""
        inside = [b.omega for b in self.breakpoints if omega_min < b.omega < omega_max]
        ws = [omega_min, *inside, omega_max]
        return list(zip(ws, (float(v) for v in self.db_at(ws))))


@dataclass(frozen=True)
class StepwisePhasePlot:
    levels: tuple[float, ...]
    bands: tuple[tuple[float, float], ...]
    quarter_turns: tuple[int, ...]  # levels in units of pi/2

    def at(self, omega) -> np.ndarray:
        """Level of the band containing ``omega`` (right level on a corner)."""
        w = np.asarray(omega, dtype=float)
        edges = np.array([b[0] for b in self.bands[1:]])
        k = np.searchsorted(edges, w, side="right")
        return np.asarray(self.levels)[k]


@dataclass(frozen=True)
class PhaseRamp:
    term_index: int
    omega_a: float
    omega_b: float
    delta_phi: float


@dataclass(frozen=True)
class AsymptoticPhasePlot:
    nodes: tuple[tuple[float, float], ...]
    ramps: tuple[PhaseRamp, ...]
    start: float

    def at(self, omega) -> np.ndarray:
        """Piecewise-linear interpolation of the nodes against log10(omega)."""
        w = np.asarray(omega, dtype=float)
        inner = [(w_, p) for w_, p in self.nodes if 0 < w_ < math.inf]
        end = self.nodes[-1][1]
        if not inner:
            return np.full(w.shape, self.start)
        xs = np.log10([n[0] for n in inner])
        ys = np.array([n[1] for n in inner])
        return np.interp(np.log10(w), xs, ys, left=self.start, right=end)


def _ramp_fraction(lw: np.ndarray, ramp: PhaseRamp) -> np.ndarray:
    la, lb = math.log10(ramp.omega_a), math.log10(ramp.omega_b)
    if lb == la:
        return (lw >= la).astype(float)
    return np.clip((lw - la) / (lb - la), 0.0, 1.0)


def critical_set(tf: TransferFunction) -> CriticalSet:
    """Distinct sorted corner frequencies and the terms sitting on each."""
    ensure_valid(tf)
    wc = [compute_attributes(t).critical_freq for t in tf.terms]
    order = sorted(range(len(wc)), key=lambda i: (wc[i], i))
    freqs: list[float] = []
    groups: list[set[int]] = []
    for i in order:
        if freqs and abs(wc[i] - freqs[-1]) <= MERGE_RTOL * max(wc[i], freqs[-1]):
            groups[-1].add(i)
        else:
            freqs.append(wc[i])
            groups.append({i})
    return CriticalSet(tuple(freqs), tuple(frozenset(g) for g in groups))


def approx_function(tf: TransferFunction, k: int, cs: CriticalSet | None = None) -> ApproxFunction:
    """The monomial ``K_k / s**t_k`` valid on band ``k`` (0..r)."""
    if cs is None:
        cs = critical_set(tf)
    r = len(cs)
    if not 0 <= k <= r:
        raise IndexError(f"band index {k} outside 0..{r}")
    owner = {i: g for g, members in enumerate(cs.index_sets, start=1) for i in members}
    coeff, t = reduced_monomial(tf, lambda i: owner[i] <= k)
    return ApproxFunction(coeff, t, cs.bands()[k])


def approx_functions(tf: TransferFunction) -> list[ApproxFunction]:
    cs = critical_set(tf)
    return [approx_function(tf, k, cs) for k in range(len(cs) + 1)]


def relative_degrees(tf: TransferFunction) -> list[int]:
    """Band slopes ``t_0..t_r`` by recursion over the corner groups.

    Each term's step is weighted by its multiplicity and order.
    """
    cs = critical_set(tf)
    ts = [tf.origin_exp]
    for members in cs.index_sets:
        step = 0
        for i in sorted(members):
            term = tf.terms[i]
            a = compute_attributes(term)
            step += term.multiplicity * a.zp_sign * a.order
        ts.append(ts[-1] - step)
    return ts


def critical_gains_direct(tf: TransferFunction) -> list[float]:
    """``M_k = |G_{k-1}(j w_k)|``, cross-checked against ``|G_k(j w_k)|``."""
    cs = critical_set(tf)
    approx = [approx_function(tf, k, cs) for k in range(len(cs) + 1)]
    gains = []
    for k, w in enumerate(cs.freqs, start=1):
        left = approx[k - 1].magnitude(w)
        right = approx[k].magnitude(w)
        if not math.isclose(left, right, rel_tol=GAIN_RTOL, abs_tol=0.0):
            raise InconsistentGain(f"critical gain {k} at omega={w!r}: {left!r} != {right!r}")
        gains.append(left)
    return gains


def critical_gains_recursive(tf: TransferFunction) -> list[float]:
    """``M_1 = |G_0(j w_1)|`` then ``M_{k+1} = M_k (w_k / w_{k+1})**t_k``."""
    cs = critical_set(tf)
    if not cs.freqs:
        return []
    ts = relative_degrees(tf)
    w = cs.freqs
    gains = [approx_function(tf, 0, cs).magnitude(w[0])]
    for k in range(1, len(w)):
        gains.append(gains[-1] * (w[k - 1] / w[k]) ** ts[k])
    return gains


def magnitude_plot(tf: TransferFunction) -> MagnitudePlot:
    cs = critical_set(tf)
    gains = critical_gains_direct(tf)
    bps = tuple(Breakpoint(w, m, 20.0 * math.log10(m)) for w, m in zip(cs.freqs, gains))
    low = abs(approx_function(tf, 0, cs).k_coeff)
    return MagnitudePlot(bps, tuple(relative_degrees(tf)), low)


def phase_steps(tf: TransferFunction) -> list[int]:
    """Per-term total phase shift in quarter turns (``r S_zp S_st n``)."""
    steps = []
    for term in tf.terms:
        a = compute_attributes(term)
        steps.append(term.multiplicity * a.zp_sign * a.st_sign * a.order)
    return steps


def _start_quarters(tf: TransferFunction) -> int:
    k0 = approx_function(tf, 0).k_coeff
    return (0 if k0 > 0 else -2) - tf.origin_exp


def stepwise_phase(tf: TransferFunction, branch_offset: int = 0) -> StepwisePhasePlot:
    """Piecewise-constant phase; ``branch_offset`` shifts every level by 2*pi*offset."""
    cs = critical_set(tf)
    steps = phase_steps(tf)
    q = [_start_quarters(tf) + 4 * branch_offset]
    for members in cs.index_sets:
        q.append(q[-1] + sum(steps[i] for i in sorted(members)))
    levels = tuple(n * (math.pi / 2) for n in q)
    return StepwisePhasePlot(levels, tuple(cs.bands()), tuple(q))


def phase_ramps(tf: TransferFunction) -> list[PhaseRamp]:
    ramps = []
    for i, (term, dq) in enumerate(zip(tf.terms, phase_steps(tf))):
        a = compute_attributes(term)
        spread = RAMP_BASE if a.order == 1 else RAMP_BASE ** abs(a.damping)
        ramps.append(PhaseRamp(i, a.critical_freq / spread, a.critical_freq * spread, dq * (math.pi / 2)))
    return ramps


def asymptotic_phase(tf: TransferFunction, branch_offset: int = 0) -> AsymptoticPhasePlot:
    """Stepwise phase with each jump replaced by a linear-in-log ramp per term.

    Overlapping ramps add.  A zero-width ramp (undamped quadratic) stays a
    jump and shows up as two nodes at the same frequency.
    """
    stepwise = stepwise_phase(tf, branch_offset)
    start = stepwise.levels[0]
    ramps = tuple(phase_ramps(tf))
    if not ramps:
        return AsymptoticPhasePlot(((0.0, start), (math.inf, start)), ramps, start)
    knots = sorted({w for r in ramps for w in (r.omega_a, r.omega_b)})
    nodes: list[tuple[float, float]] = []
    for w in knots:
        lw = np.array([math.log10(w)])
        left = start
        right = start
        for ramp in ramps:
            la, lb = math.log10(ramp.omega_a), math.log10(ramp.omega_b)
            if la == lb:
                left += ramp.delta_phi * float(lw[0] > la)
                right += ramp.delta_phi * float(lw[0] >= la)
            else:
                f = float(_ramp_fraction(lw, ramp)[0])
                left += ramp.delta_phi * f
                right += ramp.delta_phi * f
        nodes.append((w, left))
        if right != left:
            nodes.append((w, right))
    end = stepwise.levels[-1]
    # endpoints carry the exact stepwise levels
    nodes = [(0.0, start), *nodes, (math.inf, end)]
    return AsymptoticPhasePlot(tuple(nodes), ramps, start)


def phase_polyline(plot: AsymptoticPhasePlot, omega_min: float, omega_max: float) -> list[tuple[float, float]]:
    """Nodes clipped to a finite window, for drawing."""
    inner = [(w, p) for w, p in plot.nodes if omega_min < w < omega_max]
    return [(omega_min, float(plot.at([omega_min])[0])), *inner, (omega_max, float(plot.at([omega_max])[0]))]


def stepwise_polyline(plot: StepwisePhasePlot, omega_min: float, omega_max: float) -> list[tuple[float, float]]:
    pts = [(omega_min, plot.levels[0])]
    level = plot.levels[0]
    for (lo, _), nxt in zip(plot.bands[1:], plot.levels[1:]):
        if lo <= omega_min:
            level = nxt
            pts = [(omega_min, level)]
            continue
        if lo >= omega_max:
            break
        pts.append((lo, level))
        pts.append((lo, nxt))
        level = nxt
    pts.append((omega_max, level))
    return pts


__all__: Sequence[str] = [
    "AsymptoticPhasePlot",
    "Breakpoint",
    "CriticalSet",
    "InconsistentGain",
    "MagnitudePlot",
    "PhaseRamp",
    "StepwisePhasePlot",
    "approx_function",
    "approx_functions",
    "asymptotic_phase",
    "critical_gains_direct",
    "critical_gains_recursive",
    "critical_set",
    "magnitude_plot",
    "phase_ramps",
    "phase_steps",
    "relative_degrees",
    "stepwise_phase",
]
