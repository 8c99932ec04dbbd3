"""Exact frequency response G(jw) on logarithmic grids."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import TransferFunction, arg0, ensure_valid, low_freq_approx

# |p(jw)| below this fraction of the term's coefficient scale counts as a root on the axis
AXIS_RTOL = 1e-14


class PoleOnAxis(ZeroDivisionError):
    def __init__(self, omega: float, term_index: int):
        super().__init__(f"denominator term {term_index} vanishes at omega={omega!r} (pole on the imaginary axis)")
        self.omega = omega
        self.term_index = term_index


class InvalidRange(ValueError):
    pass


@dataclass(frozen=True)
class FrequencyGrid:
    omega: np.ndarray
    points_per_decade: int

    def __post_init__(self):
        w = np.asarray(self.omega, dtype=float)
        if w.ndim != 1 or len(w) == 0 or np.any(w <= 0) or np.any(np.diff(w) <= 0):
            raise InvalidRange("grid must be a nonempty, strictly increasing array of positive frequencies")
        w.setflags(write=False)
        object.__setattr__(self, "omega", w)

    def __len__(self) -> int:
        return len(self.omega)


@dataclass(frozen=True)
class ResponseSample:
    omega: float
    mag_db: float
    phase_rad: float
    on_pole: bool = False


def log_grid(omega_min: float, omega_max: float, ppd: int) -> FrequencyGrid:
    """``floor(ppd * decades) + 1`` log-spaced points, both endpoints included."""
    if not (0 < omega_min < omega_max) or not math.isfinite(omega_max):
        raise InvalidRange(f"need 0 < omega_min < omega_max, got {omega_min!r}, {omega_max!r}")
    if ppd < 1:
        raise InvalidRange(f"points per decade must be positive, got {ppd!r}")
    decades = math.log10(omega_max / omega_min)
    count = math.floor(ppd * decades + 1e-9) + 1
    w = np.logspace(math.log10(omega_min), math.log10(omega_max), max(count, 2))
    # pin the endpoints against logspace round-off
    w[0], w[-1] = omega_min, omega_max
    return FrequencyGrid(w, ppd)


def _axis_roots(tf: TransferFunction, omega: np.ndarray, want_numerator: bool) -> np.ndarray:
    """Index of the first term of the given side vanishing at each omega, or -1."""
    hit = np.full(omega.shape, -1)
    s = 1j * omega
    for i, term in enumerate(tf.terms):
        if term.is_numerator != want_numerator:
            continue
        scale = abs(term.a0) + abs(term.a1) * omega + abs(term.a2) * omega**2
        zero = np.abs(term(s)) <= AXIS_RTOL * scale
        hit = np.where((hit < 0) & zero, i, hit)
    return hit


def frequency_response(tf: TransferFunction, omega) -> np.ndarray:
    """Complex G(jw) from per-factor products; poles on the axis give inf."""
    w = np.asarray(omega, dtype=float)
    s = 1j * w
    value = np.full(w.shape, complex(tf.gain))
    if tf.origin_exp:
        value = value / s**tf.origin_exp
    poles = _axis_roots(tf, w, want_numerator=False)
    with np.errstate(divide="ignore", invalid="ignore"):
        for term in tf.terms:
            p = term(s) ** term.multiplicity
            value = value * p if term.is_numerator else value / p
    return np.where(poles >= 0, complex(np.inf, np.nan), value)


def evaluate(tf: TransferFunction, omega: float) -> complex:
    """G(j*omega); raises PoleOnAxis at an undamped pole."""
    ensure_valid(tf)
    if not omega > 0:
        raise InvalidRange(f"omega must be positive, got {omega!r}")
    w = np.array([float(omega)])
    poles = _axis_roots(tf, w, want_numerator=False)
    if poles[0] >= 0:
        raise PoleOnAxis(float(omega), int(poles[0]))
    return complex(frequency_response(tf, w)[0])


def start_phase(tf: TransferFunction) -> float:
    """Low-frequency phase level: arg0(K_0) - h*pi/2."""
    return arg0(low_freq_approx(tf).k_coeff) - tf.origin_exp * math.pi / 2


def unwrap_anchored(phase: np.ndarray, anchor: float) -> np.ndarray:
    """Nearest-continuation unwrap, then shift so the first sample lies in (anchor-pi, anchor+pi]."""
    out = np.full(phase.shape, np.nan)
    ok = np.isfinite(phase)
    if not np.any(ok):
        return out
    unwrapped = np.unwrap(phase[ok])
    d = unwrapped[0] - anchor
    n = math.ceil((d - math.pi) / (2 * math.pi))
    out[ok] = unwrapped - 2 * math.pi * n
    return out


def sweep_arrays(tf: TransferFunction, grid: FrequencyGrid, branch_offset: int = 0):
    """``(omega, mag_db, phase_rad, on_pole)`` arrays for a whole grid."""
    ensure_valid(tf)
    w = grid.omega
    g = frequency_response(tf, w)
    on_pole = _axis_roots(tf, w, want_numerator=False) >= 0
    on_zero = _axis_roots(tf, w, want_numerator=True) >= 0
    with np.errstate(divide="ignore"):
        mag_db = np.where(on_pole, np.inf, 20.0 * np.log10(np.abs(g)))
    principal = np.where(on_pole | on_zero, np.nan, np.angle(g))
    phase = unwrap_anchored(principal, start_phase(tf) + 2 * math.pi * branch_offset)
    mag_db = np.where(on_zero & ~on_pole, -np.inf, mag_db)
    return w, mag_db, phase, on_pole


def sweep(tf: TransferFunction, grid: FrequencyGrid, branch_offset: int = 0) -> list[ResponseSample]:
    """Exact magnitude (dB) and unwrapped phase on ``grid``.

    Samples that land on an undamped pole are flagged (``on_pole``) with an
    infinite magnitude and NaN phase; the sweep itself does not fail.
    """
    w, mag_db, phase, on_pole = sweep_arrays(tf, grid, branch_offset)
    return [ResponseSample(float(a), float(b), float(c), bool(d)) for a, b, c, d in zip(w, mag_db, phase, on_pole)]


def default_span(freqs) -> tuple[float, float]:
    """One decade either side of the corner frequencies (around 1 rad/s if none)."""
    freqs = list(freqs)
    if not freqs:
        return 0.1, 10.0
    return min(freqs) / 10.0, max(freqs) * 10.0
