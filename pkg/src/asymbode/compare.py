"""Direct construction versus factor summation on a shared grid."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import direct, standard
from .model import TransferFunction
from .response import FrequencyGrid

MAG_TOL_DB = 1e-6
PHASE_TOL_RAD = 1e-9
EXCLUSION_RTOL = 1e-6


@dataclass(frozen=True)
class Comparison:
    grid: FrequencyGrid
    max_mag_delta_db: float
    max_stepwise_delta_rad: float
    max_asym_delta_rad: float
    compared_mag: int
    compared_asym: int
    mag_tol_db: float = MAG_TOL_DB
    phase_tol_rad: float = PHASE_TOL_RAD

    @property
    def passed(self) -> bool:
        return (
            self.max_mag_delta_db <= self.mag_tol_db
            and self.max_stepwise_delta_rad <= self.phase_tol_rad
            and self.max_asym_delta_rad <= self.phase_tol_rad
        )


def away_from(omega: np.ndarray, marks, rtol: float = EXCLUSION_RTOL) -> np.ndarray:
    """Mask of grid points at least ``rtol`` relative distance from every mark."""
    keep = np.ones(omega.shape, dtype=bool)
    for m in marks:
        keep &= np.abs(omega - m) >= rtol * m
    return keep


def _max_abs(x: np.ndarray) -> float:
    return float(np.max(np.abs(x))) if x.size else 0.0


def compare_methods(tf: TransferFunction, grid: FrequencyGrid | None = None) -> Comparison:
    grid = grid if grid is not None else standard.default_grid(tf)
    w = grid.omega

    mag_plot = direct.magnitude_plot(tf)
    step = direct.stepwise_phase(tf)
    asym = direct.asymptotic_phase(tf)
    std_step = standard.standard_plot(tf, grid, "stepwise")
    std_asym = standard.standard_plot(tf, grid, "asymptotic")

    corners = [b.omega for b in mag_plot.breakpoints]
    ends = [x for r in asym.ramps for x in (r.omega_a, r.omega_b)]
    keep = away_from(w, corners)
    keep_asym = away_from(w, ends + corners)

    d_mag = (mag_plot.db_at(w) - std_step.mag_db)[keep]
    d_step = (step.at(w) - std_step.phase_rad)[keep]
    d_asym = (asym.at(w) - std_asym.phase_rad)[keep_asym]
    return Comparison(grid, _max_abs(d_mag), _max_abs(d_step), _max_abs(d_asym), int(keep.sum()), int(keep_asym.sum()))
