"""Analysis reports and sampled plot bundles, with JSON/CSV/text emitters."""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass

import numpy as np

from . import direct
from .model import TransferFunction, compute_attributes
from .parser import format as format_tf
from .response import FrequencyGrid, default_span, log_grid, sweep_arrays

SIG_DIGITS = 12
CSV_HEADER = "omega_rad_s,asym_mag_db,exact_mag_db,stepwise_phase_deg,asym_phase_deg,exact_phase_deg"
DEFAULT_PPD = 200


def _g(x: float) -> str:
    return f"{x:.{SIG_DIGITS}g}"


def _round(x):
    """Round floats to SIG_DIGITS significant digits; leave everything else."""
    if isinstance(x, bool) or isinstance(x, int) or isinstance(x, str) or x is None:
        return x
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return float(_g(x))
    if isinstance(x, dict):
        return {k: _round(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round(v) for v in x]
    raise TypeError(f"cannot serialise {type(x).__name__}")


def dumps(data: dict) -> str:
    """Canonical JSON: schema key order, floats at 12 significant digits."""
    return json.dumps(_round(data), indent=2, ensure_ascii=False) + "\n"


@dataclass(frozen=True)
class AnalysisReport:
    input: str
    gain: float
    origin_exp: int
    terms: list[dict]
    omega_c: list[float]
    approximants: list[dict]
    gains: list[dict]
    phases: list[dict]
    ramps: list[dict]

    def to_dict(self) -> dict:
        return {
            "input": self.input,
            "gain": self.gain,
            "origin_exp": self.origin_exp,
            "terms": self.terms,
            "omega_c": self.omega_c,
            "approximants": self.approximants,
            "gains": self.gains,
            "phases": self.phases,
            "ramps": self.ramps,
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())


def analyze(tf: TransferFunction, branch_offset: int = 0) -> AnalysisReport:
    cs = direct.critical_set(tf)
    terms = []
    for t in tf.terms:
        a = compute_attributes(t)
        terms.append(
            {
                "a0": float(t.a0),
                "a1": float(t.a1),
                "a2": float(t.a2),
                "multiplicity": t.multiplicity,
                "side": t.side.value,
                "order": a.order,
                "omega_c": a.critical_freq,
                "zp_sign": a.zp_sign,
                "st_sign": a.st_sign,
                "damping": a.damping,
            }
        )
    approximants = [
        {"k": k, "K_k": float(g.k_coeff), "t_k": g.rel_degree, "band": list(g.band)}
        for k, g in enumerate(direct.approx_functions(tf))
    ]
    mag = direct.magnitude_plot(tf)
    gains = [{"omega": b.omega, "M": b.gain, "M_db": b.gain_db} for b in mag.breakpoints]
    step = direct.stepwise_phase(tf, branch_offset)
    phases = [{"band": list(band), "phi_rad": phi} for band, phi in zip(step.bands, step.levels)]
    ramps = [
        {"term_index": r.term_index, "omega_a": r.omega_a, "omega_b": r.omega_b, "delta_phi_rad": r.delta_phi}
        for r in direct.phase_ramps(tf)
    ]
    return AnalysisReport(format_tf(tf), float(tf.gain), tf.origin_exp, terms, list(cs.freqs), approximants, gains, phases, ramps)


def _band_text(band) -> str:
    lo, hi = band
    return f"[{lo:g}, {'inf' if math.isinf(hi) else f'{hi:g}'}]"


def _table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(headers)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(headers, widths)), "  ".join("-" * w for w in widths)]
    lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in rows]
    return "\n".join(lines)


def render_text(report: AnalysisReport) -> str:
    out = io.StringIO()
    out.write(f"G(s) = {report.input}\n")
    out.write(f"gain K = {report.gain:g}, origin exponent h = {report.origin_exp}\n\n")
    out.write("terms\n")
    rows = [
        [str(i), t["side"], str(t["order"]), str(t["multiplicity"]), f"{t['a2']:g}", f"{t['a1']:g}", f"{t['a0']:g}",
         f"{t['omega_c']:.6g} rad/s", f"{t['zp_sign']:+d}", f"{t['st_sign']:+d}", f"{t['damping']:.4g}"]
        for i, t in enumerate(report.terms)
    ]
    out.write(_table(["i", "side", "order", "r", "a2", "a1", "a0", "omega_c", "S_zp", "S_st", "damping"], rows))
    out.write("\n\ncritical frequencies: ")
    out.write(", ".join(f"{w:.6g}" for w in report.omega_c) or "(none)")
    out.write(" rad/s\n\napproximating functions  G_k(s) = K_k / s^t_k\n")
    rows = [[str(a["k"]), f"{a['K_k']:.8g}", str(a["t_k"]), f"{-20 * a['t_k']:+d} dB/dec", _band_text(a["band"]) + " rad/s"]
            for a in report.approximants]
    out.write(_table(["k", "K_k", "t_k", "slope", "band"], rows))
    out.write("\n\ncritical gains\n")
    rows = [[str(k), f"{g['omega']:.6g} rad/s", f"{g['M']:.8g}", f"{g['M_db']:.4f} dB"] for k, g in enumerate(report.gains, start=1)]
    out.write(_table(["k", "omega_k", "M_k", "M_k"], rows))
    out.write("\n\nstepwise phase\n")
    rows = [[str(k), _band_text(p["band"]) + " rad/s", f"{p['phi_rad']:.6f} rad", f"{math.degrees(p['phi_rad']):.2f} deg"]
            for k, p in enumerate(report.phases)]
    out.write(_table(["k", "band", "phi_k", "phi_k"], rows))
    out.write("\n\nphase ramps\n")
    rows = [[str(r["term_index"]), f"{r['omega_a']:.6g} rad/s", f"{r['omega_b']:.6g} rad/s", f"{math.degrees(r['delta_phi_rad']):+.0f} deg"]
            for r in report.ramps]
    out.write(_table(["term", "omega_a", "omega_b", "delta_phi"], rows))
    out.write("\n")
    return out.getvalue()


@dataclass(frozen=True)
class PlotBundle:
    tf: TransferFunction
    grid: FrequencyGrid
    magnitude: direct.MagnitudePlot
    stepwise: direct.StepwisePhasePlot
    asymptotic: direct.AsymptoticPhasePlot
    exact_mag_db: np.ndarray
    exact_phase_rad: np.ndarray

    @property
    def span(self) -> tuple[float, float]:
        return float(self.grid.omega[0]), float(self.grid.omega[-1])

    def columns(self) -> dict[str, np.ndarray]:
        w = self.grid.omega
        return {
            "omega_rad_s": w,
            "asym_mag_db": self.magnitude.db_at(w),
            "exact_mag_db": self.exact_mag_db,
            "stepwise_phase_deg": np.degrees(self.stepwise.at(w)),
            "asym_phase_deg": np.degrees(self.asymptotic.at(w)),
            "exact_phase_deg": np.degrees(self.exact_phase_rad),
        }


def plot_grid(tf: TransferFunction, ppd: int = DEFAULT_PPD) -> FrequencyGrid:
    lo, hi = default_span(direct.critical_set(tf).freqs)
    return log_grid(lo, hi, ppd)


def build_bundle(tf: TransferFunction, grid: FrequencyGrid | None = None, branch_offset: int = 0) -> PlotBundle:
    grid = grid if grid is not None else plot_grid(tf)
    _, mag_db, phase, _ = sweep_arrays(tf, grid, branch_offset)
    return PlotBundle(
        tf,
        grid,
        direct.magnitude_plot(tf),
        direct.stepwise_phase(tf, branch_offset),
        direct.asymptotic_phase(tf, branch_offset),
        mag_db,
        phase,
    )


def to_csv(bundle: PlotBundle) -> str:
    cols = bundle.columns()
    lines = [CSV_HEADER]
    for row in zip(*cols.values()):
        lines.append(",".join(_g(float(v)) for v in row))
    return "\n".join(lines) + "\n"
