"""
Asymptotic Bode plots, built band by band
=========================================

Each function below is analysed without splitting it into textbook
factors.  The corner frequencies cut the axis into bands; on each band
G(s) behaves like a single monomial K_k / s^t_k, and the magnitude plot is
just those monomials stitched together at the corners.
"""

import math

import numpy as np

from asymbode import parse
from asymbode.direct import (
    approx_functions,
    asymptotic_phase,
    critical_set,
    magnitude_plot,
    stepwise_phase,
)
from asymbode.response import frequency_response

# A resonant zero pair at 2 rad/s, an unstable pole at 30 and a double pole at 200
G = parse("60*(s^2+0.8*s+4)/(s*(s-30)*(s/200+1)^2)")

cs = critical_set(G)
print("corners:", cs.freqs)

# one monomial per band
for k, g in enumerate(approx_functions(G)):
    lo, hi = g.band
    print(f"band {k}: [{lo:g}, {hi:g}]  G_{k}(s) = {g.k_coeff:g} / s^{g.rel_degree}")

# the corner gains follow from evaluating neighbouring monomials at the corner
mag = magnitude_plot(G)
for b in mag.breakpoints:
    print(f"  omega = {b.omega:g}: M = {b.gain:g} ({b.gain_db:.2f} dB)")
print("slopes in dB/decade:", mag.slopes_db_per_decade)

# phase moves in whole quarter turns at each corner
step = stepwise_phase(G)
print("phase levels (deg):", [round(math.degrees(p), 1) for p in step.levels])

# the ramped version spreads each jump over a band around the corner
ramps = asymptotic_phase(G).ramps
for r in ramps:
    print(f"  term {r.term_index}: ramp {r.omega_a:.3g} .. {r.omega_b:.3g} rad/s, "
          f"{math.degrees(r.delta_phi):+.0f} deg")

# how good is the straight-line picture?  compare with the exact response
w = np.logspace(-2, 4, 7)
exact = 20 * np.log10(np.abs(frequency_response(G, w)))
for wi, e, a in zip(w, exact, mag.db_at(w)):
    print(f"  {wi:10.3g} rad/s  exact {e:8.2f} dB   asymptote {a:8.2f} dB")

# Second example: an unstable resonant pole pair at 8 rad/s.  Its phase
# goes up, not down, and the low-frequency level can be drawn on any branch.
H = parse("(s+0.1)*(s+80)/((s+2)*(s^2-2*s+64))")
print()
print("gains (dB):", [round(b.gain_db, 2) for b in magnitude_plot(H).breakpoints])
print("phase, default branch (deg):", [round(math.degrees(p)) for p in stepwise_phase(H).levels])
print("phase, one turn lower (deg):", [round(math.degrees(p)) for p in stepwise_phase(H, -1).levels])

# Third example: two terms share the corner at 1 rad/s, and both of their
# phase contributions land in the same step.
F = parse("10*(s-1)/(s*(s+1)*(s^2+8*s+25))")
print()
print("corner groups:", [sorted(s) for s in critical_set(F).index_sets])
print("phase levels (deg):", [round(math.degrees(p)) for p in stepwise_phase(F).levels])
