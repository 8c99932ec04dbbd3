"""
Writing transfer functions down, and getting plots out
======================================================
"""

import json
import os
import tempfile

from asymbode import format, parse
from asymbode.parser import ParseError
from asymbode.report import analyze, build_bundle, to_csv
from asymbode.response import log_grid
from asymbode.svg import render_svg

# factored input is kept as written
print(format(parse("60*(s^2+0.8*s+4)/(s*(s-30)*(s/200+1)^2)")))

# expanded polynomials are split into first and second order pieces
print(format(parse("(s^2+3*s+2)/s^2")))
print(format(parse("1/(s^3+2*s^2+2*s+1)")))

# anything that is not a rational function of s is refused, with a pointer
for bad in ["exp(-s)/(s+1)", "s^0.5", "(s+1"]:
    try:
        parse(bad)
    except ParseError as e:
        print(e.kind.value + ":", e.message)
        print(e.caret())

# the analysis report is plain data, ready for JSON
report = analyze(parse("10*(s-1)/(s*(s+1)*(s^2+8*s+25))"))
print(json.dumps(report.to_dict()["gains"], indent=1))

# sampled curves as CSV, and the two-panel chart as SVG
bundle = build_bundle(parse("(s+0.1)*(s+80)/((s+2)*(s^2-2*s+64))"), log_grid(0.01, 1000, 50))
print(to_csv(bundle).splitlines()[0])
out = os.path.join(tempfile.gettempdir(), "bode_demo.svg")
with open(out, "w") as fh:
    fh.write(render_svg(bundle, title="unstable resonance at 8 rad/s"))
print("wrote", out)
