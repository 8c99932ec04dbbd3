"""``bode`` command line: analyze, plot, compare, eval.

Exit codes: 0 success, 1 compare failure, 2 parse/usage error, 3 IO error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile

from . import report as rpt
from .compare import compare_methods
from .parser import ParseError, parse
from .response import FrequencyGrid, InvalidRange, frequency_response, log_grid
from .svg import render_svg

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_IO = 3


class _IOFailure(Exception):
    pass


def _grid_arg(text: str) -> FrequencyGrid:
    try:
        lo, hi, ppd = text.split(":")
        return log_grid(float(lo), float(hi), int(ppd))
    except (ValueError, InvalidRange) as exc:
        raise argparse.ArgumentTypeError(f"expected MIN:MAX:PPD with 0 < MIN < MAX, got {text!r} ({exc})") from None


def _omega_arg(text: str) -> list[float]:
    try:
        values = [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated frequencies, got {text!r}") from None
    if not values or any(not (v > 0 and math.isfinite(v)) for v in values):
        raise argparse.ArgumentTypeError("frequencies must be positive and finite")
    return values


def write_atomic(path: str, text: str) -> None:
    """Write the whole file via a temporary sibling and rename."""
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".bode-", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise _IOFailure(f"cannot write {path}: {exc.strerror or exc}") from exc


def _expression(args) -> str:
    if args.file is not None:
        if args.expr is not None:
            raise _UsageError("give either an expression or --file, not both")
        try:
            with open(args.file, encoding="utf-8") as fh:
                return fh.read().strip()
        except OSError as exc:
            raise _IOFailure(f"cannot read {args.file}: {exc.strerror or exc}") from exc
    if args.expr is None:
        raise _UsageError("missing expression (positional argument or --file)")
    return args.expr


class _UsageError(Exception):
    pass


def cmd_analyze(tf, args, out) -> int:
    report = rpt.analyze(tf, args.branch_offset)
    out.write(report.to_json() if args.json else rpt.render_text(report))
    return EXIT_OK


def cmd_plot(tf, args, out) -> int:
    bundle = rpt.build_bundle(tf, args.grid, args.branch_offset)
    if args.svg is None and args.csv is None:
        out.write(rpt.to_csv(bundle))
        return EXIT_OK
    if args.svg is not None:
        write_atomic(args.svg, render_svg(bundle, title=f"G(s) = {args.source}"))
    if args.csv is not None:
        write_atomic(args.csv, rpt.to_csv(bundle))
    return EXIT_OK


def cmd_compare(tf, args, out) -> int:
    c = compare_methods(tf, args.grid)
    verdict = "PASS" if c.passed else "FAIL"
    w = c.grid.omega
    out.write(f"grid: {len(w)} points, {w[0]:g} to {w[-1]:g} rad/s ({c.grid.points_per_decade} per decade)\n")
    out.write(f"max |delta magnitude|       = {c.max_mag_delta_db:.3e} dB  (tol {c.mag_tol_db:g}, {c.compared_mag} points)\n")
    out.write(f"max |delta stepwise phase|  = {c.max_stepwise_delta_rad:.3e} rad (tol {c.phase_tol_rad:g}, {c.compared_mag} points)\n")
    out.write(f"max |delta asymptotic phase| = {c.max_asym_delta_rad:.3e} rad (tol {c.phase_tol_rad:g}, {c.compared_asym} points)\n")
    out.write(f"{verdict}\n")
    return EXIT_OK if c.passed else EXIT_FAIL


def cmd_eval(tf, args, out) -> int:
    out.write("omega_rad_s,re,im,mag_db,phase_deg\n")
    g = frequency_response(tf, args.omega)
    for w, v in zip(args.omega, g):
        mag = abs(v)
        mag_db = 20 * math.log10(mag) if mag > 0 else -math.inf
        out.write(",".join(f"{x:.12g}" for x in (w, v.real, v.imag, mag_db, math.degrees(math.atan2(v.imag, v.real)))) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bode", description="Asymptotic Bode plots of rational transfer functions.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("expr", nargs="?", help='transfer function, e.g. "10*(s-1)/(s*(s+1)*(s^2+8*s+25))"')
        sp.add_argument("--file", metavar="PATH", help="read the expression from a UTF-8 file")

    a = sub.add_parser("analyze", help="critical frequencies, approximants, gains and phases")
    common(a)
    a.add_argument("--json", action="store_true", help="emit the JSON report")
    a.add_argument("--branch-offset", type=int, default=0, metavar="N")
    a.set_defaults(func=cmd_analyze)

    pl = sub.add_parser("plot", help="SVG and/or CSV of asymptotic and exact curves")
    common(pl)
    pl.add_argument("--svg", metavar="PATH")
    pl.add_argument("--csv", metavar="PATH")
    pl.add_argument("--grid", type=_grid_arg, metavar="MIN:MAX:PPD")
    pl.add_argument("--branch-offset", type=int, default=0, metavar="N")
    pl.set_defaults(func=cmd_plot)

    c = sub.add_parser("compare", help="check the direct construction against factor summation")
    common(c)
    c.add_argument("--grid", type=_grid_arg, metavar="MIN:MAX:PPD")
    c.set_defaults(func=cmd_compare)

    e = sub.add_parser("eval", help="exact G(jw) at given frequencies")
    common(e)
    e.add_argument("--omega", type=_omega_arg, required=True, metavar="W[,W...]")
    e.set_defaults(func=cmd_eval)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        args.source = _expression(args)
        tf = parse(args.source)
        return args.func(tf, args, out)
    except ParseError as exc:
        err.write(f"error: {exc.kind.value}: {exc.message}\n")
        err.write("  " + exc.caret().replace("\n", "\n  ") + "\n")
        return EXIT_PARSE
    except _UsageError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARSE
    except _IOFailure as exc:
        err.write(f"error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
