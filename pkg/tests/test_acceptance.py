"""Acceptance checks; each prints one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (lines are repeated in the
terminal summary) or directly with ``python tests/test_acceptance.py``.
"""

import math
import os
import subprocess
import sys
import tempfile
import time
from fractions import Fraction

import numpy as np
import pytest

from asymbode import format, parse
from asymbode.compare import compare_methods
from asymbode.direct import (
    approx_functions,
    critical_gains_direct,
    critical_gains_recursive,
    critical_set,
    magnitude_plot,
    relative_degrees,
    stepwise_phase,
)
from asymbode.response import evaluate, frequency_response
from asymbode.standard import factor_components

sys.path.insert(0, os.path.dirname(__file__))
from conftest import CASE1, CASE2, CASE3, probes, random_tf, rel_close  # noqa: E402

PI = math.pi
SEED = 20250101
RESULTS: list[str] = []


def record(n: int, ok: bool, detail: str) -> bool:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})"
    RESULTS.append(line)
    print(line)
    return ok


def best_time(fn, repeat=7) -> float:
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def full_analysis(tf, offset=0):
    return (
        critical_set(tf),
        approx_functions(tf),
        relative_degrees(tf),
        critical_gains_direct(tf),
        critical_gains_recursive(tf),
        stepwise_phase(tf, offset),
    )


def close(a, b, rtol=1e-9) -> bool:
    return len(a) == len(b) and all(math.isclose(x, float(y), rel_tol=rtol, abs_tol=1e-300) for x, y in zip(a, b))


def check_case(tf, freqs, approx, gains, phases_pi, offset=0):
    cs, fs, ts, md, mr, step = full_analysis(tf, offset)
    problems = []
    if list(cs.freqs) != [float(f) for f in freqs]:
        problems.append(f"omega_c {cs.freqs}")
    if [g.rel_degree for g in fs] != [t for _, t in approx] or not close([g.k_coeff for g in fs], [k for k, _ in approx]):
        problems.append(f"approximants {[(g.k_coeff, g.rel_degree) for g in fs]}")
    if ts != [t for _, t in approx]:
        problems.append(f"t {ts}")
    if not (close(md, gains) and close(mr, gains)):
        problems.append(f"M {md}")
    if not close(step.levels, [p * PI for p in phases_pi], 1e-12):
        problems.append(f"phi/pi {[x / PI for x in step.levels]}")
    return problems, md


F = Fraction


def _one_random_set(n, **kw):
    rng = np.random.default_rng(SEED)
    return [random_tf(rng, **kw) for _ in range(n)]


@pytest.fixture(scope="module")
def random_set():
    return _one_random_set(1000, max_terms=6, max_mult=3)


def test_criterion_1_case_study_one():
    tf = parse(CASE1)
    problems, _ = check_case(
        tf, [2, 30, 200], [(-8, 1), (-2, -1), (60, 0), (2.4e6, 2)], [4, 60, 60], [-1.5, -0.5, 0, -1]
    )
    t = best_time(lambda: full_analysis(tf))
    ok = not problems and t < 0.010
    assert record(1, ok, f"{'; '.join(problems) or 'all values match'}; {t * 1e3:.2f} ms"), problems


def test_criterion_2_case_study_two():
    tf = parse(CASE2)
    approx = [(F(1, 16), 0), (F(5, 8), -1), (F(5, 4), 0), (80, 2), (1, 1)]
    gains = [F(1, 16), F(5, 4), F(5, 4), F(1, 80)]
    problems, md = check_case(tf, [0.1, 2, 8, 80], approx, gains, [-2, -1.5, -2, -1, -0.5], offset=-1)
    more, _ = check_case(tf, [0.1, 2, 8, 80], approx, gains, [0, 0.5, 0, 1, 1.5], offset=0)
    problems += [f"default offset: {p}" for p in more]
    db = [20 * math.log10(m) for m in md]
    if not all(abs(a - b) <= 0.01 for a, b in zip(db, [-24.08, 1.93, 1.93, -38.06])):
        problems.append(f"dB {db}")
    t = best_time(lambda: full_analysis(tf, -1))
    ok = not problems and t < 0.010
    assert record(2, ok, f"{'; '.join(problems) or 'all values match'}; {t * 1e3:.2f} ms"), problems


def test_criterion_3_case_study_three():
    tf = parse(CASE3)
    problems, _ = check_case(
        tf, [1, 5], [(F(-10, 25), 1), (F(10, 25), 1), (10, 3)], [F(10, 25), F(2, 25)], [-1.5, -2.5, -3.5]
    )
    cs = critical_set(tf)
    if len(cs.index_sets[0]) != 2 or stepwise_phase(tf).quarter_turns[1] - stepwise_phase(tf).quarter_turns[0] != -2:
        problems.append("k=1 step does not sum both terms")
    t = best_time(lambda: full_analysis(tf))
    ok = not problems and t < 0.010
    assert record(3, ok, f"{'; '.join(problems) or 'all values match'}; {t * 1e3:.2f} ms"), problems


def test_criterion_4_component_list():
    tf = parse(CASE3)
    comps = factor_components(tf)
    names = [str(c) for c in comps]
    expect = ["-0.4", "1/s^1", "(1-1*s)", "1/(1+1*s)", "1/(1+0.32*s+0.04*s^2)"]
    s = probes(32)
    prod = np.ones(s.shape, dtype=complex)
    for c in comps:
        prod = prod * c(s)
    oracle = 10 * (s - 1) / (s * (s + 1) * (s**2 + 8 * s + 25))
    ok = names == expect and math.isclose(comps[0].value, -10 / 25, rel_tol=1e-15) and rel_close(prod, oracle, 1e-9)
    assert record(4, ok, f"components {names}"), names


def test_criterion_5_dual_gain(random_set):
    bad = []

    def run():
        bad.clear()
        for i, tf in enumerate(random_set):
            d, r = critical_gains_direct(tf), critical_gains_recursive(tf)
            if not close(r, d):
                bad.append((i, "gains"))
            if relative_degrees(tf) != [g.rel_degree for g in approx_functions(tf)]:
                bad.append((i, "degrees"))

    t0 = time.perf_counter()
    run()
    t = time.perf_counter() - t0
    n_corners = sum(len(critical_set(tf)) for tf in random_set)
    ok = not bad and t < 5.0
    assert record(5, ok, f"{len(random_set)} functions, {n_corners} corners, {len(bad)} mismatches, {t:.2f} s"), bad[:5]


def test_criterion_6_oracle_equivalence(random_set):
    t0 = time.perf_counter()
    results = [compare_methods(tf) for tf in random_set]
    t = time.perf_counter() - t0
    worst_mag = max(c.max_mag_delta_db for c in results)
    worst_step = max(c.max_stepwise_delta_rad for c in results)
    worst_asym = max(c.max_asym_delta_rad for c in results)
    ok = worst_mag <= 1e-6 and worst_step <= 1e-9 and worst_asym <= 1e-9 and t < 30.0
    detail = f"max dB delta {worst_mag:.2e}, stepwise {worst_step:.2e} rad, asymptotic {worst_asym:.2e} rad, {t:.2f} s"
    assert record(6, ok, detail)


def test_criterion_7_exact_vs_asymptote():
    db = 20 * math.log10(abs(evaluate(parse("1/(s+1)"), 1.0)))
    asym = float(magnitude_plot(parse("1/(s+1)")).db_at([1.0])[0])
    worst = []
    for text in (CASE1, CASE2, CASE3):
        tf = parse(text)
        freqs = critical_set(tf).freqs
        w = np.concatenate([np.logspace(-4, math.log10(freqs[0] / 10), 200), np.logspace(math.log10(freqs[-1] * 10), 6, 200)])
        err = np.max(np.abs(20 * np.log10(np.abs(frequency_response(tf, w))) - magnitude_plot(tf).db_at(w)))
        bound = 0.5 * sum(t.multiplicity * t.order for t in tf.terms) * 0.1
        worst.append((float(err), bound))
    ok = abs(db + 3.0103) <= 1e-3 and asym == 0.0 and all(e <= b for e, b in worst)
    detail = f"1/(s+1) at 1 rad/s: {db:.4f} dB vs asymptote {asym:g} dB; far errors " + ", ".join(
        f"{e:.3f}<={b:.2f} dB" for e, b in worst
    )
    assert record(7, ok, detail)


def test_criterion_8_parser_round_trip():
    s = probes(32)
    failures = 0
    texts = [CASE1, CASE2, CASE3]
    texts += [format(tf) for tf in _one_random_set(500, max_terms=6, max_mult=3)]
    for text in texts:
        once = parse(text)
        twice = parse(format(once))
        if not rel_close(twice(s), once(s), 1e-9):
            failures += 1
    ok = failures == 0
    assert record(8, ok, f"{len(texts)} expressions, {failures} unstable"), failures


def test_criterion_9_determinism():
    outputs = []
    env = dict(os.environ)
    src = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "src")
    env["PYTHONPATH"] = src + os.pathsep + env.get("PYTHONPATH", "")
    with tempfile.TemporaryDirectory() as tmp:
        for run in range(2):
            svg = os.path.join(tmp, f"run{run}.svg")
            csv = os.path.join(tmp, f"run{run}.csv")
            subprocess.run(
                [sys.executable, "-m", "asymbode", "plot", CASE1, "--svg", svg, "--csv", csv],
                check=True,
                env=env,
            )
            with open(svg, "rb") as a, open(csv, "rb") as b:
                outputs.append((a.read(), b.read()))
    ok = outputs[0] == outputs[1] and all(len(x) > 0 for x in outputs[0])
    assert record(9, ok, f"svg {len(outputs[0][0])} bytes, csv {len(outputs[0][1])} bytes, identical={ok}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
