import math

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from asymbode import PolyTerm, Side, TransferFunction, parse

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

CASE1 = "60*(s^2+0.8*s+4)/(s*(s-30)*(s/200+1)^2)"
CASE2 = "(s+0.1)*(s+80)/((s+2)*(s^2-2*s+64))"
CASE3 = "10*(s-1)/(s*(s+1)*(s^2+8*s+25))"
CASES = {"case1": CASE1, "case2": CASE2, "case3": CASE3}


@pytest.fixture
def case1():
    return parse(CASE1)


@pytest.fixture
def case2():
    return parse(CASE2)


@pytest.fixture
def case3():
    return parse(CASE3)


def make_term(omega_c, order, stable, side, multiplicity=1, scale=1.0, damping=0.5):
    """Term with a given corner; ``scale`` multiplies every coefficient."""
    if order == 1:
        root = -omega_c if stable else omega_c
        return PolyTerm(-root * scale, scale, 0.0, multiplicity, side)
    zeta = abs(damping) if stable else -abs(damping)
    return PolyTerm(omega_c**2 * scale, 2 * zeta * omega_c * scale, scale, multiplicity, side)


def random_tf(rng: np.random.Generator, max_terms=6, max_mult=3) -> TransferFunction:
    """Random valid tf: mixed sides, orders and stability, some shared corners."""
    terms = []
    corners = []
    for _ in range(rng.integers(0, max_terms + 1)):
        if corners and rng.random() < 0.25:
            wc = corners[rng.integers(len(corners))]
        else:
            wc = float(10 ** rng.uniform(-2, 3))
        corners.append(wc)
        order = int(rng.integers(1, 3))
        side = Side.NUMERATOR if rng.random() < 0.5 else Side.DENOMINATOR
        scale = float(10 ** rng.uniform(-1, 1)) * (1 if rng.random() < 0.8 else -1)
        terms.append(
            make_term(
                wc,
                order,
                bool(rng.random() < 0.6),
                side,
                int(rng.integers(1, max_mult + 1)),
                scale,
                float(rng.uniform(0.05, 0.95)),
            )
        )
    gain = float(10 ** rng.uniform(-2, 2)) * (1 if rng.random() < 0.5 else -1)
    return TransferFunction(gain, int(rng.integers(-2, 4)), tuple(terms))


@st.composite
def transfer_functions(draw, max_terms=6, max_mult=3):
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return random_tf(np.random.default_rng(seed), max_terms, max_mult)


def probes(n=32, lo=1e-3, hi=1e4):
    return 1j * np.logspace(math.log10(lo), math.log10(hi), n)


def rel_close(a, b, rtol):
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return bool(np.all(np.abs(a - b) <= rtol * np.maximum(np.abs(a), np.abs(b))))


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
