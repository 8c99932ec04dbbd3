import math

import numpy as np
import pytest
from hypothesis import given

from asymbode import (
    InvalidTerm,
    PolyTerm,
    Side,
    TransferFunction,
    approx_function,
    compute_attributes,
    critical_set,
    high_freq_approx,
    low_freq_approx,
    validate,
)
from conftest import CASES, transfer_functions

NUM, DEN = Side.NUMERATOR, Side.DENOMINATOR


def test_attributes_underdamped_quadratic():
    a = compute_attributes(PolyTerm(4, 0.8, 1, 1, NUM))
    assert a.order == 2
    assert a.critical_freq == 2.0
    assert a.main_root == pytest.approx(complex(-0.4, math.sqrt(4 - 0.16)), rel=1e-15)
    assert a.damping == pytest.approx(0.2, rel=1e-15)
    assert a.st_sign == 1
    assert a.zp_sign == 1
    assert a.highest_coeff == 1


def test_attributes_unstable_real_pole():
    a = compute_attributes(PolyTerm(-30, 1, 0, 1, DEN))
    assert (a.order, a.critical_freq, a.main_root, a.zp_sign, a.st_sign) == (1, 30.0, 30 + 0j, -1, -1)


def test_attributes_unit_stable_pole():
    a = compute_attributes(PolyTerm(1, 1, 0, 1, DEN))
    assert (a.order, a.critical_freq, a.main_root, a.st_sign, a.highest_coeff) == (1, 1.0, -1 + 0j, 1, 1)


def test_attributes_unstable_quadratic():
    a = compute_attributes(PolyTerm(64, -2, 1, 1, DEN))
    assert a.critical_freq == 8.0
    assert a.damping == -0.125
    assert a.st_sign == -1


def test_main_root_matches_numpy_roots():
    # oracle: companion-matrix roots of the same quadratic
    for a0, a1, a2 in [(4, 0.8, 1), (64, -2, 1), (-25, -8, -1), (3, 0.1, 7)]:
        a = compute_attributes(PolyTerm(a0, a1, a2))
        roots = np.roots([a2, a1, a0])
        upper = roots[np.argmax(roots.imag)]
        assert a.main_root == pytest.approx(upper, rel=1e-12)
        assert a.main_root.imag > 0


def test_boundary_root_counts_as_stable():
    # s^2 + 4: roots on the imaginary axis
    assert compute_attributes(PolyTerm(4, 0, 1)).st_sign == 1


@pytest.mark.parametrize(
    "term, message",
    [
        (PolyTerm(0, 1, 0), "origin"),
        (PolyTerm(1, 2, 1), "real roots"),
        (PolyTerm(2, 3, 1), "real roots"),
        (PolyTerm(1, 0, 0), "nonzero s coefficient"),
    ],
)
def test_invalid_terms_raise(term, message):
    with pytest.raises(InvalidTerm, match=message):
        compute_attributes(term)


def test_validate_reports_rules():
    tf = TransferFunction(1.0, 0, (PolyTerm(0, 1, 0), PolyTerm(1, 3, 1), PolyTerm(1, 1, 0, 0)))
    rules = [(v.term_index, v.rule) for v in validate(tf)]
    assert (0, "RootAtOriginInTerm") in rules
    assert (1, "RealRootsInQuadratic") in rules
    assert (2, "BadMultiplicity") in rules
    assert validate(TransferFunction(0.0)) and validate(TransferFunction(0.0))[0].rule == "ZeroGain"


@pytest.mark.parametrize("name", sorted(CASES))
def test_case_studies_are_valid(name):
    from asymbode import parse

    assert validate(parse(CASES[name])) == []


def test_low_and_high_frequency_approximants(case1, case2):
    g0 = low_freq_approx(case1)
    assert (g0.k_coeff, g0.rel_degree) == (-8.0, 1)
    ginf = high_freq_approx(case1)
    assert ginf.rel_degree == 2
    assert ginf.k_coeff == pytest.approx(2.4e6, rel=1e-12)
    assert (low_freq_approx(case2).k_coeff, low_freq_approx(case2).rel_degree) == (1 / 16, 0)
    assert (high_freq_approx(case2).k_coeff, high_freq_approx(case2).rel_degree) == (1.0, 1)


def test_constant_gain_approximants():
    tf = TransferFunction(5.0)
    for g in (low_freq_approx(tf), high_freq_approx(tf)):
        assert (g.k_coeff, g.rel_degree) == (5.0, 0)


def test_relative_degree_counts_polynomial_degrees(case1, case3):
    assert case1.relative_degree == 2
    assert case3.relative_degree == 3


def test_repeated_entries_equal_summed_multiplicity():
    split = TransferFunction(2.0, 1, (PolyTerm(3, 1), PolyTerm(3, 1), PolyTerm(5, 1, 0, 1, NUM)))
    merged = TransferFunction(2.0, 1, (PolyTerm(3, 1, 0, 2), PolyTerm(5, 1, 0, 1, NUM)))
    assert low_freq_approx(split) == low_freq_approx(merged)
    assert high_freq_approx(split) == high_freq_approx(merged)
    s = 1j * np.logspace(-2, 2, 9)
    np.testing.assert_allclose(split(s), merged(s), rtol=1e-14)


@given(transfer_functions())
def test_second_order_corner_is_root_modulus(tf):
    for t in tf.terms:
        a = compute_attributes(t)
        if a.order == 2:
            assert a.critical_freq == pytest.approx(abs(a.main_root), rel=1e-12)
            assert abs(a.damping) < 1


@given(transfer_functions())
def test_attributes_are_pure(tf):
    for t in tf.terms:
        assert compute_attributes(t) == compute_attributes(PolyTerm(t.a0, t.a1, t.a2, t.multiplicity, t.side))


@given(transfer_functions())
def test_end_approximants_generalise(tf):
    r = len(critical_set(tf))
    g0 = approx_function(tf, 0)
    gr = approx_function(tf, r)
    lo, hi = low_freq_approx(tf), high_freq_approx(tf)
    assert (g0.k_coeff, g0.rel_degree) == (lo.k_coeff, lo.rel_degree)
    assert (gr.k_coeff, gr.rel_degree) == (hi.k_coeff, hi.rel_degree)
    assert gr.rel_degree == tf.relative_degree
