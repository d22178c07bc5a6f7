import math
import warnings

import mpmath
import pytest

from ptairy.bounds import (
    NormTriple,
    bi_complex_zero,
    compute_constants,
    similarity_threshold,
    turning_bounds,
)
from ptairy.detcore import KNOT
from ptairy.errors import AllNormsMissing
from ptairy.locus import find_turning
from reference import BI_ZERO_1, BI_ZERO_2, C_1, C_2, COT_BI_ZERO_1, COT_BI_ZERO_2


def _closed_form_first_series():
    # sum_{k>=1} 1/(k^2 - a^2) = 1/(2a^2) - pi cot(pi a)/(2a); drop the k = 1 term
    a = math.sqrt(2.5)
    full = 1 / (2 * a * a) - math.pi / math.tan(math.pi * a) / (2 * a)
    return full - 1 / (1 - 2.5)


def test_c_inf_expression():
    assert compute_constants().c_inf == 3 * math.pi**2 / 8


def test_c1_against_closed_form():
    c = compute_constants()
    s1 = _closed_form_first_series()
    assert c.c_1 == pytest.approx((math.pi**2 / 4) / (2 / 3 + s1), rel=1e-13)
    assert c.c_1 == pytest.approx(C_1, rel=1e-13)


def test_c2_against_nsum():
    c = compute_constants()
    with mpmath.workdps(30):
        s2 = mpmath.nsum(lambda k: 1 / (k * k - mpmath.mpf(5) / 2) ** 2, [2, mpmath.inf])
        ref = float(mpmath.pi**2 / 4 / mpmath.sqrt(mpmath.mpf(4) / 9 + s2))
    assert c.c_2 == pytest.approx(ref, rel=1e-13)
    assert c.c_2 == pytest.approx(C_2, rel=1e-13)


def test_tol_halving():
    prev = compute_constants(1e-8)
    for tol in (5e-9, 2.5e-9, 1.25e-9):
        cur = compute_constants(tol)
        assert cur.tail_error_1 <= prev.tail_error_1 / 2 * (1 + 1e-9)
        assert cur.tail_error_2 <= prev.tail_error_2 / 2 * (1 + 1e-9)
        assert abs(cur.c_1 - prev.c_1) <= 1e-6
        assert abs(cur.c_2 - prev.c_2) <= 1e-6
        prev = cur


def test_tail_error_bounds_true_error():
    c = compute_constants(1e-8)
    s1 = _closed_form_first_series()
    assert abs((math.pi**2 / 4) / c.c_1 - 2 / 3 - s1) <= c.tail_error_1 * (1 + 1e-6)


def test_model_potential_threshold():
    # p(x) = i x: ||p||_inf = 1, ||p||_1 = 1, ||p||_2 = sqrt(2/3)
    eps_max, which = similarity_threshold(NormTriple(1.0, 1.0, 0.8165))
    assert eps_max == 3 * math.pi**2 / 8
    assert which == "L_inf"


def test_threshold_picks_maximum_and_skips_missing():
    c = compute_constants()
    eps_max, which = similarity_threshold(NormTriple(norm_1=0.1))
    assert which == "L_1" and eps_max == pytest.approx(c.c_1 / 0.1)
    eps_max, which = similarity_threshold(NormTriple(norm_inf=1.0, norm_2=0.1))
    assert which == "L_2"


def test_zero_norm_gives_infinity():
    assert similarity_threshold(NormTriple(norm_inf=0.0))[0] == math.inf


def test_norm_validation():
    with pytest.raises(AllNormsMissing):
        NormTriple()
    with pytest.raises(ValueError):
        NormTriple(norm_inf=-1.0)
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        NormTriple(norm_inf=1.0, norm_1=3.0)
    assert w


def test_bi_zeros_against_reference():
    assert abs(bi_complex_zero(1) - BI_ZERO_1) < 1e-12
    assert abs(bi_complex_zero(2) - BI_ZERO_2) < 1e-12


def test_turning_bounds():
    tb = turning_bounds(5)
    assert tb[0].bound == pytest.approx(COT_BI_ZERO_1, rel=1e-12)
    assert tb[1].bound == pytest.approx(COT_BI_ZERO_2, rel=1e-12)
    assert all(0 < t.bound < KNOT for t in tb)
    assert all(a.bound < b.bound for a, b in zip(tb, tb[1:]))


def test_turning_chain_with_tracer(branches_200):
    tb = turning_bounds(2)
    for k in (1, 2):
        tp = find_turning(branches_200[2 * k - 1])
        assert tp.lambda_turn < tb[k - 1].bound < KNOT


def test_bad_arguments():
    with pytest.raises(ValueError):
        compute_constants(0.0)
    with pytest.raises(ValueError):
        turning_bounds(0)
