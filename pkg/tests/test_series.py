"""Truncated log-gamma series: main term, remainders, truncation control."""

import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st_

from stirling.errors import DomainError, ResourceError
from stirling.mpcore import PrecisionCtx, bigfloat, elementary
from stirling.series import (f_term, half_ln_2pi, ln_factorial_stirling,
                             lngamma_stirling, main_term_P, optimal_truncation,
                             remainder_R, stirling_original_log10,
                             term_coefficient)

CTX = PrecisionCtx(256)

HALF_LN_2PI = Fraction(
    "0.9189385332046727417803297364056176398613974736377834128171515404827657")
HALF_LN_PI = Fraction(
    "0.5723649429247000870717136756765293558236474064576557857568115357360689")
TIGHT = Fraction(1, 1 << 248)


def mp_ref(expr_fn, dps=60):
    """Reference values from the high-level mpmath context (independent
    code path from the raw-kernel implementations under test)."""
    with mpmath.workdps(dps):
        return Fraction(mpmath.nstr(expr_fn(), 50, strip_zeros=False))


def test_half_ln_2pi_matches_literal():
    assert abs(half_ln_2pi(CTX) - HALF_LN_2PI) < Fraction(1, 10**60)


def test_main_term_at_one():
    # P(1) = -1 + (1/2) ln(2 pi); tolerance set by the 70-digit literal
    assert abs(main_term_P(1, CTX) - (HALF_LN_2PI - 1)) < Fraction(1, 10**68)


def test_main_term_at_two_direct_substitution():
    ref = mp_ref(lambda: 2 * mpmath.log(2) - 2 - mpmath.log(2) / 2
                 + mpmath.log(2 * mpmath.pi) / 2)
    assert abs(main_term_P(2, CTX) - ref) < Fraction(1, 10**45)


def test_main_term_gap_to_ln_9_factorial():
    # ln Gamma(10) - P(10) ~ first correction term 1/120 ~ 8.33e-3
    ln9f = mp_ref(lambda: mpmath.log(362880))
    gap = abs(main_term_P(10, CTX) - ln9f)
    assert Fraction(82, 10**4) < gap < Fraction(84, 10**4)


def test_remainder_base_case_is_zero():
    assert remainder_R(7, 0, CTX).is_zero()
    assert remainder_R(Fraction(1, 3), 0, CTX).is_zero()


def test_remainder_exact_low_orders():
    assert abs(remainder_R(1, 1, CTX) - Fraction(1, 12)) < TIGHT
    # at z=2: 1/24 - 1/2880
    assert abs(remainder_R(2, 2, CTX) - (Fraction(1, 24) - Fraction(1, 2880))) < TIGHT


@pytest.mark.parametrize("z", [Fraction(1, 2), 1, 2, 10])
def test_remainder_telescopes_term_by_term(z):
    for N in range(1, 41):
        diff = remainder_R(z, N, CTX) - remainder_R(z, N - 1, CTX)
        term = f_term(2 * N, z, CTX)
        scale = max(abs(remainder_R(z, N, CTX)), abs(term), bigfloat(1, CTX))
        assert abs(diff - term) <= scale * Fraction(4, 1 << 256)


def test_f_term_cases():
    e = elementary("exp", 1, CTX)
    assert abs(f_term(1, e, CTX) + Fraction(1, 2)) < Fraction(1, 1 << 240)
    assert f_term(3, 5, CTX).is_zero()
    assert f_term(7, Fraction(1, 4), CTX).is_zero()
    # f_2(1) must equal R_1(1) - R_0(1) = 1/12
    assert abs(f_term(2, 1, CTX) - Fraction(1, 12)) < TIGHT


@pytest.mark.parametrize("z", [1, Fraction(5, 2)])
@pytest.mark.parametrize("N", [1, 2, 4, 6])
def test_partial_sums_reassemble_main_and_remainder(z, N):
    total = f_term(0, z, CTX)
    for k in range(1, 2 * N + 1):
        total = total + f_term(k, z, CTX)
    rhs = main_term_P(z, CTX) + remainder_R(z, N, CTX) - half_ln_2pi(CTX)
    scale = max(abs(total), bigfloat(1, CTX))
    assert abs(total - rhs) <= scale * Fraction(16, 1 << 256)


def test_lngamma_stirling_at_one():
    approx = lngamma_stirling(1, 3, CTX)
    assert abs(approx.value) <= approx.omitted_term


def test_lngamma_stirling_ten_terms_three():
    # ln Gamma(10): truncation error is just under the omitted term
    ref = mp_ref(lambda: mpmath.loggamma(10))
    approx = lngamma_stirling(10, 3, CTX)
    err = abs(approx.value - ref)
    assert err <= approx.omitted_term
    # actual gap ~ 5.87e-11 (the N=4 term minus higher corrections)
    assert Fraction(55, 10**12) < err < Fraction(60, 10**12)


def test_lngamma_stirling_brackets_half():
    lo = lngamma_stirling(Fraction(1, 2), 2, CTX).value
    hi = lngamma_stirling(Fraction(1, 2), 3, CTX).value
    assert lo < HALF_LN_PI < hi


def test_omitted_term_formula():
    approx = lngamma_stirling(Fraction(7, 3), 5, CTX)
    expected = abs(term_coefficient(6)) / Fraction(7, 3) ** 11
    assert abs(approx.omitted_term - expected) < expected * Fraction(1, 1 << 240)


def test_optimal_truncation_at_one():
    approx = optimal_truncation(1, CTX)
    # magnitudes 1/12, 1/360, 1/1260, 1/1680, then growth: stop before the
    # smallest term, so the omitted term is exactly 1/1680
    assert approx.order_used == 3
    assert abs(approx.omitted_term - Fraction(1, 1680)) < TIGHT
    assert abs(approx.value) <= approx.omitted_term  # ln Gamma(1) = 0


@pytest.mark.parametrize("z", [Fraction(1, 4), Fraction(1, 2), 1, 2, 10])
def test_optimal_truncation_error_within_omitted(z):
    from stirling.oracle import lngamma_binet2
    approx = optimal_truncation(z, CTX)
    oracle = lngamma_binet2(z, CTX)
    assert abs(approx.value - oracle.value) <= approx.omitted_term


@settings(max_examples=20, deadline=None)
@given(z=st_.fractions(min_value=Fraction(3, 10), max_value=Fraction(8),
                       max_denominator=16))
def test_optimal_truncation_bounded_by_omitted_random_z(z):
    from stirling.oracle import lngamma_binet2
    approx = optimal_truncation(z, CTX)
    oracle = lngamma_binet2(z, CTX)
    assert abs(approx.value - oracle.value) <= approx.omitted_term


@pytest.mark.parametrize("z", [1, 5, 10])
def test_term_magnitudes_unimodal(z):
    mags = [abs(f_term(2 * k, z, CTX)) for k in range(1, 61)]
    rises = [i for i in range(len(mags) - 1) if mags[i + 1] > mags[i]]
    assert rises, "profile never grew within the scanned range"
    pivot = rises[0]
    assert all(mags[i + 1] < mags[i] for i in range(pivot))
    assert all(mags[i + 1] > mags[i] for i in range(pivot, len(mags) - 1))


def test_stirling_original_term_improvement_n10():
    exact = mp_ref(lambda: mpmath.log(3628800) / mpmath.log(10))
    errs = [abs(stirling_original_log10(10, t, CTX) - exact) for t in (1, 2, 3)]
    assert errs[1] < errs[0]
    assert errs[2] < errs[1]


def test_stirling_original_closed_form_n1():
    ref = mp_ref(lambda: (mpmath.mpf(3) / 2) * mpmath.log(mpmath.mpf(3) / 2) / mpmath.log(10)
                 - (mpmath.mpf(3) / 2) / mpmath.log(10)
                 + mpmath.log(2 * mpmath.pi) / mpmath.log(10) / 2)
    got = stirling_original_log10(1, 1, CTX)
    assert abs(got - ref) < Fraction(1, 10**45)


def test_stirling_original_high_accuracy_n100():
    exact = mp_ref(lambda: mpmath.log(mpmath.factorial(100)) / mpmath.log(10), dps=80)
    err = abs(stirling_original_log10(100, 3, CTX) - exact)
    assert err <= Fraction(1, 10**9)


def test_stirling_original_rejects_bad_term_count():
    for t in (0, 4, -1):
        with pytest.raises(DomainError):
            stirling_original_log10(10, t, CTX)


def test_ln_factorial_stirling_base():
    approx = ln_factorial_stirling(1, 0, CTX)
    assert abs(approx.value - main_term_P(1, CTX)) < TIGHT


def test_ln_factorial_stirling_13_2():
    # approximating ln 12! = ln 479001600; the truncation gap is just under
    # the first omitted term 1/(1260 * 13^5) ~ 2.14e-9
    ref = mp_ref(lambda: mpmath.log(479001600))
    approx = ln_factorial_stirling(13, 2, CTX)
    err = abs(approx.value - ref)
    assert err <= approx.omitted_term
    assert Fraction(20, 10**10) < err < Fraction(22, 10**10)


def test_ln_factorial_stirling_brackets_zero():
    below = ln_factorial_stirling(2, 2, CTX).value
    above = ln_factorial_stirling(2, 1, CTX).value
    assert below < 0 < above


def test_domain_and_resource_errors():
    with pytest.raises(DomainError):
        main_term_P(0, CTX)
    with pytest.raises(DomainError):
        main_term_P(-3, CTX)
    with pytest.raises(DomainError):
        remainder_R(-1, 2, CTX)
    with pytest.raises(ResourceError):
        remainder_R(2, 400, CTX)
    with pytest.raises(DomainError):
        ln_factorial_stirling(0, 1, CTX)
