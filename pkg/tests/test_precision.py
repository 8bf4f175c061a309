"""Tests for the checked-precision scalar layer."""
from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpf, workdps

from thetaprod.precision import (PrecisionError, PrecisionSpec, RealValue,
                                 compute_checked, digits_agreed, rv_exp, rv_pi)


# ---------------------------------------------------------------------------
# PrecisionSpec
# ---------------------------------------------------------------------------

def test_spec_default_guard_scales_with_target():
    assert PrecisionSpec.of(100).guard_digits == 35
    assert PrecisionSpec.of(10).guard_digits == 17
    assert PrecisionSpec.of(100).working_digits == 135


def test_spec_rejects_bad_parameters():
    with pytest.raises(ValueError):
        PrecisionSpec(0, 20)
    with pytest.raises(ValueError):
        PrecisionSpec(50, 14)
    # 15 guard digits is the documented floor, not an error
    assert PrecisionSpec(50, 15).working_digits == 65


def test_spec_budget_and_widening():
    spec = PrecisionSpec(40, 15)
    assert spec.budget() == mpf(10) ** -40
    wider = spec.widened()
    assert wider.target_digits == 40
    assert wider.guard_digits > spec.guard_digits


# ---------------------------------------------------------------------------
# RealValue arithmetic
# ---------------------------------------------------------------------------

def test_exact_constructors():
    assert RealValue.exact(3).error_bound == 0
    v = RealValue.from_fraction(Fraction(1, 3))
    assert v.error_bound > 0
    assert abs(v.magnitude - mpf(1) / 3) <= v.error_bound


def test_division_by_noise_is_refused():
    tiny = RealValue(mpf("1e-40"), mpf("1e-39"))
    with pytest.raises(PrecisionError):
        RealValue.exact(1) / tiny


def test_powi_matches_repeated_multiplication():
    with workdps(40):
        v = RealValue.from_fraction(Fraction(7, 5))
        direct = v * v * v * v * v
        assert v.powi(5).magnitude == pytest.approx(float(direct.magnitude))
        inv = v.powi(-3)
        assert abs(inv.magnitude * v.magnitude ** 3 - 1) < mpf("1e-35")
    assert RealValue.exact(0).powi(0).magnitude == 1


def test_powf_rational_exponent():
    with workdps(50):
        v = RealValue.exact(2)
        r = v.powf(Fraction(3, 2))
        assert abs(r.magnitude - mp.sqrt(8)) <= r.error_bound + mpf("1e-45")
        with pytest.raises(PrecisionError):
            RealValue.exact(-2).powf(Fraction(1, 2))


@settings(max_examples=80, deadline=None)
@given(st.fractions(min_value=-50, max_value=50, max_denominator=20),
       st.fractions(min_value=-50, max_value=50, max_denominator=20),
       st.fractions(min_value=-50, max_value=50, max_denominator=20))
def test_error_bounds_are_honest(a, b, c):
    """Chained +,-,* on exact rationals stays within the claimed bound."""
    with workdps(30):
        ra, rb, rc = (RealValue.from_fraction(x) for x in (a, b, c))
        got = (ra + rb) * rc - ra * rb
        true = (a + b) * c - a * b
        err = abs(got.magnitude - mpf(true.numerator) / mpf(true.denominator))
        assert err <= got.error_bound + mpf("1e-27")


def test_meets_uses_relative_budget_for_large_values():
    spec = PrecisionSpec(30, 15)
    big = RealValue(mpf("1e10"), mpf("1e-25"))
    # relative budget: 1e-25 <= 1e-30 * 1e10
    assert big.meets(spec)
    small = RealValue(mpf("0.5"), mpf("1e-25"))
    assert not small.meets(spec)


# ---------------------------------------------------------------------------
# compute_checked
# ---------------------------------------------------------------------------

def test_compute_checked_passes_first_time():
    spec = PrecisionSpec.of(50)
    v = compute_checked(spec, lambda: rv_exp(RealValue.exact(1)))
    assert v.meets(spec)
    with workdps(70):
        assert digits_agreed(v, mp.e) >= 50


def test_compute_checked_retries_with_wider_guard():
    spec = PrecisionSpec(50, 15)
    calls = []

    def builder():
        calls.append(mp.dps)
        # error that only shrinks below 1e-50 once the guard widens
        return RealValue(mpf(1), mpf(10) ** (-(mp.dps - 30)))

    v = compute_checked(spec, builder)
    assert v.meets(spec)
    assert len(calls) >= 2
    assert calls[1] > calls[0]


def test_compute_checked_gives_up_honestly():
    spec = PrecisionSpec(50, 15)
    with pytest.raises(PrecisionError):
        compute_checked(spec, lambda: RealValue(mpf(1), mpf(1)))


def test_rv_pi_at_current_precision():
    with workdps(60):
        v = rv_pi()
        assert digits_agreed(v, mp.pi) >= 58


# ---------------------------------------------------------------------------
# digits_agreed
# ---------------------------------------------------------------------------

def test_digits_agreed_basics():
    with workdps(30):
        assert digits_agreed(mpf(1), mpf(1)) == 30
        assert digits_agreed(mpf("1.00000001"), mpf(1)) == 8
        assert digits_agreed(mpf(2), mpf(3)) <= 1
