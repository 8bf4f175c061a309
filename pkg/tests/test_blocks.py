"""Tests for the numeric theta-block and eta-quotient evaluator."""
from __future__ import annotations

from fractions import Fraction

import pytest
from mpmath import mp, mpf, workdps

from thetaprod.blocks import (BLOCK_KINDS, Nome, eval_block, eval_eta_quotient,
                              eval_series_at, nome)
from thetaprod.precision import PrecisionSpec, RealValue, digits_agreed
from thetaprod.quotient import EtaQuotient
from thetaprod.series import mul, series_f, series_phi, series_psi

P40 = PrecisionSpec.of(40)
P60 = PrecisionSpec.of(60)


def probe(text: str) -> RealValue:
    """Decimal probe resolved well beyond any working precision used here.

    0.2 and friends are not dyadic, so an mpf made at ambient precision is a
    different real number than one made at 70 digits; building the probe once
    at 150 digits keeps every layer talking about the same point.
    """
    with workdps(150):
        return RealValue.from_fraction(Fraction(text))


def brute_block(kind, k, q, terms=400):
    """Dense reference sum straight from the series definitions."""
    x = q ** k
    if kind == "phi_plus":
        return 1 + 2 * sum(x ** (n * n) for n in range(1, terms))
    if kind == "phi_minus":
        return 1 + 2 * sum((-1) ** n * x ** (n * n) for n in range(1, terms))
    if kind == "psi_plus":
        return sum(x ** (n * (n + 1) // 2) for n in range(terms))
    if kind == "psi_minus":
        return sum((-1) ** (n * (n + 1) // 2 % 2) * x ** (n * (n + 1) // 2)
                   for n in range(terms))
    if kind == "f_minus":
        prod = mpf(1)
        for n in range(1, terms):
            prod *= 1 - x ** n
        return prod
    if kind == "f_plus":
        prod = mpf(1)
        for n in range(1, terms):
            prod *= 1 + x ** (2 * n - 1)      # chi(x)
        return prod * brute_block("f_minus", 2, q ** k)
    if kind == "chi_plus":
        prod = mpf(1)
        for n in range(1, terms):
            prod *= 1 + x ** (2 * n - 1)
        return prod
    if kind == "chi_minus":
        prod = mpf(1)
        for n in range(1, terms):
            prod *= 1 - x ** (2 * n - 1)
        return prod
    raise AssertionError(kind)


# ---------------------------------------------------------------------------
# nome
# ---------------------------------------------------------------------------

def test_nome_reference_points():
    q11 = nome(1, 1, P60)
    with workdps(80):
        assert digits_agreed(q11.q, mp.exp(-mp.pi)) >= 60
    q23 = nome(2, 3, P60)
    assert abs(float(q23.q.magnitude) - 7.69e-2) < 1e-3
    assert q23.m == Fraction(2) and q23.n == Fraction(3)


def test_nome_square_law():
    q11 = nome(1, 1, P60)
    q41 = nome(4, 1, P60)
    with workdps(80):
        assert digits_agreed(q41.q, q11.q.powi(2)) >= 60


def test_nome_accepts_rationals_and_rejects_nonpositive():
    q = nome(Fraction(1, 3), 1, P40)
    with workdps(60):
        assert digits_agreed(q.q, mp.exp(-mp.pi / mp.sqrt(3))) >= 40
    with pytest.raises(ValueError):
        nome(0, 1, P40)
    with pytest.raises(ValueError):
        nome(1, -2, P40)


def test_nome_meets_budget():
    q = nome(2, 3, PrecisionSpec.of(100))
    assert q.q.error_bound <= mpf(10) ** -100
    assert isinstance(q, Nome)


# ---------------------------------------------------------------------------
# eval_block
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("kind", BLOCK_KINDS)
@pytest.mark.parametrize("qval", ["0.05", "0.2"])
def test_blocks_match_dense_reference(kind, qval):
    got = eval_block(kind, 1, probe(qval), P40)
    with workdps(70):
        ref = brute_block(kind, 1, mpf(1) * Fraction(qval))
        assert digits_agreed(got, ref) >= 40


def test_block_scale_argument():
    q = probe("0.3")
    direct = eval_block("psi_plus", 3, q, P40)
    with workdps(150):
        cubed = q.powi(3)
    rescaled = eval_block("psi_plus", 1, cubed, P40)
    with workdps(60):
        assert digits_agreed(direct, rescaled) >= 40


def test_block_product_identity_psi_phi():
    # f(q) f(-q^2) = psi(-q) phi(q), numerically at q = 0.3
    q = probe("0.3")
    with workdps(80):
        lhs = eval_block("f_plus", 1, q, P60) * eval_block("f_minus", 2, q, P60)
        rhs = eval_block("psi_minus", 1, q, P60) * eval_block("phi_plus", 1, q, P60)
        assert digits_agreed(lhs, rhs) >= 58


def test_block_chi_complement_identity():
    # chi(q) chi(-q) = chi(-q^2)
    q = probe("0.25")
    with workdps(80):
        lhs = eval_block("chi_plus", 1, q, P60) * eval_block("chi_minus", 1, q, P60)
        rhs = eval_block("chi_minus", 2, q, P60)
        assert digits_agreed(lhs, rhs) >= 58


def test_block_rejects_bad_arguments():
    q = probe("0.1")
    with pytest.raises(ValueError):
        eval_block("phi", 1, q, P40)
    with pytest.raises(ValueError):
        eval_block("phi_plus", 0, q, P40)
    with pytest.raises(ValueError):
        eval_block("phi_plus", 1, RealValue.exact(mpf("1.5")), P40)


def test_block_error_bound_is_honest():
    got = eval_block("f_minus", 1, probe("0.2"), P40)
    with workdps(90):
        ref = brute_block("f_minus", 1, mpf(1) / 5, terms=900)
        assert abs(got.magnitude - ref) <= got.error_bound


def test_block_propagates_input_error():
    fuzzy = RealValue(mpf("0.2"), mpf("1e-30"))
    got = eval_block("phi_plus", 1, fuzzy, PrecisionSpec(20, 15))
    # d(phi)/dq at 0.2 is about 2, so the input error must survive in the bound
    assert got.error_bound >= mpf("1e-30")


# ---------------------------------------------------------------------------
# eval_eta_quotient
# ---------------------------------------------------------------------------

def test_empty_quotient_is_one():
    v = eval_eta_quotient(EtaQuotient.of(0, []), probe("0.1"), P40)
    assert v.magnitude == 1


def test_quotient_matches_blockwise_product():
    q = probe("0.15")
    expr = EtaQuotient.of(Fraction(-1, 6), [(1, "minus", 2), (3, "minus", -2)])
    got = eval_eta_quotient(expr, q, P60)
    with workdps(90):
        direct = (q.powf(Fraction(-1, 6))
                  * eval_block("f_minus", 1, q, P60).powi(2)
                  * eval_block("f_minus", 3, q, P60).powi(-2))
        assert digits_agreed(got, direct) >= 58


def test_quotient_with_plus_factor():
    q = probe("0.2")
    expr = EtaQuotient.of(0, [(1, "plus", 1), (2, "minus", 1)])
    got = eval_eta_quotient(expr, q, P60)
    with workdps(90):
        direct = eval_block("f_plus", 1, q, P60) * eval_block("f_minus", 2, q, P60)
        assert digits_agreed(got, direct) >= 58


# ---------------------------------------------------------------------------
# series vs numeric consistency
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("builder,kind", [
    (lambda o: series_f(1, "minus", o), "f_minus"),
    (lambda o: series_f(1, "plus", o), "f_plus"),
    (lambda o: series_phi("minus", o), "phi_minus"),
    (lambda o: series_psi("plus", o), "psi_plus"),
])
def test_series_evaluation_agrees_with_blocks(builder, kind):
    # q = 0.05 and lattice order 24*40 leave a truncation tail near 1e-52,
    # comfortably inside the 40-digit budget
    order = 24 * 40
    q = probe("0.05")
    via_series = eval_series_at(builder(order), q, P40)
    via_blocks = eval_block(kind, 1, q, P40)
    with workdps(70):
        assert digits_agreed(via_series, via_blocks) >= 39


def test_series_evaluation_of_product():
    order = 24 * 40
    q = probe("0.05")
    prod = mul(series_psi("minus", order), series_phi("plus", order))
    via_series = eval_series_at(prod, q, P40, coeff_bound=10)
    with workdps(70):
        direct = eval_block("psi_minus", 1, q, P40) * eval_block("phi_plus", 1, q, P40)
        assert digits_agreed(via_series, direct) >= 39
