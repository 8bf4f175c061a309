"""Tests for relation-expression parsing and denominator clearing."""
from __future__ import annotations

from fractions import Fraction

import pytest

from thetaprod.relation import (Poly2, RelationError, clear_relation,
                                parse_relation, parse_relation_pair)


def poly(d):
    return Poly2({k: Fraction(v) for k, v in d.items()})


# ---------------------------------------------------------------------------
# Poly2 algebra
# ---------------------------------------------------------------------------

def test_poly_basic_algebra():
    p, q = Poly2.var("P"), Poly2.var("Q")
    expr = (p + q) * (p - q)
    assert expr == poly({(2, 0): 1, (0, 2): -1})
    assert (p * q).pow(3) == poly({(3, 3): 1})
    assert (p - p).is_zero()
    assert Poly2.const(0).is_zero()


def test_poly_pow_rejects_negative():
    with pytest.raises(ValueError):
        Poly2.var("P").pow(-1)


def test_poly_str_is_stable():
    s = str(poly({(2, 1): 3, (0, 0): -1}))
    assert "P^2" in s and "Q" in s and "-1" in s


# ---------------------------------------------------------------------------
# parsing and clearing
# ---------------------------------------------------------------------------

def test_parse_simple_difference():
    assert parse_relation("P - Q") == poly({(1, 0): 1, (0, 1): -1})


def test_parse_clears_monomial_denominators():
    got = parse_relation("P*Q + 9/(P*Q) - ((P/Q)^3 + (Q/P)^3)")
    # multiplied through by P^3 Q^3 relative to the P^-3 Q^-3 floor
    assert got == poly({(4, 4): 1, (2, 2): 9, (6, 0): -1, (0, 6): -1})


def test_parse_normalizes_integer_content():
    a = parse_relation("2*P - 2*Q")
    b = parse_relation("P - Q")
    assert a == b


def test_identically_zero_is_rejected():
    with pytest.raises(RelationError, match="identically zero"):
        parse_relation("(P - Q)*(P + Q) - P^2 + Q^2")


def test_single_monomial_is_rejected():
    with pytest.raises(RelationError, match="single monomial"):
        parse_relation("P/Q")
    with pytest.raises(RelationError, match="single monomial"):
        parse_relation("3*P^2*Q")


def test_negative_exponents_via_caret():
    got = parse_relation("P^-2 - Q^(-2)")
    assert got == poly({(0, 2): 1, (2, 0): -1})


def test_division_by_zero_expression():
    with pytest.raises(RelationError, match="division by zero"):
        parse_relation("P/(Q - Q)")


def test_syntax_errors_carry_positions():
    with pytest.raises(RelationError) as info:
        parse_relation("P + ", 1, 1)
    assert info.value.line == 1
    assert "column 5" in str(info.value)

    with pytest.raises(RelationError) as info:
        parse_relation("P +\n R", 1, 1)
    assert info.value.line == 2

    with pytest.raises(RelationError, match="exponent"):
        parse_relation("P^Q")

    with pytest.raises(RelationError, match="trailing"):
        parse_relation("P - Q)")


def test_fractional_constants_are_cleared():
    # constants only enter via division; clearing restores integrality
    got = parse_relation("P/2 - Q/3")
    assert got == poly({(1, 0): 3, (0, 1): -2})


def test_pair_view_before_clearing():
    pair = parse_relation_pair("P/Q")
    assert pair.num == poly({(1, 0): 1})
    assert pair.den == poly({(0, 1): 1})
    with pytest.raises(RelationError):
        clear_relation(pair)
