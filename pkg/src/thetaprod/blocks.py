"""High-precision numeric evaluation of the theta building blocks and of
eta quotients, with explicit truncation-tail accounting.

Every sparse series here has integer exponents g(n) that grow quadratically
and coefficients bounded by 2 in absolute value, so for 0 < x < 1 the tail
after the n-th retained term is at most  c * x^(g(n+1)) / (1 - x).  That
bound is added to the returned error estimate rather than assumed away.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from .precision import (PrecisionError, PrecisionSpec, RealValue,
                        compute_checked, rv_exp, rv_pi)
from .quotient import EtaQuotient
from .series import PowerSeries

BLOCK_KINDS = ("f_minus", "f_plus", "phi_plus", "phi_minus",
               "psi_plus", "psi_minus", "chi_plus", "chi_minus")


@dataclass(frozen=True)
class Nome:
    m: Fraction
    n: Fraction
    q: RealValue


def nome(m, n, prec: PrecisionSpec) -> Nome:
    """q = exp(-pi * sqrt(m/n)) for positive rational m, n."""
    m, n = Fraction(m), Fraction(n)
    if m <= 0 or n <= 0:
        raise ValueError("nome parameters must be positive")

    def build():
        root = RealValue.from_fraction(m / n).sqrt()
        return rv_exp(-(rv_pi() * root))

    return Nome(m, n, compute_checked(prec, build))


# ---------------------------------------------------------------------------
# sparse theta sums
# ---------------------------------------------------------------------------

def _pent(j: int) -> int:
    return j * (3 * j - 1) // 2


def _tri(j: int) -> int:
    return j * (j + 1) // 2


def _f_plus_sign(j: int) -> int:
    return -1 if (j * (j - 1) // 2) % 2 else 1


def _terms_f(sign: str):
    # term stream for f(-x) or f(x); yields (exponent, coefficient) with the
    # per-index pair n, -n merged, plus the next unseen exponent for tailing
    def stream():
        yield 0, 1, _pent(1)
        j = 1
        while True:
            if sign == "minus":
                s1 = s2 = -1 if j % 2 else 1
            else:
                s1, s2 = _f_plus_sign(j), _f_plus_sign(-j)
            yield _pent(j), s1, _pent(-j)
            yield _pent(-j), s2, _pent(j + 1)
            j += 1
    return stream()


def _terms_phi(sign: str):
    def stream():
        yield 0, 1, 1
        j = 1
        while True:
            c = 2 if sign == "plus" or j % 2 == 0 else -2
            yield j * j, c, (j + 1) * (j + 1)
            j += 1
    return stream()


def _terms_psi(sign: str):
    def stream():
        j = 0
        while True:
            c = 1
            if sign == "minus" and _tri(j) % 2:
                c = -1
            yield _tri(j), c, _tri(j + 1)
            j += 1
    return stream()


def _sum_block(kind: str, x: RealValue) -> RealValue:
    """Sum one primitive block at argument x, 0 < x < 1, at current mp.dps."""
    if kind in ("f_minus", "f_plus"):
        terms, cbound = _terms_f(kind.split("_")[1]), 2
    elif kind in ("phi_plus", "phi_minus"):
        terms, cbound = _terms_phi(kind.split("_")[1]), 2
    else:
        terms, cbound = _terms_psi(kind.split("_")[1]), 1

    xm = x.magnitude
    cutoff = mpf(10) ** (-(mp.dps - 3))
    total = mpf(0)
    deriv = mpf(0)          # sum of |c| * g * x^(g-1), for the dS/dx bound
    next_exp = 0
    count = 0
    for g, c, nxt in terms:
        p = xm ** g
        total += c * p
        if g > 0:
            deriv += abs(c) * g * (p / xm)
        count += 1
        next_exp = nxt
        if p < cutoff and g > 0:
            break
        if count > 100000:
            raise PrecisionError("theta sum failed to converge")
    tail = cbound * xm ** next_exp / (1 - xm)
    err = tail + deriv * x.error_bound + (count + 2) * abs(total) * mpf(10) ** (2 - mp.dps)
    return RealValue(total, err)


def _eval_block_raw(kind: str, k: int, q: RealValue) -> RealValue:
    if kind == "chi_plus":
        return _eval_block_raw("f_plus", k, q) / _eval_block_raw("f_minus", 2 * k, q)
    if kind == "chi_minus":
        return _eval_block_raw("f_minus", k, q) / _eval_block_raw("f_minus", 2 * k, q)
    return _sum_block(kind, q.powi(k))


def eval_block(kind: str, k: int, q: RealValue, prec: PrecisionSpec) -> RealValue:
    """One theta block at argument q^k.  Requires 0 < q < 1."""
    if kind not in BLOCK_KINDS:
        raise ValueError(f"unknown block kind {kind!r}")
    if k < 1:
        raise ValueError("block scale k must be >= 1")
    if not (0 < q.magnitude < 1):
        raise ValueError("block argument must satisfy 0 < q < 1")
    return compute_checked(prec, lambda: _eval_block_raw(kind, k, q))


def _eval_quotient_raw(expr: EtaQuotient, q: RealValue) -> RealValue:
    out = RealValue.exact(1)
    if expr.q_power != 0:
        out = q.powf(expr.q_power)
    for f in expr.factors:
        kind = "f_minus" if f.sign == "minus" else "f_plus"
        out = out * _eval_block_raw(kind, f.k, q).powi(f.exponent)
    return out


def eval_eta_quotient(expr: EtaQuotient, q: RealValue, prec: PrecisionSpec) -> RealValue:
    """Numeric value of an eta quotient; the empty quotient evaluates to 1."""
    if not (0 < q.magnitude < 1):
        raise ValueError("argument must satisfy 0 < q < 1")
    return compute_checked(prec, lambda: _eval_quotient_raw(expr, q))


def eval_series_at(series: PowerSeries, q: RealValue, prec: PrecisionSpec,
                   coeff_bound: int = 2) -> RealValue:
    """Evaluate a truncated lattice series at q, charging the discarded tail
    as  coeff_bound * u^(order+1) / (1 - u)  with u = q^(1/24).

    Useful for consistency checks between the exact and numeric layers; the
    bound is only valid when the dropped coefficients really are bounded by
    coeff_bound, which holds for the block families above.
    """
    if not (0 < q.magnitude < 1):
        raise ValueError("argument must satisfy 0 < q < 1")

    def build():
        u = q.powf(Fraction(1, 24))
        total = RealValue.exact(0)
        for e in sorted(series.coeffs):
            total = total + RealValue.from_fraction(series.coeffs[e]) * u.powf(Fraction(e))
        um = u.magnitude
        tail = coeff_bound * um ** (series.order + 1) / (1 - um)
        return RealValue(total.magnitude, total.error_bound + tail)

    return compute_checked(prec, build)
