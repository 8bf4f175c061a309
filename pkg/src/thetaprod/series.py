"""Exact formal Laurent series over the rationals on the q^(1/24) lattice.

Every fractional q-power needed by the eta-quotient catalogue (q^(1/24),
q^(1/8), q^(1/6), q^(1/4), q^(1/3), q^(1/2), q^(5/24), ...) is an integer
multiple of 1/24, so a single global lattice suffices: a stored exponent e
represents q^(e/24).

Truncation semantics: a series carries a truncation order N meaning that
coefficients at lattice exponents e <= N are exact and coefficients beyond N
are unknown (not zero).  Arithmetic propagates N soundly; in particular the
product of series with orders N1, N2 and leading exponents l1, l2 is only
trusted up to min(N1 + l2, N2 + l1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Mapping

LATTICE = 24


def _clean(coeffs: Mapping[int, Fraction], order: int) -> dict[int, Fraction]:
    return {e: Fraction(c) for e, c in coeffs.items() if c != 0 and e <= order}


@dataclass(frozen=True)
class PowerSeries:
    """Sparse Laurent series; treat instances as immutable values."""

    coeffs: dict[int, Fraction] = field(default_factory=dict)
    order: int = 0

    @staticmethod
    def from_terms(coeffs: Mapping[int, Fraction | int], order: int) -> PowerSeries:
        return PowerSeries(_clean({e: Fraction(c) for e, c in coeffs.items()}, order), order)

    @staticmethod
    def zero(order: int) -> PowerSeries:
        return PowerSeries({}, order)

    @staticmethod
    def one(order: int) -> PowerSeries:
        return PowerSeries.monomial(1, 0, order)

    @staticmethod
    def monomial(coeff: Fraction | int, exponent: int, order: int) -> PowerSeries:
        return PowerSeries.from_terms({exponent: Fraction(coeff)}, order)

    def leading_exponent(self) -> int | None:
        """Smallest stored exponent, or None when zero up to the order."""
        return min(self.coeffs) if self.coeffs else None

    def coefficient(self, e: int) -> Fraction:
        if e > self.order:
            raise ValueError(f"coefficient at {e} is beyond truncation order {self.order}")
        return self.coeffs.get(e, Fraction(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def first_nonzero(self) -> int | None:
        return self.leading_exponent()

    def __add__(self, other: PowerSeries) -> PowerSeries:
        return add(self, other)

    def __sub__(self, other: PowerSeries) -> PowerSeries:
        return sub(self, other)

    def __mul__(self, other: PowerSeries) -> PowerSeries:
        return mul(self, other)

    def __neg__(self) -> PowerSeries:
        return PowerSeries({e: -c for e, c in self.coeffs.items()}, self.order)

    def __str__(self) -> str:
        if not self.coeffs:
            return f"0 + O(q^({self.order + 1}/{LATTICE}))"
        parts = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            if e == 0:
                parts.append(f"{c}")
            elif e % LATTICE == 0:
                parts.append(f"{c}*q^{e // LATTICE}")
            else:
                parts.append(f"{c}*q^({e}/{LATTICE})")
        return " + ".join(parts) + f" + O(q^({self.order + 1}/{LATTICE}))"


# ------------------------------------------------------------------ arithmetic

def _bound_exponent(a: PowerSeries) -> int:
    # first possibly nonzero exponent: leading term, else just past the order
    lead = a.leading_exponent()
    return lead if lead is not None else a.order + 1


def add(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    order = min(a.order, b.order)
    out = dict(a.coeffs)
    for e, c in b.coeffs.items():
        out[e] = out.get(e, Fraction(0)) + c
    return PowerSeries(_clean(out, order), order)


def sub(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    return add(a, -b)


def scalar_mul(c: Fraction | int, a: PowerSeries) -> PowerSeries:
    c = Fraction(c)
    if c == 0:
        return PowerSeries.zero(a.order)
    return PowerSeries({e: c * v for e, v in a.coeffs.items()}, a.order)


def add_scalar(a: PowerSeries, c: Fraction | int) -> PowerSeries:
    return add(a, PowerSeries.monomial(Fraction(c), 0, a.order))


def mul(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    la, lb = _bound_exponent(a), _bound_exponent(b)
    order = min(a.order + lb, b.order + la)
    out: dict[int, Fraction] = {}
    b_items = sorted(b.coeffs.items())
    for ea, ca in sorted(a.coeffs.items()):
        for eb, cb in b_items:
            e = ea + eb
            if e > order:
                break
            out[e] = out.get(e, Fraction(0)) + ca * cb
    return PowerSeries(_clean(out, order), order)


def invert(a: PowerSeries) -> PowerSeries:
    """Multiplicative inverse; requires a nonzero series.

    With leading exponent l and order N, the inverse is sound to order N - 2l:
    the coefficient of the inverse at -l + t consumes input coefficients up to
    l + t, so t may run to N - l.
    """
    lead = a.leading_exponent()
    if lead is None:
        raise ValueError("cannot invert a series that is zero up to its truncation order")
    c0 = a.coeffs[lead]
    order = a.order - 2 * lead
    if len(a.coeffs) == 1:
        return PowerSeries.monomial(1 / c0, -lead, order)
    offsets = sorted(e - lead for e in a.coeffs if e != lead)
    step = 0
    for d in offsets:
        step = gcd(step, d)
    inv: dict[int, Fraction] = {0: 1 / c0}
    tmax = a.order - lead
    for t in range(step, tmax + 1, step):
        acc = Fraction(0)
        for d in offsets:
            if d > t:
                break
            prev = inv.get(t - d)
            if prev is not None:
                acc += a.coeffs[lead + d] * prev
        if acc:
            inv[t] = -acc / c0
    out = {t - lead: c for t, c in inv.items() if t - lead <= order}
    return PowerSeries(_clean(out, order), order)


def pow_int(a: PowerSeries, e: int) -> PowerSeries:
    if e == 0:
        return PowerSeries.one(a.order)
    if e < 0:
        return pow_int(invert(a), -e)
    result: PowerSeries | None = None
    base = a
    while e:
        if e & 1:
            result = base if result is None else mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    assert result is not None
    return result


def shift(a: PowerSeries, d: int) -> PowerSeries:
    """Multiply by q^(d/24): every exponent and the order move by d."""
    return PowerSeries({e + d: c for e, c in a.coeffs.items()}, a.order + d)


def scale_argument(a: PowerSeries, k: int) -> PowerSeries:
    """Substitute q -> q^k (k >= 1); exponents and order scale by k."""
    if k < 1:
        raise ValueError("scale_argument requires k >= 1")
    return PowerSeries({e * k: c for e, c in a.coeffs.items()}, a.order * k)


# ------------------------------------------------------------ theta-block series

def _f_plus_sign(n: int) -> int:
    # f(q) = chi(q) f(-q^2) expands over generalized pentagonal exponents with
    # sign (-1)^(n(n-1)/2), period + + - - in n mod 4
    return -1 if (n * (n - 1) // 2) % 2 else 1


def series_f(k: int, sign: str, order: int) -> PowerSeries:
    """Series of f(-q^k) (sign="minus", Euler product (q^k;q^k)_inf with
    coefficients (-1)^n) or f(q^k) (sign="plus", coefficients
    (-1)^(n(n-1)/2)), both supported on exponents 24*k*n(3n-1)/2."""
    if k < 1:
        raise ValueError("series_f requires k >= 1")
    if sign not in ("plus", "minus"):
        raise ValueError(f"unknown sign {sign!r}")
    if order < 0:
        raise ValueError("order must be >= 0")
    coeffs: dict[int, Fraction] = {}
    n = 0
    while True:
        placed = False
        for idx in (n, -n) if n else (0,):
            e = LATTICE * k * (idx * (3 * idx - 1) // 2)
            if e <= order:
                placed = True
                if sign == "minus":
                    coeffs[e] = Fraction(-1 if idx % 2 else 1)
                else:
                    coeffs[e] = Fraction(_f_plus_sign(idx))
        if not placed and n > 0:
            break
        n += 1
    return PowerSeries(coeffs, order)


def series_phi(sign: str, order: int) -> PowerSeries:
    """phi(+-q) = 1 + 2 sum_{n>=1} (+-1)^n q^(n^2)."""
    if sign not in ("plus", "minus"):
        raise ValueError(f"unknown sign {sign!r}")
    if order < 0:
        raise ValueError("order must be >= 0")
    coeffs: dict[int, Fraction] = {0: Fraction(1)}
    n = 1
    while LATTICE * n * n <= order:
        c = 2 if sign == "plus" or n % 2 == 0 else -2
        coeffs[LATTICE * n * n] = Fraction(c)
        n += 1
    return PowerSeries(coeffs, order)


def series_psi(sign: str, order: int) -> PowerSeries:
    """psi(+-q) = sum_{n>=0} (+-1)^(n(n+1)/2) q^(n(n+1)/2)."""
    if sign not in ("plus", "minus"):
        raise ValueError(f"unknown sign {sign!r}")
    if order < 0:
        raise ValueError("order must be >= 0")
    coeffs: dict[int, Fraction] = {}
    n = 0
    while True:
        t = n * (n + 1) // 2
        e = LATTICE * t
        if e > order:
            break
        coeffs[e] = Fraction(-1 if sign == "minus" and t % 2 else 1)
        n += 1
    return PowerSeries(coeffs, order)


# ------------------------------------------------------------------- self-check

@dataclass(frozen=True)
class SeriesCheck:
    ok: bool
    first_failure: int | None

    def __str__(self) -> str:
        if self.ok:
            return "pass"
        return f"fail at lattice exponent {self.first_failure}"


def check_entry24(order: int) -> SeriesCheck:
    """Coefficient-wise check of the two product identities tying f(q) to the
    other blocks: f(q)f(-q^2) = psi(-q)phi(q) and
    f(q)f(-q)f(-q^4) = f(-q^2)^3."""
    if order < 0:
        raise ValueError("order must be >= 0")
    fq = series_f(1, "plus", order)
    d1 = sub(mul(fq, series_f(2, "minus", order)),
             mul(series_psi("minus", order), series_phi("plus", order)))
    d2 = sub(mul(mul(fq, series_f(1, "minus", order)), series_f(4, "minus", order)),
             pow_int(series_f(2, "minus", order), 3))
    failures = [d.first_nonzero() for d in (d1, d2) if d.first_nonzero() is not None]
    if failures:
        return SeriesCheck(False, min(failures))
    return SeriesCheck(True, None)
