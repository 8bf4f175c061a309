"""Recovering theta products from class invariants.

For each family (indexed by an odd degree 3, 5, 7, or 13) the ratio and the
product of the pair a(m, degree), b(4m, degree) satisfy two quadratics whose
coefficients are polynomials in one invariant-built quantity lambda:

    degree 3:   lambda = (sqrt(2) g(3m) g(m/3))^3
    degree 5:   lambda = (g(5m) / g(m/5))^3
    degree 7:   lambda = (g(7m) / g(m/7))^2
    degree 13:  lambda =  g(13m) / g(m/13)

lambda_value builds lambda from the cheapest available source (registry
closed forms, one quad4_36 doubling step, or direct numeric invariants),
solve_pair solves the quadratics with bootstrap-guided branch selection,
and reproduce_corollary closes the loop against the registry closed form
and the definitional theta-block evaluation.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, workdps

from .invariants import RootSelectionError, g_numeric, solve_companion
from .precision import PrecisionError, PrecisionSpec, RealValue, digits_agreed
from .products import a_numeric, b_numeric
from .radicals import (
    CorollaryRecord,
    definitional_value,
    eval_radical,
    load_builtin_registry,
    registry_find,
)
from .verify import Residual, _normalized_residual, default_tolerance

FAMILIES = {"n3": 3, "n5": 5, "n7": 7, "n13": 13}


def family_for_degree(degree) -> str:
    for name, d in FAMILIES.items():
        if d == degree:
            return name
    raise ValueError(f"no family of degree {degree}; known degrees are 3, 5, 7, 13")


@dataclass(frozen=True)
class LambdaValue:
    family: str
    m: Fraction
    value: RealValue
    construction: str      # how the invariant legs were obtained


@dataclass(frozen=True)
class SolvedPair:
    family: str
    m: Fraction
    a_value: RealValue     # a(m, degree)
    b_value: RealValue     # b(4m, degree)
    ratio: RealValue       # a/b
    product: RealValue     # a*b
    residuals: tuple[Residual, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.residuals)


# ---------------------------------------------------------------------------
# lambda construction
# ---------------------------------------------------------------------------

def _closed(rec: CorollaryRecord, prec: PrecisionSpec) -> RealValue:
    return eval_radical(rec.expr, prec)

def _gg_record(recs, first, second):
    return (registry_find(recs, "gg", first, second)
            or registry_find(recs, "gg", second, first))


def _registry_product(recs, m: Fraction, prec: PrecisionSpec):
    """g(3m) g(m/3) from closed forms only; None when not tabulated."""
    hi, lo = 3 * m, m / 3
    rec = _gg_record(recs, hi, lo)
    if rec is not None:
        return _closed(rec, prec), f"registry product {rec.label}"
    single_hi = registry_find(recs, "g", hi)
    single_lo = registry_find(recs, "g", lo)
    if single_hi is not None and single_lo is not None:
        value = _closed(single_hi, prec) * _closed(single_lo, prec)
        return value, f"registry invariants {single_hi.label} * {single_lo.label}"
    return None


def _product_leg(recs, m: Fraction, prec: PrecisionSpec):
    """g(3m) g(m/3): registry, one quad4_36 doubling step, or numeric."""
    hit = _registry_product(recs, m, prec)
    if hit is not None:
        return hit
    sub = _registry_product(recs, m / 4, prec)
    if sub is not None:
        below, how = sub
        value = solve_companion("quad4_36", below, m / 12, prec)
        return value, f"quad4_36 step on {how}"
    hi, lo = 3 * m, m / 3
    value = g_numeric(hi, prec).value * g_numeric(lo, prec).value
    return value, f"numeric invariants g({hi}) * g({lo})"


def _ratio_leg(recs, degree: int, m: Fraction, prec: PrecisionSpec):
    """g(degree*m) / g(m/degree): registry closed forms or numeric."""
    hi, lo = degree * m, m / degree
    single_hi = registry_find(recs, "g", hi)
    single_lo = registry_find(recs, "g", lo)
    if single_hi is not None and single_lo is not None:
        value = _closed(single_hi, prec) / _closed(single_lo, prec)
        return value, f"registry invariants {single_hi.label} / {single_lo.label}"
    value = g_numeric(hi, prec).value / g_numeric(lo, prec).value
    return value, f"numeric invariants g({hi}) / g({lo})"


_LAMBDA_POWER = {3: 3, 5: 3, 7: 2, 13: 1}


def lambda_value(family: str, m, prec: PrecisionSpec,
                 records=None) -> LambdaValue:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of "
                         f"{tuple(FAMILIES)}")
    m = Fraction(m)
    if m <= 0:
        raise ValueError("m must be positive")
    degree = FAMILIES[family]
    recs = load_builtin_registry() if records is None else records
    inner = PrecisionSpec.of(prec.target_digits + 12, prec.guard_digits)
    with workdps(inner.working_digits):
        if family == "n3":
            leg, how = _product_leg(recs, m, inner)
            value = (RealValue.exact(2).sqrt() * leg).powi(3)
        else:
            leg, how = _ratio_leg(recs, degree, m, inner)
            value = leg.powi(_LAMBDA_POWER[degree])
    if not value.meets(prec):
        raise PrecisionError(f"lambda for {family} at m={m} missed "
                             f"{prec.target_digits} digits")
    return LambdaValue(family, m, value, how)


# ---------------------------------------------------------------------------
# quadratic solving
# ---------------------------------------------------------------------------

def _positive_from_diff(d: RealValue) -> RealValue:
    # x - 1/x = d  with  x > 0
    two = RealValue.exact(2)
    return (d + (d * d + RealValue.exact(4)).sqrt()) / two


def _positive_from_neg_diff(d: RealValue) -> RealValue:
    # 1/y - y = d  with  y > 0
    two = RealValue.exact(2)
    return ((d * d + RealValue.exact(4)).sqrt() - d) / two


def _solve_quadratic(qa: RealValue, qb: RealValue, qc: RealValue,
                     boot, what: str) -> RealValue:
    """Root of  qa z^2 = qb z + qc  nearest the bootstrap value.

    When the discriminant cannot be resolved away from zero the quadratic
    has (to working accuracy) a double root; both true roots then lie in
    an interval around qb/(2 qa) of half-width sqrt(|disc|), which is
    returned as an honest error bound.  A structurally zero discriminant
    makes the root error scale like the square root of the coefficient
    error, so callers must widen lambda's precision when this bound is
    too loose, not just re-run at higher working precision.
    """
    disc = qb * qb + RealValue.exact(4) * qa * qc
    two_a = RealValue.exact(2) * qa
    tol = mp.mpf("1e-6") * max(1, abs(boot))
    if abs(disc.magnitude) <= 2 * disc.error_bound:
        center = qb / two_a
        halfwidth = mp.sqrt(abs(disc.magnitude) + disc.error_bound) / abs(two_a.magnitude)
        root = RealValue(center.magnitude, center.error_bound + halfwidth)
        if abs(root.magnitude - boot) > tol:
            raise RootSelectionError(
                f"{what}: double root is not near the bootstrap {boot}",
                [root.magnitude])
        return root
    if disc.magnitude < 0:
        raise RootSelectionError(
            f"{what}: discriminant resolved negative ({disc.magnitude})")
    root = disc.sqrt()
    cands = sorted(((qb + root) / two_a, (qb - root) / two_a),
                   key=lambda c: abs(c.magnitude - boot))
    if abs(cands[0].magnitude - boot) > tol:
        raise RootSelectionError(
            f"{what}: neither quadratic root is near the bootstrap {boot}",
            [c.magnitude for c in cands])
    if abs(cands[1].magnitude - boot) <= tol:
        raise RootSelectionError(
            f"{what}: both quadratic roots sit at the bootstrap {boot}",
            [c.magnitude for c in cands])
    return cands[0]


def _aux_coefficients(family: str, lam: RealValue):
    """Coefficient triples (qa, qb, qc) of the two family quadratics, or the
    directly known value when the family fixes the quantity outright."""
    one = RealValue.exact(1)

    if family == "n3":
        # ratio side is linear: a/b - b/a = lambda itself
        nine_lam = RealValue.exact(9) * lam
        prod_diff = (lam.powi(4) + RealValue.exact(11) * lam.powi(2)
                     - RealValue.exact(8)) / nine_lam
        return ("direct", lam), ("direct", prod_diff)

    ell = lam - one / lam
    L = {k: ell.powi(k) for k in range(1, 13)}
    c = RealValue.exact

    if family == "n5":
        ratio_eq = (one, L[1], c(-4))
        prod_eq = (c(25), c(5) * (L[3] - c(6) * L[1]),
                   L[4] - c(37) * L[2] - c(64))
    elif family == "n7":
        ratio_eq = (one, L[3] - c(5) * L[1], c(-8) * L[2])
        prod_eq = (c(2401),
                   c(49) * (L[9] - c(7) * L[7] - c(37) * L[5]
                            + c(77) * L[3] + c(294) * L[1]),
                   L[12] - c(20) * L[10] + c(86) * L[8] - c(2065) * L[6]
                   - c(16317) * L[4] - c(22981) * L[2])
    elif family == "n13":
        ratio_eq = (one, L[3] - L[1], c(-4) * L[2] - c(4))
        prod_eq = (c(169),
                   c(13) * (L[9] + L[7] - c(21) * L[5] - c(35) * L[3]
                            + c(30) * L[1]),
                   L[12] - c(4) * L[10] - c(26) * L[8] - c(89) * L[6]
                   - c(829) * L[4] - c(1821) * L[2] - c(576))
    else:
        raise AssertionError(family)
    return ("quadratic",) + ratio_eq, ("quadratic",) + prod_eq


# ratio-side auxiliaries use sqrt(a/b) in families 5 and 13, a/b elsewhere
_SQRT_FAMILIES = ("n5", "n13")


def solve_pair(family: str, lam: LambdaValue, prec: PrecisionSpec,
               records=None) -> SolvedPair:
    if family != lam.family:
        raise ValueError(f"lambda was built for family {lam.family!r}")
    degree = FAMILIES[family]
    m = lam.m

    boot_spec = PrecisionSpec.of(20)
    a0 = a_numeric(m, degree, boot_spec).value.magnitude
    b0 = b_numeric(4 * m, degree, boot_spec).value.magnitude

    try:
        return _solve_pair_at(family, lam, prec, a0, b0,
                              prec.target_digits + 12)
    except PrecisionError:
        # a degenerate quadratic halves the usable digits; rebuild lambda
        # twice as precise so the interval double root still meets spec
        boosted = lambda_value(family, m,
                               PrecisionSpec.of(2 * prec.target_digits + 30,
                                                prec.guard_digits),
                               records=records)
        boosted = LambdaValue(family, m, boosted.value, lam.construction)
        return _solve_pair_at(family, boosted, prec, a0, b0,
                              2 * prec.target_digits + 30)


def _solve_pair_at(family: str, lam: LambdaValue, prec: PrecisionSpec,
                   a0, b0, inner_target: int) -> SolvedPair:
    inner = PrecisionSpec.of(inner_target, prec.guard_digits)
    with workdps(inner.working_digits):
        x0 = mp.mpf(a0) / mp.mpf(b0)
        y0 = mp.mpf(a0) * mp.mpf(b0)
        ratio_spec, prod_spec = _aux_coefficients(family, lam.value)

        if ratio_spec[0] == "direct":
            ratio_diff = ratio_spec[1]
        else:
            boot = (mp.sqrt(x0) - 1 / mp.sqrt(x0)
                    if family in _SQRT_FAMILIES else x0 - 1 / x0)
            ratio_diff = _solve_quadratic(*ratio_spec[1:], boot,
                                          f"{family} ratio quadratic")
        if prod_spec[0] == "direct":
            prod_diff = prod_spec[1]
        else:
            boot = (1 / mp.sqrt(y0) - mp.sqrt(y0)
                    if family in _SQRT_FAMILIES else 1 / y0 - y0)
            prod_diff = _solve_quadratic(*prod_spec[1:], boot,
                                         f"{family} product quadratic")

        half_ratio = _positive_from_diff(ratio_diff)
        half_prod = _positive_from_neg_diff(prod_diff)
        if family in _SQRT_FAMILIES:
            ratio = half_ratio.powi(2)
            product = half_prod.powi(2)
        else:
            ratio = half_ratio
            product = half_prod

        a_val = (ratio * product).sqrt()
        b_val = (product / ratio).sqrt()
        if digits_agreed(a_val.magnitude, mp.mpf(a0)) < 15:
            raise RootSelectionError(
                f"{family} solution strayed from the bootstrap: "
                f"{a_val.magnitude} vs {a0}", [a_val.magnitude, mp.mpf(a0)])

        tol = default_tolerance(prec)
        residuals = tuple(
            Residual.of(_normalized_residual(terms), tol)
            for terms in _back_substitution(family, lam.value, ratio, product))

    for v in (a_val, b_val):
        if not v.meets(prec):
            raise PrecisionError(f"{family} solve at m={lam.m} missed "
                                 f"{prec.target_digits} digits")
    return SolvedPair(family, lam.m, a_val, b_val, ratio, product, residuals)


def _back_substitution(family: str, lam: RealValue,
                       ratio: RealValue, product: RealValue):
    """Cleared-polynomial terms of both family relations, re-evaluated from
    the recovered ratio and product; each list should sum to zero."""
    one = RealValue.exact(1)
    c = RealValue.exact
    x, y = ratio, product

    if family == "n3":
        t1 = [x * x, -(lam * x), -one]
        coeff = lam.powi(4) + c(11) * lam.powi(2) - c(8)
        nine_lam = c(9) * lam
        t2 = [nine_lam, -(nine_lam * y * y), -(coeff * y)]
        return [t1, t2]

    ell = lam - one / lam
    L = {k: ell.powi(k) for k in range(1, 13)}
    rx = x.sqrt()
    s = rx - one / rx
    ry = y.sqrt()
    t = one / ry - ry
    r = x - one / x
    p = one / y - y

    if family == "n5":
        t1 = [s * s, -(L[1] * s), c(4)]
        t2 = [c(25) * t * t, -(c(5) * (L[3] - c(6) * L[1]) * t),
              -(L[4] - c(37) * L[2] - c(64))]
    elif family == "n7":
        t1 = [r * r, -((L[3] - c(5) * L[1]) * r), c(8) * L[2]]
        t2 = [c(2401) * p * p,
              -(c(49) * (L[9] - c(7) * L[7] - c(37) * L[5]
                         + c(77) * L[3] + c(294) * L[1]) * p),
              -(L[12] - c(20) * L[10] + c(86) * L[8] - c(2065) * L[6]
                - c(16317) * L[4] - c(22981) * L[2])]
    elif family == "n13":
        t1 = [s * s, -((L[3] - L[1]) * s), c(4) * L[2] + c(4)]
        t2 = [c(169) * t * t,
              -(c(13) * (L[9] + L[7] - c(21) * L[5] - c(35) * L[3]
                         + c(30) * L[1]) * t),
              -(L[12] - c(4) * L[10] - c(26) * L[8] - c(89) * L[6]
                - c(829) * L[4] - c(1821) * L[2] - c(576))]
    else:
        raise AssertionError(family)
    return [t1, t2]


# ---------------------------------------------------------------------------
# closing the loop against the registry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReproduceReport:
    id: str
    record: CorollaryRecord
    lam: LambdaValue
    pair: SolvedPair
    closed: RealValue         # registry radical
    solved: RealValue         # pipeline output
    definitional: RealValue   # theta-block evaluation
    agreement: dict           # pairwise agreeing digits
    verdict: str

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def reproduce_ids(records=None) -> list[str]:
    recs = load_builtin_registry() if records is None else records
    out = []
    for rec in recs:
        if rec.kind in ("a", "b"):
            out.append(f"{rec.kind}_{rec.params[0]}_{rec.params[1]}")
    return out


def _parse_product_id(pid: str, recs) -> CorollaryRecord:
    parts = pid.split("_")
    known = reproduce_ids(recs)
    if len(parts) != 3 or parts[0] not in ("a", "b"):
        raise KeyError(f"unknown id {pid!r}; known ids: {', '.join(known)}")
    try:
        m, n = Fraction(parts[1]), Fraction(parts[2])
    except (ValueError, ZeroDivisionError):
        raise KeyError(f"unknown id {pid!r}; known ids: {', '.join(known)}")
    rec = registry_find(recs, parts[0], m, n)
    if rec is None:
        raise KeyError(f"unknown id {pid!r}; known ids: {', '.join(known)}")
    return rec


def reproduce_corollary(pid: str, prec: PrecisionSpec,
                        records=None) -> ReproduceReport:
    """Three-way check of one registry product entry: closed form vs the
    quadratic pipeline vs the definitional theta-block value."""
    recs = load_builtin_registry() if records is None else records
    rec = _parse_product_id(pid, recs)
    n = rec.params[1]
    family = family_for_degree(n)
    m = rec.params[0] / 4 if rec.kind == "b" else rec.params[0]

    lam = lambda_value(family, m, prec, records=recs)
    pair = solve_pair(family, lam, prec, records=recs)
    solved = pair.a_value if rec.kind == "a" else pair.b_value
    closed = eval_radical(rec.expr, prec)
    definitional = definitional_value(rec, prec)

    with workdps(prec.working_digits):
        agreement = {
            "closed_vs_solved": digits_agreed(closed.magnitude, solved.magnitude),
            "solved_vs_definitional": digits_agreed(solved.magnitude,
                                                    definitional.magnitude),
            "closed_vs_definitional": digits_agreed(closed.magnitude,
                                                    definitional.magnitude),
        }
    ok = (min(agreement.values()) >= prec.target_digits
          and all(r.passed for r in pair.residuals))
    return ReproduceReport(pid, rec, lam, pair, closed, solved, definitional,
                           agreement, "pass" if ok else "fail")
