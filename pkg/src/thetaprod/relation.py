"""Polynomial relations between two eta quotients P and Q.

A relation is written as a rational expression in P and Q with integer
constants.  Parsing produces a numerator/denominator pair of bivariate
polynomials; clearing the denominator and stripping the common monomial and
integer content leaves one primitive integer polynomial whose vanishing is
the assertion to verify.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd


class RelationError(ValueError):
    """Malformed relation text; carries 1-based line and column."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# bivariate polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Poly2:
    """Polynomial in P and Q: {(i, j): coefficient} with no zero entries."""
    terms: dict[tuple[int, int], Fraction] = field(default_factory=dict)

    @staticmethod
    def const(c) -> Poly2:
        c = Fraction(c)
        return Poly2({(0, 0): c} if c else {})

    @staticmethod
    def var(which: str) -> Poly2:
        return Poly2({(1, 0) if which == "P" else (0, 1): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: Poly2) -> Poly2:
        out = dict(self.terms)
        for key, c in other.terms.items():
            s = out.get(key, Fraction(0)) + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return Poly2(out)

    def __neg__(self) -> Poly2:
        return Poly2({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: Poly2) -> Poly2:
        return self + (-other)

    def __mul__(self, other: Poly2) -> Poly2:
        out: dict[tuple[int, int], Fraction] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                key = (i1 + i2, j1 + j2)
                s = out.get(key, Fraction(0)) + c1 * c2
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return Poly2(out)

    def pow(self, e: int) -> Poly2:
        if e < 0:
            raise ValueError("Poly2.pow requires a nonnegative exponent")
        out = Poly2.const(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly2) and self.terms == other.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, j) in sorted(self.terms, reverse=True):
            c = self.terms[(i, j)]
            piece = []
            if c != 1 or (i == 0 and j == 0):
                piece.append(str(c))
            if i:
                piece.append("P" if i == 1 else f"P^{i}")
            if j:
                piece.append("Q" if j == 1 else f"Q^{j}")
            parts.append("*".join(piece))
        return " + ".join(parts)


@dataclass(frozen=True)
class RationalPair:
    num: Poly2
    den: Poly2


# ---------------------------------------------------------------------------
# tokenizer / parser
# ---------------------------------------------------------------------------

_SYMBOLS = "+-*/^()"


def _tokenize(text: str, line0: int = 1, col0: int = 1):
    """Yield (kind, value, line, col); kind in {'int','var','sym','end'}."""
    line, col = line0, col0
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            yield "int", int(text[i:j]), line, col
            col += j - i
            i = j
            continue
        if ch in ("P", "Q"):
            nxt = text[i + 1] if i + 1 < len(text) else ""
            if nxt.isalnum() or nxt == "_":
                raise RelationError(f"unexpected name starting at {ch!r}", line, col)
            yield "var", ch, line, col
            col += 1
            i += 1
            continue
        if ch in _SYMBOLS:
            yield "sym", ch, line, col
            col += 1
            i += 1
            continue
        raise RelationError(f"unexpected character {ch!r}", line, col)
    yield "end", None, line, col


class _Parser:
    def __init__(self, text: str, line0: int = 1, col0: int = 1):
        self.tokens = list(_tokenize(text, line0, col0))
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str):
        _, _, line, col = self.peek()
        raise RelationError(message, line, col)

    # expr := term { (+|-) term }
    def expr(self) -> RationalPair:
        left = self.term()
        while self.peek()[:2] in (("sym", "+"), ("sym", "-")):
            op = self.take()[1]
            right = self.term()
            num = left.num * right.den
            num = num + right.num * left.den if op == "+" else num - right.num * left.den
            left = RationalPair(num, left.den * right.den)
        return left

    # term := unary { (*|/) unary }
    def term(self) -> RationalPair:
        left = self.unary()
        while self.peek()[:2] in (("sym", "*"), ("sym", "/")):
            op = self.take()[1]
            right = self.unary()
            if op == "*":
                left = RationalPair(left.num * right.num, left.den * right.den)
            else:
                if right.num.is_zero():
                    self.fail("division by zero expression")
                left = RationalPair(left.num * right.den, left.den * right.num)
        return left

    # unary := '-' unary | power
    def unary(self) -> RationalPair:
        if self.peek()[:2] == ("sym", "-"):
            self.take()
            inner = self.unary()
            return RationalPair(-inner.num, inner.den)
        return self.power()

    # power := atom [ '^' exponent ]
    def power(self) -> RationalPair:
        base = self.atom()
        if self.peek()[:2] == ("sym", "^"):
            self.take()
            e = self.exponent()
            if e >= 0:
                return RationalPair(base.num.pow(e), base.den.pow(e))
            if base.num.is_zero():
                self.fail("zero raised to a negative power")
            return RationalPair(base.den.pow(-e), base.num.pow(-e))
        return base

    def exponent(self) -> int:
        neg = False
        parens = False
        if self.peek()[:2] == ("sym", "("):
            self.take()
            parens = True
        if self.peek()[:2] == ("sym", "-"):
            self.take()
            neg = True
        kind, value, _, _ = self.peek()
        if kind != "int":
            self.fail("expected an integer exponent")
        self.take()
        if parens:
            if self.peek()[:2] != ("sym", ")"):
                self.fail("expected ')' closing the exponent")
            self.take()
        return -value if neg else value

    # atom := INT | P | Q | '(' expr ')'
    def atom(self) -> RationalPair:
        kind, value, _, _ = self.peek()
        if kind == "int":
            self.take()
            return RationalPair(Poly2.const(value), Poly2.const(1))
        if kind == "var":
            self.take()
            return RationalPair(Poly2.var(value), Poly2.const(1))
        if (kind, value) == ("sym", "("):
            self.take()
            inner = self.expr()
            if self.peek()[:2] != ("sym", ")"):
                self.fail("expected ')'")
            self.take()
            return inner
        self.fail("expected a number, P, Q, or '('")


def parse_relation_pair(text: str, line0: int = 1, col0: int = 1) -> RationalPair:
    parser = _Parser(text, line0, col0)
    pair = parser.expr()
    if parser.peek()[0] != "end":
        parser.fail("unexpected trailing input")
    return pair


def clear_relation(pair: RationalPair, line0: int = 1, col0: int = 1) -> Poly2:
    """Reduce num/den = 0 to one primitive integer polynomial.

    Rejects relations that clear to nothing (identically zero) or to a single
    monomial, since a lone monomial in positive quantities cannot vanish.
    """
    if pair.den.is_zero():
        raise RelationError("relation denominator is the zero polynomial", line0, col0)
    num = pair.num
    if num.is_zero():
        raise RelationError("relation is identically zero, nothing to verify", line0, col0)
    min_i = min(i for i, _ in num.terms)
    min_j = min(j for _, j in num.terms)
    shifted = {(i - min_i, j - min_j): c for (i, j), c in num.terms.items()}
    denom_lcm = 1
    for c in shifted.values():
        denom_lcm = denom_lcm * c.denominator // gcd(denom_lcm, c.denominator)
    ints = {k: c * denom_lcm for k, c in shifted.items()}
    content = 0
    for c in ints.values():
        content = gcd(content, abs(c.numerator))
    cleared = Poly2({k: Fraction(c.numerator // content) for k, c in ints.items()})
    if len(cleared.terms) < 2:
        raise RelationError(
            "relation reduces to a single monomial and cannot define an equation",
            line0, col0)
    return cleared


def parse_relation(text: str, line0: int = 1, col0: int = 1) -> Poly2:
    """Parse relation text and return the cleared primitive polynomial."""
    return clear_relation(parse_relation_pair(text, line0, col0), line0, col0)
