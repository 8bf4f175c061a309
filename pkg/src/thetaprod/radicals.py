"""Closed-form radical expressions and the value registry.

The radical grammar covers exactly what nested-surd class-invariant values
need: integers, + - * /, parentheses, sqrt(), and rational literal
exponents.  No variables.  Negative bases under fractional exponents are
domain errors at evaluation time.

The registry is a line-oriented file of closed-form values:

    g 30     = (sqrt(5)+2)^(1/6) * (sqrt(10)+3)^(1/6)  # Berndt, ...
    gg 6 2/3 = 1                                       # Yi, Corollary 2.2.4
    a 2 3    = (sqrt(2)-1) * (sqrt(3)+sqrt(2))^(1/2)   # degree-3 system at m=2
    b 40 3   = ...

'g n' is a single class invariant, 'gg n1 n2' the product of two, 'a m n'
and 'b m n' the theta products.  verify_corollary() recomputes each entry
definitionally and counts agreeing digits.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from mpmath import workdps

from .precision import PrecisionSpec, RealValue, compute_checked, digits_agreed


class RadicalError(ValueError):
    """Malformed radical expression text."""


# ---------------------------------------------------------------------------
# AST: ('int', n) | ('add'|'sub'|'mul'|'div', a, b) | ('neg', a)
#      | ('pow', base, Fraction) | ('sqrt', a)
# ---------------------------------------------------------------------------

class _Scan:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def fail(self, message: str):
        raise RadicalError(f"column {self.pos + 1}: {message}")

    def expect(self, ch: str):
        if self.peek() != ch:
            self.fail(f"expected {ch!r}")
        self.pos += 1

    def read_int(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("expected an integer")
        return int(self.text[start:self.pos])

    def at_word(self, word: str) -> bool:
        self.skip()
        return self.text.startswith(word, self.pos)


def _parse_expr(s: _Scan):
    node = _parse_term(s)
    while s.peek() in ("+", "-"):
        op = s.peek()
        s.pos += 1
        rhs = _parse_term(s)
        node = ("add" if op == "+" else "sub", node, rhs)
    return node


def _parse_term(s: _Scan):
    node = _parse_unary(s)
    while s.peek() in ("*", "/"):
        op = s.peek()
        s.pos += 1
        rhs = _parse_unary(s)
        node = ("mul" if op == "*" else "div", node, rhs)
    return node


def _parse_unary(s: _Scan):
    if s.peek() == "-":
        s.pos += 1
        return ("neg", _parse_unary(s))
    return _parse_power(s)


def _parse_power(s: _Scan):
    base = _parse_atom(s)
    if s.peek() == "^":
        s.pos += 1
        return ("pow", base, _parse_exponent(s))
    return base


def _parse_exponent(s: _Scan) -> Fraction:
    parens = s.peek() == "("
    if parens:
        s.pos += 1
    neg = s.peek() == "-"
    if neg:
        s.pos += 1
    numer = s.read_int()
    denom = 1
    # a fraction bar binds to the exponent only inside parens: x^3/y divides
    if parens and s.peek() == "/":
        s.pos += 1
        denom = s.read_int()
        if denom == 0:
            s.fail("zero denominator in exponent")
    if parens:
        s.expect(")")
    value = Fraction(numer, denom)
    return -value if neg else value


def _parse_atom(s: _Scan):
    if s.at_word("sqrt"):
        s.pos += 4
        s.expect("(")
        inner = _parse_expr(s)
        s.expect(")")
        return ("sqrt", inner)
    ch = s.peek()
    if ch == "(":
        s.pos += 1
        inner = _parse_expr(s)
        s.expect(")")
        return inner
    if ch.isdigit():
        return ("int", s.read_int())
    s.fail("expected a number, sqrt(), or '('")


def parse_radical(text: str):
    s = _Scan(text)
    node = _parse_expr(s)
    s.skip()
    if s.pos != len(s.text):
        s.fail("unexpected trailing input")
    return node


def render_radical(node) -> str:
    kind = node[0]
    if kind == "int":
        return str(node[1])
    if kind == "neg":
        return f"-{render_radical(node[1])}"
    if kind == "sqrt":
        return f"sqrt({render_radical(node[1])})"
    if kind == "pow":
        e = node[2]
        etext = str(e.numerator) if e.denominator == 1 else f"{e.numerator}/{e.denominator}"
        return f"{render_radical(node[1])}^({etext})"
    op = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[kind]
    return f"({render_radical(node[1])} {op} {render_radical(node[2])})"


def _eval_node(node) -> RealValue:
    kind = node[0]
    if kind == "int":
        return RealValue.exact(node[1])
    if kind == "neg":
        return -_eval_node(node[1])
    if kind == "add":
        return _eval_node(node[1]) + _eval_node(node[2])
    if kind == "sub":
        return _eval_node(node[1]) - _eval_node(node[2])
    if kind == "mul":
        return _eval_node(node[1]) * _eval_node(node[2])
    if kind == "div":
        return _eval_node(node[1]) / _eval_node(node[2])
    if kind == "sqrt":
        base = _eval_node(node[1])
        if base.magnitude < 0:
            raise ValueError("square root of a negative value")
        return base.sqrt()
    if kind == "pow":
        base = _eval_node(node[1])
        e = node[2]
        if e.denominator != 1 and base.magnitude <= 0:
            raise ValueError("fractional power of a nonpositive value")
        return base.powf(e)
    raise AssertionError(node)


def eval_radical(node, prec: PrecisionSpec) -> RealValue:
    """Evaluate a parsed radical expression at the requested precision."""
    return compute_checked(prec, lambda: _eval_node(node))


# ---------------------------------------------------------------------------
# the registry
# ---------------------------------------------------------------------------

KINDS = {"g": 1, "gg": 2, "a": 2, "b": 2}


@dataclass(frozen=True)
class CorollaryRecord:
    kind: str                      # g | gg | a | b
    params: tuple[Fraction, ...]
    expr_text: str
    expr: tuple
    source: str

    @property
    def label(self) -> str:
        inner = ",".join(str(p) for p in self.params)
        return f"{self.kind}({inner})"


@dataclass(frozen=True)
class CorollaryCheck:
    record: CorollaryRecord
    digits: int
    verdict: str                   # "pass" or "fail"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def parse_registry(text: str) -> list[CorollaryRecord]:
    records: list[CorollaryRecord] = []
    seen: set[tuple] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        body, _, comment = line.partition("#")
        source = comment.strip()
        if not source:
            raise RadicalError(f"line {lineno}: entry is missing a '# <source>' tag")
        head, eq, expr_text = body.partition("=")
        if not eq:
            raise RadicalError(f"line {lineno}: expected '='")
        fields = head.split()
        if not fields or fields[0] not in KINDS:
            raise RadicalError(f"line {lineno}: unknown entry kind "
                               f"{fields[0] if fields else '<none>'!r}")
        kind = fields[0]
        want = KINDS[kind]
        if len(fields) != 1 + want:
            raise RadicalError(
                f"line {lineno}: {kind!r} takes {want} parameter(s), "
                f"got {len(fields) - 1}")
        try:
            params = tuple(Fraction(f) for f in fields[1:])
        except (ValueError, ZeroDivisionError):
            raise RadicalError(f"line {lineno}: malformed rational parameter")
        if any(p <= 0 for p in params):
            raise RadicalError(f"line {lineno}: parameters must be positive")
        key = (kind, params)
        if key in seen:
            raise RadicalError(f"line {lineno}: duplicate entry for "
                               f"{kind}({','.join(map(str, params))})")
        seen.add(key)
        expr_text = expr_text.strip()
        try:
            expr = parse_radical(expr_text)
        except RadicalError as exc:
            raise RadicalError(f"line {lineno}: {exc}")
        records.append(CorollaryRecord(kind, params, expr_text, expr, source))
    return records


def registry_find(records, kind: str, *params) -> CorollaryRecord | None:
    """Lookup by kind and parameters; a miss returns None."""
    want = tuple(Fraction(p) for p in params)
    for rec in records:
        if rec.kind == kind and rec.params == want:
            return rec
    return None


def load_builtin_registry() -> list[CorollaryRecord]:
    text = resources.files("thetaprod").joinpath("data/registry.txt").read_text()
    return parse_registry(text)


def definitional_value(rec: CorollaryRecord, prec: PrecisionSpec) -> RealValue:
    """Recompute the registry entry from its theta-block definition."""
    if rec.kind == "a":
        from .products import a_numeric
        return a_numeric(rec.params[0], rec.params[1], prec).value
    if rec.kind == "b":
        from .products import b_numeric
        return b_numeric(rec.params[0], rec.params[1], prec).value
    from .invariants import g_numeric
    if rec.kind == "g":
        return g_numeric(rec.params[0], prec).value
    first = g_numeric(rec.params[0], prec).value
    second = g_numeric(rec.params[1], prec).value
    with workdps(prec.working_digits):
        return first * second


def verify_corollary(rec: CorollaryRecord, prec: PrecisionSpec) -> CorollaryCheck:
    """Compare the closed form against the definitional evaluation."""
    closed = eval_radical(rec.expr, prec)
    definitional = definitional_value(rec, prec)
    with workdps(prec.working_digits):
        digits = digits_agreed(closed, definitional)
    verdict = "pass" if digits >= prec.target_digits else "fail"
    return CorollaryCheck(rec, digits, verdict)
