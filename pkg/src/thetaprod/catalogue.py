"""The identity catalogue: a small text format describing pairs of eta
quotients P, Q and the polynomial relation connecting them.

File format, one record per identity:

    identity dup3 {
      P = q^(-1/6) * f(1)^2 * f(3)^-2 ;
      Q = q^(-1/3) * f(2)^2 * f(6)^-2 ;
      relation: P*Q + 9/(P*Q) - ((P/Q)^3 + (Q/P)^3) ;
      source: "Berndt, Ramanujan's Notebooks IV, Entry 51, p. 204" ;
    }

f(k) stands for the Euler product f(-q^k), fp(k) for f(q^k).  '#' starts a
comment outside of quoted strings and relation bodies.  Records parse into
IdentityRecord values carrying both the raw relation text and its cleared
polynomial form.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .quotient import EtaFactor, EtaQuotient
from .relation import Poly2, RelationError, parse_relation


class CatalogueError(ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        if line is not None:
            message = f"line {line}, column {col}: {message}"
        super().__init__(message)
        self.line = line
        self.col = col


@dataclass(frozen=True)
class IdentityRecord:
    id: str
    p_expr: EtaQuotient
    q_expr: EtaQuotient
    relation_text: str
    relation_poly: Poly2
    source: str

    def natural_nome_index(self) -> int:
        return max(self.p_expr.natural_nome_index(),
                   self.q_expr.natural_nome_index())

    def render(self) -> str:
        return (f"identity {self.id} {{\n"
                f"  P = {self.p_expr.render()} ;\n"
                f"  Q = {self.q_expr.render()} ;\n"
                f"  relation: {self.relation_text} ;\n"
                f"  source: \"{self.source}\" ;\n"
                f"}}")


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

class _Cursor:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def _advance(self, n: int = 1):
        for _ in range(n):
            if self.pos < len(self.text):
                if self.text[self.pos] == "\n":
                    self.line += 1
                    self.col = 1
                else:
                    self.col += 1
                self.pos += 1

    def skip(self):
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch.isspace():
                self._advance()
            elif ch == "#":
                while self.pos < len(self.text) and self.text[self.pos] != "\n":
                    self._advance()
            else:
                break

    def at_end(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def fail(self, message: str):
        raise CatalogueError(message, self.line, self.col)

    def expect(self, literal: str):
        self.skip()
        if not self.text.startswith(literal, self.pos):
            self.fail(f"expected {literal!r}")
        self._advance(len(literal))

    def read_ident(self) -> str:
        self.skip()
        start = self.pos
        if not (self.peek().isalpha() or self.peek() == "_"):
            self.fail("expected an identifier")
        while self.peek().isalnum() or self.peek() == "_":
            self._advance()
        return self.text[start:self.pos]

    def read_int(self) -> int:
        self.skip()
        start = self.pos
        if self.peek() == "-":
            self._advance()
        if not self.peek().isdigit():
            self.fail("expected an integer")
        while self.peek().isdigit():
            self._advance()
        return int(self.text[start:self.pos])

    def read_string(self) -> str:
        self.expect('"')
        start = self.pos
        while self.peek() not in ('"', ""):
            if self.peek() == "\n":
                self.fail("unterminated string")
            self._advance()
        if self.peek() != '"':
            self.fail("unterminated string")
        value = self.text[start:self.pos]
        self._advance()
        return value

    def read_until_semicolon(self) -> tuple[str, int, int]:
        """Raw text up to the next ';' (consumed), with its start position."""
        self.skip()
        line0, col0 = self.line, self.col
        start = self.pos
        while self.peek() not in (";", ""):
            self._advance()
        if self.peek() != ";":
            self.fail("expected ';'")
        raw = self.text[start:self.pos]
        self._advance()
        return raw.strip(), line0, col0


def _parse_quotient(cur: _Cursor) -> EtaQuotient:
    q_power = Fraction(0)
    saw_q = False
    factors: list[EtaFactor] = []
    while True:
        cur.skip()
        line0, col0 = cur.line, cur.col
        name = cur.read_ident()
        if name == "q":
            if saw_q:
                cur.fail("more than one q-power in a quotient")
            saw_q = True
            cur.expect("^")
            cur.expect("(")
            numer = cur.read_int()
            denom = 1
            cur.skip()
            if cur.peek() == "/":
                cur.expect("/")
                denom = cur.read_int()
            cur.expect(")")
            try:
                q_power = Fraction(numer, denom)
            except ZeroDivisionError:
                raise CatalogueError("zero denominator in q-power", line0, col0)
        elif name in ("f", "fp"):
            cur.expect("(")
            k = cur.read_int()
            cur.expect(")")
            exponent = 1
            cur.skip()
            if cur.peek() == "^":
                cur.expect("^")
                cur.skip()
                if cur.peek() == "(":
                    cur.expect("(")
                    exponent = cur.read_int()
                    cur.expect(")")
                else:
                    exponent = cur.read_int()
            sign = "minus" if name == "f" else "plus"
            try:
                factors.append(EtaFactor(k, sign, exponent))
            except ValueError as exc:
                raise CatalogueError(str(exc), line0, col0)
        else:
            cur.fail(f"expected q, f, or fp, found {name!r}")
        cur.skip()
        if cur.peek() == "*":
            cur.expect("*")
            continue
        break
    cur.expect(";")
    try:
        return EtaQuotient(q_power, tuple(factors))
    except ValueError as exc:
        raise CatalogueError(str(exc), cur.line, cur.col)


def parse_catalogue(text: str) -> list[IdentityRecord]:
    cur = _Cursor(text)
    records: list[IdentityRecord] = []
    seen: dict[str, int] = {}
    while not cur.at_end():
        cur.skip()
        head_line = cur.line
        word = cur.read_ident()
        if word != "identity":
            raise CatalogueError(f"expected 'identity', found {word!r}",
                                 head_line, cur.col)
        rid = cur.read_ident()
        if rid in seen:
            raise CatalogueError(
                f"duplicate identity id {rid!r} (first defined on line {seen[rid]})",
                head_line, 1)
        seen[rid] = head_line
        cur.expect("{")

        cur.skip()
        cur.expect("P")
        cur.expect("=")
        p_expr = _parse_quotient(cur)

        cur.skip()
        cur.expect("Q")
        cur.expect("=")
        q_expr = _parse_quotient(cur)

        cur.expect("relation")
        cur.expect(":")
        relation_text, rline, rcol = cur.read_until_semicolon()
        if not relation_text:
            raise CatalogueError("empty relation", rline, rcol)
        try:
            poly = parse_relation(relation_text, rline, rcol)
        except RelationError as exc:
            raise CatalogueError(f"in identity {rid!r}: {exc}")

        cur.expect("source")
        cur.expect(":")
        source = cur.read_string()
        if not source.strip():
            raise CatalogueError(f"empty source tag in identity {rid!r}")
        cur.skip()
        if cur.peek() == ";":
            cur.expect(";")
        cur.expect("}")

        records.append(IdentityRecord(rid, p_expr, q_expr, relation_text,
                                      poly, source))
    return records


def render_catalogue(records) -> str:
    return "\n\n".join(rec.render() for rec in records) + "\n"


def find_record(records, rid: str) -> IdentityRecord:
    for rec in records:
        if rec.id == rid:
            return rec
    known = ", ".join(rec.id for rec in records)
    raise KeyError(f"no identity named {rid!r}; catalogue has: {known}")


def load_builtin() -> list[IdentityRecord]:
    text = resources.files("thetaprod").joinpath("data/catalogue.txt").read_text()
    return parse_catalogue(text)
