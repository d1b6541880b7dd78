"""Expression grammar and ASCII formatting.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom (('^' | '**') unary)?
    atom   := INT | NAME | JET | '(' expr ')'

JET is ``P[p,q]`` or ``P_{p.q}`` for P, Q, R, S.  Exponents must reduce
to non-negative integer constants.
"""

from __future__ import annotations

import re
from fractions import Fraction

from . import kernel as K
from . import poly as PL
from .errors import ParseError, UnsupportedExponentError
from .rational import ONE, RatExpr

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<jet>[PQRS](?:\[\s*\d+\s*,\s*\d+\s*\]|_\{\s*\d+\s*\.\s*\d+\s*\}))
  | (?P<int>\d+)
  | (?P<name>[A-Za-z][A-Za-z0-9_]*)
  | (?P<pow>\*\*|\^)
  | (?P<op>[-+*/()])
    """,
    re.VERBOSE,
)
_JET_PARTS = re.compile(r"([PQRS])\D*(\d+)\D+(\d+)")


def _tokenize(text):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        where = "end of input" if tok[0] == "eof" else repr(tok[1])
        raise ParseError(f"{msg}, found {where}", tok[2], self.text)

    def parse(self):
        e = self.expr()
        if self.peek()[0] != "eof":
            self.fail("expected operator")
        return e

    def expr(self):
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            t = self.term()
            e = e + t if op == "+" else e - t
        return e

    def term(self):
        e = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            tok = self.take()
            t = self.unary()
            if tok[1] == "*":
                e = e * t
            else:
                if t.is_zero():
                    raise ParseError("division by zero", tok[2], self.text)
                e = e / t
        return e

    def unary(self):
        t = self.peek()
        if t[0] == "op" and t[1] in ("-", "+"):
            self.take()
            e = self.unary()
            return -e if t[1] == "-" else e
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "pow":
            tok = self.take()
            exp = self.unary()
            k = exp.constant_value()
            if k is None or k.denominator != 1 or k < 0:
                raise UnsupportedExponentError(
                    "exponent must be a non-negative integer", tok[2], self.text
                )
            return base ** int(k)
        return base

    def atom(self):
        t = self.take()
        kind, val, pos = t
        if kind == "int":
            return RatExpr.from_int(int(val))
        if kind == "jet":
            L, p, q = _JET_PARTS.match(val).groups()
            return RatExpr.var(PL.jet_name(L, int(p), int(q)))
        if kind == "name":
            return RatExpr.var(val)
        if kind == "op" and val == "(":
            e = self.expr()
            if self.peek()[1] != ")" or self.peek()[0] != "op":
                self.fail("expected ')'")
            self.take()
            return e
        self.i -= 1
        self.fail("expected a number, variable or '('")


def parse(text: str) -> RatExpr:
    """Parse an expression string into a canonical RatExpr."""
    return _Parser(text).parse()


def parse_or(value):
    """Accept a RatExpr, number or string."""
    if isinstance(value, RatExpr):
        return value
    if isinstance(value, (int, Fraction)):
        return RatExpr.from_int(value)
    return parse(str(value))


# ---------------------------------------------------------------------------
# formatting


def _mono_str(m):
    parts = []
    for i, e in PL.mono_items(m):
        name = PL.REG.name(i)
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def format_poly(f, den=1):
    """Format integer polynomial f / den with rational coefficients."""
    if not f:
        return "0"
    keyed = [(m, PL.mono_key(m)) for m in f]
    keyed.sort(key=lambda t: t[1][1], reverse=True)
    keyed.sort(key=lambda t: t[1][0])
    out = []
    for j, (m, _) in enumerate(keyed):
        q = Fraction(f[m], den)
        neg = q < 0
        a = -q if neg else q
        ms = _mono_str(m)
        if not ms:
            body = str(a)
        elif a == 1:
            body = ms
        else:
            body = f"{a}*{ms}"
        if j == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def format_expr(e: RatExpr) -> str:
    if not e.fac:
        return format_poly(e.n, e.c)
    return f"({format_poly(e.n)})/({format_poly(e.den())})"


__all__ = ["parse", "parse_or", "format_expr", "format_poly", "ONE", "K"]
