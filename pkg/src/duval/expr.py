"""Parser and canonical printer for polynomial expressions.

Grammar (whitespace-insensitive)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := atom ['^' INT]
    atom   := INT | VAR | 'i' | '(' expr ')'

``/`` is only allowed with a nonzero constant divisor, so ``3/4`` is a
rational literal and ``x/2`` means ``(1/2)*x``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from .errors import ParseError
from .scalar import GaussianRational, I, Scalar, format_fraction, imag_part, real_part
from .series.core import TruncSeries

VARIABLES = ("x", "y", "z", "t", "X", "Y", "Z")
DEFAULT_VARS = ("x", "y", "z")

Poly = Dict[Tuple[int, ...], Scalar]


class _Parser:
    def __init__(self, text: str, vars: Sequence[str]):
        self.text = text
        self.vars = tuple(vars)
        self.pos = 0

    # polynomials are dicts exponent -> coefficient over self.vars
    def _const(self, c) -> Poly:
        return {(0,) * len(self.vars): c} if c != 0 else {}

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> Optional[str]:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else None

    def _error(self, msg, pos=None):
        raise ParseError(msg, self.pos if pos is None else pos)

    def parse(self) -> Poly:
        if self._peek() is None:
            self._error("empty expression")
        p = self.expr()
        if self._peek() is not None:
            self._error(f"unexpected {self.text[self.pos]!r}")
        return p

    def expr(self) -> Poly:
        sign = 1
        if self._peek() in ("+", "-"):
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        acc = _scale(self.term(), sign)
        while self._peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            acc = _add(acc, _scale(self.term(), -1 if op == "-" else 1))
        return acc

    def term(self) -> Poly:
        acc = self.factor()
        while self._peek() in ("*", "/"):
            op = self.text[self.pos]
            start = self.pos
            self.pos += 1
            rhs = self.factor()
            if op == "*":
                acc = _mul(acc, rhs)
            else:
                zero = (0,) * len(self.vars)
                if any(e != zero for e in rhs):
                    self._error("division by a non-constant", start)
                if not rhs:
                    self._error("division by zero", start)
                acc = _scale(acc, 1 / rhs[zero])
        return acc

    def factor(self) -> Poly:
        base = self.atom()
        if self._peek() == "^":
            self.pos += 1
            self._skip()
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if start == self.pos:
                self._error("expected a non-negative integer exponent")
            n = int(self.text[start:self.pos])
            result = self._const(Fraction(1))
            for _ in range(n):
                result = _mul(result, base)
            return result
        return base

    def atom(self) -> Poly:
        ch = self._peek()
        if ch is None:
            self._error("unexpected end of input")
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            if self._peek() != ")":
                self._error("expected ')'")
            self.pos += 1
            return inner
        if ch.isdigit():
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            return self._const(Fraction(int(self.text[start:self.pos])))
        if ch == "i":
            self.pos += 1
            return self._const(I)
        if ch.isalpha():
            if ch not in VARIABLES:
                self._error(f"unknown symbol {ch!r}")
            if ch not in self.vars:
                self._error(f"variable {ch!r} not allowed here")
            self.pos += 1
            e = tuple(1 if v == ch else 0 for v in self.vars)
            return {e: Fraction(1)}
        self._error(f"unexpected {ch!r}")


def _add(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + c
        if v == 0:
            out.pop(e, None)
        else:
            out[e] = v
    return out


def _scale(a: Poly, c) -> Poly:
    return {e: v * c for e, v in a.items()} if c != 0 else {}


def _mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c != 0}


def parse_expr(text: str, vars: Sequence[str] = DEFAULT_VARS,
               precision: Optional[int] = None) -> TruncSeries:
    """Parse ``text`` into a polynomial over ``vars``.

    With ``precision=None`` the result is an exact polynomial; otherwise terms
    of degree above ``precision`` are dropped.
    """
    terms = _Parser(text, vars).parse()
    return TruncSeries(tuple(vars), terms, precision)


def _format_monomial(e, vars) -> str:
    parts = []
    for v, a in zip(vars, e):
        if a == 1:
            parts.append(v)
        elif a > 1:
            parts.append(f"{v}^{a}")
    return "*".join(parts)


def _signed_coefficient(c: Scalar) -> Tuple[bool, str]:
    """(negative, text of |c|) where text is '' for a unit coefficient."""
    re, im = real_part(c), imag_part(c)
    if im == 0:
        return re < 0, ("" if abs(re) == 1 else format_fraction(abs(re)))
    if re == 0:
        mag = abs(im)
        return im < 0, ("i" if mag == 1 else f"{format_fraction(mag)}*i")
    sign = "-" if im < 0 else "+"
    mag = abs(im)
    im_text = "i" if mag == 1 else f"{format_fraction(mag)}*i"
    return False, f"({format_fraction(re)}{sign}{im_text})"


def format_series(f: TruncSeries) -> str:
    """Canonical text: ascending total degree; within a degree, x before y before z."""
    if not f.terms:
        return "0"
    pieces = []
    for e, c in f.sorted_terms():
        neg, coef = _signed_coefficient(c)
        mono = _format_monomial(e, f.vars)
        if mono and coef:
            body = f"{coef}*{mono}"
        else:
            body = mono or coef or "1"
        if not pieces:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append((" - " if neg else " + ") + body)
    return "".join(pieces)
