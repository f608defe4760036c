"""Parser for the map-expression mini-language.

Grammar::

    expr    := scalar '*' expr | atom
    atom    := 'z' ['^' INT] | 'tau' | 'c(' real ',' real ')'
             | 'mobius(' real [',' real] ')' | 'mobinv(' real [',' real] ')'
             | 'blaschke[' scalar {',' scalar} ']' | 'blaschke[geometric:' INT ']'
             | 'rot(' real ')' | 'affine(' scalar ',' scalar ')'
             | 'compose(' expr ',' expr ')' | '(' expr ')'
    scalar  := 'c(' real ',' real ')' | real
    real    := arithmetic over numbers and 'pi' with + - * / and parentheses

``MapExpr.to_text`` prints expressions back in this syntax.
"""
from __future__ import annotations

import math
import re

from .errors import MapParseError
from .maps import (Affine, BlaschkeProduct, Compose, Constant, Identity, MapExpr, MoebiusInverse,
                   MoebiusMap, Monomial, Rotation, Scale, Tau, geometric_zeros)

_TOKEN = re.compile(r"""
    (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_]+)
  | (?P<sym>[()\[\],*/+\-^:])
  | (?P<space>\s+)
""", re.VERBOSE)


class _Fatal(MapParseError):
    """An error that backtracking must not swallow."""


def _tokenize(text):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise MapParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "space":
            out.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    # -- token helpers
    @property
    def tok(self):
        return self.toks[self.i]

    def peek(self, value):
        return self.tok[1] == value

    def accept(self, value):
        if self.peek(value):
            self.i += 1
            return True
        return False

    def expect(self, value):
        if not self.accept(value):
            kind, got, pos = self.tok
            raise MapParseError(f"expected {value!r}, found {got or 'end of input'!r}", pos)

    def fail(self, message):
        raise MapParseError(message, self.tok[2])

    # -- reals
    def real(self):
        value = self.product()
        while self.peek("+") or self.peek("-"):
            sign = 1 if self.tok[1] == "+" else -1
            self.i += 1
            value += sign * self.product()
        return value

    def product(self):
        value = self.unary()
        while self.peek("*") or self.peek("/"):
            save = self.i
            op = self.tok[1]
            self.i += 1
            try:
                rhs = self.unary()
            except _Fatal:
                raise
            except MapParseError:
                # '0.5*z': the '*' belongs to a scaled map, not to this real
                self.i = save
                break
            if op == "*":
                value *= rhs
            else:
                if rhs == 0:
                    raise _Fatal("division by zero", self.toks[save][2])
                value /= rhs
        return value

    def unary(self):
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        kind, tok, pos = self.tok
        if kind == "num":
            self.i += 1
            return float(tok)
        if tok == "pi":
            self.i += 1
            return math.pi
        if tok == "(":
            save = self.i
            self.i += 1
            try:
                value = self.real()
                self.expect(")")
            except MapParseError:
                self.i = save
                raise
            return value
        raise MapParseError(f"expected a number, found {tok or 'end of input'!r}", pos)

    def scalar(self):
        if self.peek("c") and self.toks[self.i + 1][1] == "(":
            self.i += 2
            re_ = self.real()
            self.expect(",")
            im = self.real()
            self.expect(")")
            return complex(re_, im)
        return self.real()

    # -- maps
    def expr(self):
        save = self.i
        try:
            s = self.scalar()
        except _Fatal:
            raise
        except MapParseError:
            self.i = save
        else:
            if self.accept("*"):
                pos = self.toks[save][2]
                inner = self.expr()
                return self.build(pos, Scale, s, inner)
            self.i = save
        return self.atom()

    def atom(self):
        kind, tok, pos = self.tok
        if tok == "(":
            self.i += 1
            e = self.expr()
            self.expect(")")
            return e
        if kind != "name":
            raise MapParseError(f"expected a map, found {tok or 'end of input'!r}", pos)
        self.i += 1
        if tok == "z":
            if self.accept("^"):
                kind, k, kpos = self.tok
                if kind != "num" or not k.isdigit():
                    raise MapParseError("exponent must be a positive integer", kpos)
                self.i += 1
                return self.build(kpos, Monomial, int(k))
            return Identity()
        if tok == "tau":
            return Tau()
        if tok == "c":
            self.expect("(")
            re_ = self.real()
            self.expect(",")
            im = self.real()
            self.expect(")")
            return self.build(pos, Constant, complex(re_, im))
        if tok in ("mobius", "mobinv"):
            self.expect("(")
            re_ = self.real()
            im = self.real() if self.accept(",") else 0.0
            self.expect(")")
            cls = MoebiusMap if tok == "mobius" else MoebiusInverse
            return self.build(pos, cls, complex(re_, im))
        if tok == "rot":
            self.expect("(")
            theta = self.real()
            self.expect(")")
            return Rotation(theta)
        if tok == "affine":
            self.expect("(")
            a = self.scalar()
            self.expect(",")
            b = self.scalar()
            self.expect(")")
            return self.build(pos, Affine, a, b)
        if tok == "blaschke":
            return self.blaschke(pos)
        if tok == "compose":
            self.expect("(")
            f = self.expr()
            self.expect(",")
            g = self.expr()
            self.expect(")")
            return Compose(f, g)
        raise MapParseError(f"unknown map {tok!r}", pos)

    def blaschke(self, pos):
        self.expect("[")
        if self.peek("geometric"):
            self.i += 1
            self.expect(":")
            kind, n, npos = self.tok
            if kind != "num" or not n.isdigit() or int(n) < 1:
                raise MapParseError("geometric length must be a positive integer", npos)
            self.i += 1
            self.expect("]")
            return BlaschkeProduct(geometric_zeros(int(n)))
        zeros = [self.scalar()]
        while self.accept(","):
            zeros.append(self.scalar())
        self.expect("]")
        return self.build(pos, BlaschkeProduct, tuple(zeros))

    def build(self, pos, cls, *args):
        try:
            return cls(*args)
        except (ValueError, ArithmeticError) as exc:
            raise MapParseError(str(exc), pos) from exc


def parse_map(text: str) -> MapExpr:
    """Parse a map expression such as ``compose(mobius(0.25), 0.5*z)``."""
    p = _Parser(text)
    expr = p.expr()
    if p.tok[0] != "end":
        p.fail(f"unexpected trailing input {p.tok[1]!r}")
    return expr


def parse_scalar(text: str) -> complex:
    """Parse a number: a real expression such as ``pi/3`` or ``c(re, im)``."""
    p = _Parser(text)
    value = p.scalar()
    if p.tok[0] != "end":
        p.fail(f"unexpected trailing input {p.tok[1]!r}")
    return complex(value)


def parse_points(text: str) -> tuple[complex, ...]:
    """A comma-separated point list, optionally bracketed, or ``geometric:<n>``."""
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    if body.startswith("geometric:"):
        n = body.split(":", 1)[1].strip()
        if not n.isdigit() or int(n) < 1:
            raise MapParseError("geometric length must be a positive integer", 10)
        return tuple(complex(z) for z in geometric_zeros(int(n)))
    p = _Parser(body)
    pts = [p.scalar()]
    while p.accept(","):
        pts.append(p.scalar())
    if p.tok[0] != "end":
        p.fail(f"unexpected trailing input {p.tok[1]!r}")
    return tuple(complex(z) for z in pts)
