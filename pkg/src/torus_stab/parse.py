"""Parser for the polynomial text grammar.

Variables are ``x, y`` (up to two variables) or ``x1 .. xn``; coefficients are
integers, rationals written with ``/`` and root-of-unity tokens ``w(N,k)``
meaning exp(2 pi i k / N).  ``^`` takes a possibly negative integer exponent
and ``*`` may be omitted.  Parentheses are allowed.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .cyclo import CycNum
from .errors import DimensionMismatch, ParseError
from .laurent import LaurentPoly

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(src: str):
    tokens = []
    pos = 0
    src = src.rstrip()
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            break
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("num", int(m.group(1)), start))
        elif m.group(2):
            tokens.append(("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^(),":
                raise ParseError(f"unexpected character {ch!r}", start)
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("end", None, len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str, nvars: int):
        self.tokens = _tokenize(src)
        self.i = 0
        self.nvars = nvars
        self.names = {f"x{k + 1}": k for k in range(nvars)}
        if nvars <= 2:
            self.names["x"] = 0
            if nvars == 2:
                self.names["y"] = 1

    @property
    def tok(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        t = self.tokens[self.i]
        if kind is not None and t[0] != kind:
            raise ParseError(f"expected {kind!r}, found {t[1]!r}", t[2])
        self.i += 1
        return t

    def parse(self) -> LaurentPoly:
        if self.tok[0] == "end":
            raise ParseError("empty expression", 0)
        p = self.expr()
        if self.tok[0] != "end":
            raise ParseError(f"unexpected token {self.tok[1]!r}", self.tok[2])
        return p

    def expr(self):
        sign = 1
        if self.tok[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        p = self.term()
        if sign < 0:
            p = -p
        while self.tok[0] in ("+", "-"):
            op = self.take()[0]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def _starts_atom(self):
        return self.tok[0] in ("num", "name", "(")

    def term(self):
        p = self.power()
        while True:
            if self.tok[0] == "*":
                self.take()
                p = p * self.power()
            elif self.tok[0] == "/":
                pos = self.take()[2]
                q = self.power()
                if not q.is_constant() or not q:
                    raise ParseError("can only divide by a nonzero constant", pos)
                p = p * q.terms[(0,) * self.nvars].inverse()
            elif self._starts_atom():
                p = p * self.power()
            else:
                return p

    def power(self):
        base = self.atom()
        if self.tok[0] == "^":
            self.take()
            sign = 1
            if self.tok[0] in ("-", "+"):
                sign = -1 if self.take()[0] == "-" else 1
            k = sign * self.take("num")[1]
            if k < 0 and not base.is_monomial():
                raise ParseError("negative powers are only allowed on monomials", self.tok[2])
            return base ** k
        return base

    def atom(self):
        kind, val, pos = self.tok
        if kind == "num":
            self.take()
            return LaurentPoly.constant(val, self.nvars)
        if kind == "(":
            self.take()
            p = self.expr()
            self.take(")")
            return p
        if kind == "name":
            self.take()
            if val == "w" and self.tok[0] == "(":
                self.take("(")
                n = self._signed_int()
                self.take(",")
                k = self._signed_int()
                self.take(")")
                if n <= 0:
                    raise ParseError("root-of-unity order must be positive", pos)
                return LaurentPoly.constant(CycNum.root(n, k), self.nvars)
            if val in self.names:
                return LaurentPoly.variable(self.names[val], self.nvars)
            m = re.fullmatch(r"x(\d+)", val)
            if m or val in ("x", "y"):
                raise DimensionMismatch(f"variable {val!r} is not available with {self.nvars} variables")
            raise ParseError(f"unknown name {val!r}", pos)
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected token {val!r}", pos)

    def _signed_int(self):
        sign = 1
        if self.tok[0] == "-":
            self.take()
            sign = -1
        return sign * self.take("num")[1]


def parse_poly(src: str, nvars: int = 2) -> LaurentPoly:
    """Parse the textual polynomial grammar into an exact Laurent polynomial."""
    return _Parser(src, nvars).parse()


def infer_nvars(src: str) -> int:
    """Smallest variable count consistent with the names used in `src`."""
    names = set(re.findall(r"[A-Za-z_][A-Za-z_0-9]*", src)) - {"w"}
    idx = [int(m.group(1)) for n in names if (m := re.fullmatch(r"x(\d+)", n))]
    if idx:
        return max(idx)
    if "y" in names:
        return 2
    return 1
