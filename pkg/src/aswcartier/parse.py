"""Parser for rational-function expressions with rational poles.

Grammar (whitespace is ignored)::

    expr   := ['-'] term (('+' | '-') term)*
    term   := [scalar ('*' | '/')] atom ['^' sint] | scalar | '1/' atom ['^' int]
    atom   := 'x' | '(' 'x' ('-' | '+') scalar ')'
    scalar := integer | '[' integer (',' integer)* ']'

A bracketed scalar lists coefficients of 1, t, t^2, ... in F_q = F_p[t]/(m).
"x^-3" and "1/x^3" mean the same thing; the output of ``str(RatFunc)`` parses
back to an equal function.
"""

from __future__ import annotations

import re

from .gf import FieldDesc
from .ratfunc import RatFunc

__all__ = ["ParseError", "parse_ratfunc_expr"]


class ParseError(ValueError):
    code = "parse_error"

    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(\d+)|(\[[^\]]*\])|(\^|\*|/|\+|-|\(|\)|x))")


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    out, i = [], 0
    while i < len(src):
        if src[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(src, i)
        if not m:
            raise ParseError(f"unexpected character {src[i]!r}", i)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("int", m.group(1), start))
        elif m.group(2):
            out.append(("vec", m.group(2), start))
        else:
            out.append((m.group(3), m.group(3), start))
        i = m.end()
    out.append(("end", "", len(src)))
    return out


class _Parser:
    def __init__(self, src: str, F: FieldDesc):
        self.F = F
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self, k: int = 0) -> str:
        return self.toks[min(self.i + k, len(self.toks) - 1)][0]

    def take(self, kind: str | None = None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            want = "end of input" if kind == "end" else repr(kind)
            raise ParseError(f"expected {want}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def scalar(self) -> int:
        kind, text, pos = self.take()
        if kind == "int":
            return self.F.scalar(int(text))
        if kind == "vec":
            body = text[1:-1].strip()
            try:
                cs = [int(s) for s in body.split(",")] if body else []
            except ValueError:
                raise ParseError("bad field element", pos) from None
            if len(cs) > self.F.k:
                raise ParseError(f"field element has more than {self.F.k} coefficients", pos)
            return self.F.from_coeffs([c % self.F.p for c in cs])
        raise ParseError(f"expected a scalar, found {text or 'end of input'!r}", pos)

    def atom(self):
        """The point a of a base x - a (plain x is a = 0)."""
        if self.peek() == "x":
            self.take()
            return 0
        self.take("(")
        self.take("x")
        sign = self.take()
        if sign[0] not in ("-", "+"):
            raise ParseError("expected '-' or '+' inside parentheses", sign[2])
        a = self.scalar()
        self.take(")")
        return a if sign[0] == "-" else self.F.neg(a)

    def exponent(self) -> int:
        if self.peek() != "^":
            return 1
        self.take()
        neg = False
        if self.peek() in ("-", "+"):
            neg = self.take()[0] == "-"
        n = int(self.take("int")[1])
        return -n if neg else n

    def power(self, a, n: int) -> RatFunc:
        F = self.F
        if n < 0:
            return RatFunc.monomial(F, a, -n)
        base = RatFunc(F, (F.neg(a), 1))
        return base ** n

    def term(self) -> RatFunc:
        F = self.F
        coeff, divide = 1, False
        if self.peek() in ("int", "vec"):
            coeff = self.scalar()
            if self.peek() == "*":
                self.take()
            elif self.peek() == "/":
                self.take()
                divide = True
            else:
                return RatFunc.const(F, coeff)
        if divide:
            a = self.atom()
            n = self.exponent()
            return self.power(a, -n).scale(coeff)
        a = self.atom()
        return self.power(a, self.exponent()).scale(coeff)

    def expr(self) -> RatFunc:
        F = self.F
        neg = False
        if self.peek() in ("-", "+"):
            neg = self.take()[0] == "-"
        total = self.term()
        if neg:
            total = -total
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            total = total + t if op == "+" else total - t
        self.take("end")
        return total


def parse_ratfunc_expr(src: str, F: FieldDesc) -> RatFunc:
    if not src.strip():
        raise ParseError("empty expression", 0)
    return _Parser(src, F).expr()
