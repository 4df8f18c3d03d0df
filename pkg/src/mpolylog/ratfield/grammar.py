"""Parser for the textual form of rational functions.

Accepts what :meth:`RatFunc.text` prints, plus ordinary infix arithmetic:
integers, ``s<k>`` variables, ``zeta(m)`` roots, ``+ - * / ^`` and parentheses.
"""

from __future__ import annotations

import re

from ..cyclo import CycloNumber
from .ratfunc import RatFunc, var

__all__ = ["parse_ratfunc"]

_TOKEN = re.compile(r"\s*(?:(\d+)|(s\d+)|(zeta)|(.))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        pos = m.end()
        if m.group(1):
            out.append(("int", m.group(1)))
        elif m.group(2):
            out.append(("var", m.group(2)))
        elif m.group(3):
            out.append(("zeta", "zeta"))
        elif m.group(4) and not m.group(4).isspace():
            ch = m.group(4)
            if ch not in "+-*/^()":
                raise ValueError(f"unexpected character {ch!r}")
            out.append(("op", ch))
    return out


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ValueError(f"expected {value or kind} at token {self.pos}, got {tok[1]!r}")
        self.pos += 1
        return tok

    def expr(self) -> RatFunc:
        acc = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> RatFunc:
        acc = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            acc = acc * rhs if op == "*" else acc / rhs
        return acc

    def unary(self) -> RatFunc:
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> RatFunc:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            exp = int(self.take("int")[1])
            return base ** (sign * exp)
        return base

    def atom(self) -> RatFunc:
        kind, value = self.peek()
        if kind == "int":
            self.take()
            return RatFunc.const(int(value))
        if kind == "var":
            self.take()
            return var(int(value[1:]))
        if kind == "zeta":
            self.take()
            self.take("op", "(")
            m = int(self.take("int")[1])
            self.take("op", ")")
            return RatFunc.const(CycloNumber.root(1, m))
        if (kind, value) == ("op", "("):
            self.take()
            inner = self.expr()
            self.take("op", ")")
            return inner
        raise ValueError(f"unexpected token {value!r}")


def parse_ratfunc(text: str) -> RatFunc:
    p = _Parser(text)
    out = p.expr()
    if p.pos != len(p.tokens):
        raise ValueError(f"trailing input after token {p.pos}")
    return out
