"""Text grammar for polynomials such as ``3/2*T^2 - beta*T + 1``.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*      division only by constants
    unary  := ('+' | '-') unary | power
    power  := atom ('^' integer)?
    atom   := integer | identifier | '(' expr ')'

Whitespace is ignored. Identifiers must be declared variables.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .multipoly import MultiPoly

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}: {text!r}")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("num", m.group(1), start))
        elif m.group(2):
            tokens.append(("id", m.group(2), start))
        else:
            op = m.group(3)
            tokens.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: tuple[str, ...]):
        self.text = text
        self.vars = variables
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.peek()[2], self.text)

    def parse(self) -> MultiPoly:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        value = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected token {self.peek()[1]!r}")
        return value

    def expr(self) -> MultiPoly:
        value = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> MultiPoly:
        value = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            pos = self.peek()[2]
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise ParseError("division only by nonzero constants", pos, self.text)
                value = value * (Fraction(1) / Fraction(rhs.constant_value()))
        return value

    def unary(self) -> MultiPoly:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek()[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> MultiPoly:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            kind, text, pos = self.take()
            if kind != "num":
                raise ParseError("exponent must be a non-negative integer", pos, self.text)
            return base ** int(text)
        return base

    def atom(self) -> MultiPoly:
        kind, text, pos = self.take()
        if kind == "num":
            return MultiPoly.constant(self.vars, int(text))
        if kind == "id":
            if text not in self.vars:
                raise ParseError(f"undeclared variable {text!r}", pos, self.text)
            return MultiPoly.variable(self.vars, text)
        if (kind, text) == ("op", "("):
            value = self.expr()
            if self.peek()[:2] != ("op", ")"):
                raise self.error("expected ')'")
            self.take()
            return value
        raise ParseError(f"unexpected token {text!r}" if text else "unexpected end of input", pos, self.text)


def parse_polynomial(text: str, variables: tuple[str, ...] | list[str]) -> MultiPoly:
    """Parse text into a MultiPoly over the given variables."""
    return _Parser(text, tuple(variables)).parse()
