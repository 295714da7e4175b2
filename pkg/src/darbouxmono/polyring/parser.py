"""Recursive-descent parser for polynomial expressions.

Grammar (whitespace insignificant)::

    expr   := ['+'|'-'] term (('+'|'-') ['+'|'-'] term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' nat)?
    base   := identifier | integer | '(' expr ')'

Division is only accepted by a nonzero constant, so printed rational
coefficients such as ``3/2*x`` read back. Implicit multiplication is rejected.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..errors import ParseError, UnknownVariable
from .polynomial import Polynomial

__all__ = ["parse_polynomial", "tokenize"]


def tokenize(text: str) -> list[tuple[str, str, int]]:
    """Split into ``(kind, value, position)`` triples. Kinds: id, int, dec, op, end."""
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isalpha():
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("id", text[i:j], i))
            i = j
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == "." and j + 1 < n and text[j + 1].isdigit():
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
                tokens.append(("dec", text[i:j], i))
            else:
                tokens.append(("int", text[i:j], i))
            i = j
        elif ch in "+-*/^()":
            tokens.append(("op", ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i, text)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text, variables):
        self.text = text
        self.vars = tuple(variables)
        self.toks = tokenize(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def take(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], self.text)

    def expect(self, value):
        tok = self.peek()
        if tok[0] != "op" or tok[1] != value:
            self.error(f"expected {value!r}")
        return self.take()

    def parse(self):
        if self.peek()[0] == "end":
            self.error("empty expression")
        result = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            if tok[0] in ("id", "int", "dec") or tok[1] == "(":
                self.error("implicit multiplication is not allowed; use '*'")
            self.error(f"unexpected {tok[1]!r}")
        return result

    def signed_term(self):
        sign = 1
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        t = self.term()
        return t if sign > 0 else -t

    def expr(self):
        result = self.signed_term()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                t = self.signed_term()
                result = result + t if tok[1] == "+" else result - t
            else:
                return result

    def term(self):
        result = self.factor()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                result = result * self.factor()
            elif tok[0] == "op" and tok[1] == "/":
                self.take()
                at = self.peek()
                d = self.factor()
                if not d.is_constant():
                    self.error("division only by a constant", at)
                if d.is_zero():
                    self.error("division by zero", at)
                result = result / d.constant_term()
            else:
                return result

    def factor(self):
        base = self.base()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            e = self.peek()
            if e[0] == "int":
                self.take()
                result = base ** int(e[1])
            elif e[0] == "dec":
                self.error("non-integer exponent", e)
            elif e[0] == "op" and e[1] == "-":
                self.error("negative exponent", e)
            else:
                self.error("exponent must be a non-negative integer literal", e)
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "^":
                self.error("chained '^' is ambiguous; use parentheses", nxt)
            return result
        return base

    def base(self):
        tok = self.peek()
        kind, value, at = tok
        if kind == "id":
            self.take()
            if value not in self.vars:
                raise UnknownVariable(
                    f"unknown identifier {value!r} at position {at}; roster is {self.vars}"
                )
            return Polynomial.var(self.vars, value)
        if kind == "int":
            self.take()
            return Polynomial.constant(self.vars, Fraction(int(value)))
        if kind == "dec":
            self.error("decimal literals are not allowed; write p/q")
        if kind == "op" and value == "(":
            self.take()
            inner = self.expr()
            self.expect(")")
            return inner
        if kind == "end":
            self.error("unexpected end of input")
        self.error(f"unexpected {value!r}")


def parse_polynomial(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse ``text`` into a canonical polynomial over ``variables``.

    >>> str(parse_polynomial("(x-eps1)^2", ["x", "y", "eps1"]))
    'x^2 - 2*x*eps1 + eps1^2'
    """
    return _Parser(text, variables).parse()
