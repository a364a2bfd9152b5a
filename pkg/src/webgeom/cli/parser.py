"""Exact expression syntax: integers, two variables, + - * / ^ and parentheses.

``^`` takes a nonnegative integer exponent and binds tighter than unary
minus, so ``-x^2`` is ``-(x^2)``.  ``*`` and ``/`` associate to the left.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..algebra import ONE, RatFunc


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at column {pos + 1}\n  {text}\n  {' ' * pos}^")


# --- syntax tree ------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Bin:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


def to_text(e) -> str:
    """Canonical text; ``parse(to_text(e)) == e`` for every tree."""
    return _text(e, 0)


def _text(e, ctx: int) -> str:
    # ctx: 0 sum position, 1 right operand of -, 2 product, 3 right of / or *, 4 unary, 5 power base
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Pow):
        s = f"{_text(e.base, 5)}^{e.exponent}"
        return f"({s})" if ctx >= 5 else s
    if isinstance(e, Neg):
        s = "-" + _text(e.arg, 4)
        return f"({s})" if ctx >= 5 else s
    if isinstance(e, Bin):
        if e.op in "+-":
            s = f"{_text(e.left, 0)} {e.op} {_text(e.right, 1)}"
            return f"({s})" if ctx >= 1 else s
        s = f"{_text(e.left, 2)}{e.op}{_text(e.right, 3)}"
        return f"({s})" if ctx >= 3 else s
    raise TypeError(f"not an expression node: {e!r}")


# --- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.group(0).strip() == "":
            break
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("num", int(m.group(1)), start))
        elif m.group(2):
            tokens.append(("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", text, start)
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables):
        self.text = text
        self.variables = tuple(variables)
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {what}", self.text, tok[2])
        self.i += 1
        return tok

    def expression(self):
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            node = Bin(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] in ("*", "/"):
            op = self.take()[0]
            node = Bin(op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[0] == "-":
            self.take()
            return Neg(self.unary())
        if self.peek()[0] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek()[0] == "^":
            self.take()
            node = Pow(node, self.exponent())
            if self.peek()[0] == "^":
                raise ParseError("chained '^' is ambiguous; add parentheses", self.text, self.peek()[2])
        return node

    def exponent(self) -> int:
        tok = self.peek()
        if tok[0] == "num":
            return self.take()[1]
        if tok[0] == "(":
            self.take()
            inner = self.peek()
            if inner[0] != "num":
                raise ParseError("exponent must be a nonnegative integer", self.text, inner[2])
            value = self.take()[1]
            if self.peek()[0] != ")":
                raise ParseError("exponent must be a nonnegative integer", self.text, self.peek()[2])
            self.take()
            return value
        raise ParseError("exponent must be a nonnegative integer", self.text, tok[2])

    def atom(self):
        tok = self.peek()
        if tok[0] == "num":
            self.take()
            return Num(tok[1])
        if tok[0] == "name":
            if tok[1] not in self.variables:
                allowed = ", ".join(self.variables)
                raise ParseError(f"unknown variable {tok[1]!r} (expected one of {allowed})", self.text, tok[2])
            self.take()
            return Var(tok[1])
        if tok[0] == "(":
            self.take()
            node = self.expression()
            self.take(")")
            return node
        what = "end of input" if tok[0] == "end" else repr(tok[1])
        raise ParseError(f"unexpected {what}", self.text, tok[2])


def parse(text: str, variables=("x", "y")):
    """Syntax tree of ``text``; raises ParseError with the failing column."""
    p = _Parser(text, variables)
    if p.peek()[0] == "end":
        raise ParseError("empty expression", text, 0)
    node = p.expression()
    tok = p.peek()
    if tok[0] != "end":
        raise ParseError(f"unexpected {tok[1]!r}", text, tok[2])
    return node


def evaluate(e, variables=("x", "y"), env=None, divide=None):
    """Evaluate a tree; by default as a RatFunc with the variables bound to ``x`` and ``y``.

    ``env`` maps variable names to values of any ring-like type and
    ``divide(a, b)`` overrides division for types that need it.
    """
    if env is None:
        gens = [RatFunc.x(), RatFunc.y()]
        env = {name: gens[i] for i, name in enumerate(variables)}

    def ev(n):
        if isinstance(n, Num):
            return RatFunc(n.value)
        if isinstance(n, Var):
            return env[n.name]
        if isinstance(n, Neg):
            return -ev(n.arg)
        if isinstance(n, Pow):
            return ev(n.base) ** n.exponent if n.exponent else ONE
        a, b = ev(n.left), ev(n.right)
        if n.op == "+":
            return a + b
        if n.op == "-":
            return a - b
        if n.op == "*":
            return a * b
        if divide is not None:
            return divide(a, b)
        if b.is_zero():
            raise ZeroDivisionError("division by an expression that is identically zero")
        return a / b

    return ev(e)


def parse_ratfunc(text: str, variables=("x", "y")) -> RatFunc:
    return evaluate(parse(text, variables), variables)
