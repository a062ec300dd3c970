"""Recursive-descent parser for the scalar expression language.

Grammar (whitespace insignificant)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | factor
    factor := base ('^' ['-'] INT)?
    base   := NUMBER | IDENT | CALL | '(' expr ')'
    CALL   := ('sin' | 'cos') '(' IDENT ')'

``NUMBER`` is an integer or a decimal (converted exactly); ``p/q`` literals
are ordinary divisions and stay exact.  ``IDENT`` is a chart coordinate, a
declared constant, or ``xi`` followed by primes (``xi''`` is the second
derivative).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .symkernel import Field, KernelError

__all__ = [
    "ParseError",
    "UnknownIdentifier",
    "Num", "Ident", "Neg", "BinOp", "Pow", "Call",
    "parse", "lower", "parse_expr",
]


class ParseError(ValueError):
    """Malformed input; ``offset`` is the byte offset of the problem."""

    def __init__(self, message, offset, source=""):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset
        self.source = source


class UnknownIdentifier(ParseError):
    def __init__(self, name, offset, source=""):
        super().__init__(f"unknown identifier {name!r}", offset, source)
        self.name = name


@dataclass(frozen=True)
class Num:
    value: Fraction
    offset: int = 0


@dataclass(frozen=True)
class Ident:
    name: str
    offset: int = 0


@dataclass(frozen=True)
class Neg:
    operand: object
    offset: int = 0


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object
    offset: int = 0


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int
    offset: int = 0


@dataclass(frozen=True)
class Call:
    func: str
    arg: Ident
    offset: int = 0


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:\.\d*)?|\.\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*'*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


def _tokenize(source):
    pos = 0
    tokens = []
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", _byte_offset(source, pos), source)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), _byte_offset(source, pos)))
        pos = m.end()
    tokens.append(("end", "", _byte_offset(source, len(source))))
    return tokens


def _byte_offset(source, index):
    return len(source[:index].encode("utf-8"))


class _Parser:
    def __init__(self, source, resolve):
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0
        self.resolve = resolve

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text):
        kind, value, off = self.take()
        if value != text:
            found = "end of input" if kind == "end" else repr(value)
            raise ParseError(f"expected {text!r}, found {found}", off, self.source)

    def parse(self):
        node = self.expr()
        kind, value, off = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {value!r}", off, self.source)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            _, op, off = self.take()
            node = BinOp(op, node, self.term(), off)
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            _, op, off = self.take()
            node = BinOp(op, node, self.unary(), off)
        return node

    def unary(self):
        kind, value, off = self.peek()
        if kind == "op" and value == "-":
            self.take()
            return Neg(self.unary(), off)
        return self.factor()

    def factor(self):
        base = self.base()
        kind, value, off = self.peek()
        if kind == "op" and value == "^":
            self.take()
            sign = 1
            k2, v2, o2 = self.peek()
            if k2 == "op" and v2 == "-":
                self.take()
                sign = -1
                k2, v2, o2 = self.peek()
            if k2 != "num":
                found = "end of input" if k2 == "end" else repr(v2)
                raise ParseError(f"exponent must be an integer literal, found {found}", o2, self.source)
            if not v2.isdigit():
                raise ParseError(f"non-integer exponent {v2!r}", o2, self.source)
            self.take()
            base = Pow(base, sign * int(v2), off)
            k3, v3, o3 = self.peek()
            if k3 == "op" and v3 == "^":
                raise ParseError("chained exponent; use parentheses", o3, self.source)
        return base

    def base(self):
        kind, value, off = self.take()
        if kind == "num":
            return Num(Fraction(value), off)
        if kind == "ident":
            if value in ("sin", "cos"):
                self.expect("(")
                k2, v2, o2 = self.take()
                if k2 != "ident":
                    found = "end of input" if k2 == "end" else repr(v2)
                    raise ParseError(f"{value}() takes a coordinate name, found {found}", o2, self.source)
                self.resolve(v2, o2, trig=True)
                self.expect(")")
                return Call(value, Ident(v2, o2), off)
            self.resolve(value, off)
            return Ident(value, off)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(value)
        raise ParseError(f"expected a number, name or '(', found {found}", off, self.source)


def _resolver(field, source):
    def resolve(name, offset, trig=False):
        if trig:
            if name not in field.coordinates:
                raise UnknownIdentifier(name, offset, source)
            return
        if name in field.coordinates or name in field.constants:
            return
        stem = name.rstrip("'")
        if stem == field.xi_name and field.xi_variable is not None:
            return
        raise UnknownIdentifier(name, offset, source)
    return resolve


def _field_of(scope):
    return scope if isinstance(scope, Field) else scope.field


def parse(source, scope):
    """Parse ``source``; ``scope`` is a Field or anything with a ``field``."""
    if not isinstance(source, str):
        raise TypeError("expression source must be a string")
    field = _field_of(scope)
    return _Parser(source, _resolver(field, source)).parse()


def lower(node, scope):
    """Lower an AST to a canonical :class:`DiffExpr`."""
    field = _field_of(scope)
    if isinstance(node, Num):
        return field(node.value)
    if isinstance(node, Ident):
        name = node.name
        if name in field.coordinates:
            return field.coordinate(name)
        if name in field.constants:
            return field.constant(name)
        stem = name.rstrip("'")
        if stem == field.xi_name:
            try:
                return field.xi(len(name) - len(stem))
            except KernelError as exc:
                raise ParseError(str(exc), node.offset) from None
        raise UnknownIdentifier(name, node.offset)
    if isinstance(node, Call):
        return field.sin(node.arg.name) if node.func == "sin" else field.cos(node.arg.name)
    if isinstance(node, Neg):
        return -lower(node.operand, field)
    if isinstance(node, Pow):
        base = lower(node.base, field)
        if node.exponent < 0 and base.is_zero():
            raise ParseError("negative power of zero", node.offset)
        return base ** node.exponent
    if isinstance(node, BinOp):
        left = lower(node.left, field)
        right = lower(node.right, field)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if right.is_zero():
            raise ParseError("division by zero", node.offset)
        return left / right
    raise TypeError(f"not an expression node: {node!r}")


def parse_expr(source, scope):
    """Parse and lower in one step."""
    return lower(parse(source, scope), scope)
