"""Recursive-descent parser and elaborator.

Grammar (whitespace insignificant)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ('+' | '-') factor | power
    power  := base ('^' exponent)?
    exponent := ['-'] INT | '(' ['-'] INT ')'
    base   := INT | IDENT | FUNC '(' expr ')' | '(' expr ')'
    FUNC   := log | exp | dilog | li | erf
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

from ..errors import ParseError, TowerError
from ..tower import FUNCTION_KINDS, Tower, TowerElem


@dataclass(frozen=True)
class Num:
    value: int
    pos: tuple = field(default=(1, 1), compare=False)


@dataclass(frozen=True)
class Name:
    id: str
    pos: tuple = field(default=(1, 1), compare=False)


@dataclass(frozen=True)
class Neg:
    operand: "Node"
    pos: tuple = field(default=(1, 1), compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"
    pos: tuple = field(default=(1, 1), compare=False)


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exp: int
    pos: tuple = field(default=(1, 1), compare=False)


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"
    pos: tuple = field(default=(1, 1), compare=False)


Node = Union[Num, Name, Neg, BinOp, Pow, Call]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))", re.S)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None or m.lastindex is None:
            break
        start = m.start(m.lastindex)
        kind = ("int", "ident", "op")[m.lastindex - 1]
        tokens.append((kind, m.group(m.lastindex), _where(text, start)))
        pos = m.end()
    tokens.append(("end", "", _where(text, len(text.rstrip()))))
    return tokens


def _where(text: str, index: int) -> tuple[int, int]:
    line = text.count("\n", 0, index) + 1
    return line, index - text.rfind("\n", 0, index)


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value or kind != "op":
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", *pos)

    def error(self, msg, tok=None):
        _, _, pos = tok or self.peek()
        return ParseError(msg, *pos)

    def parse(self) -> Node:
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", *pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                node = BinOp(val, node, self.term(), pos)
            else:
                return node

    def term(self) -> Node:
        node = self.factor()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                node = BinOp(val, node, self.factor(), pos)
            else:
                return node

    def factor(self) -> Node:
        kind, val, pos = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            inner = self.factor()
            return Neg(inner, pos) if val == "-" else inner
        return self.power()

    def power(self) -> Node:
        base = self.base()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            return Pow(base, self.exponent(), pos)
        return base

    def exponent(self) -> int:
        kind, val, pos = self.peek()
        paren = kind == "op" and val == "("
        if paren:
            self.take()
        sign = 1
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.take()
            sign = -1
        kind, val, pos = self.take()
        if kind != "int":
            raise ParseError("exponent must be an integer literal", *pos)
        if paren:
            kind2, val2, pos2 = self.peek()
            if not (kind2 == "op" and val2 == ")"):
                raise ParseError("exponent must be an integer literal", *pos2)
            self.take()
        return sign * int(val)

    def base(self) -> Node:
        kind, val, pos = self.take()
        if kind == "int":
            return Num(int(val), pos)
        if kind == "ident":
            nxt = self.peek()
            if val in FUNCTION_KINDS:
                if not (nxt[0] == "op" and nxt[1] == "("):
                    raise ParseError(f"function {val} needs an argument", *nxt[2])
                self.take()
                arg = self.expr()
                self.expect(")")
                return Call(val, arg, pos)
            return Name(val, pos)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {val or 'end of input'!r}", *pos)


def parse(text: str) -> Node:
    """Parse ``text`` into an AST; errors carry ``line:column``."""
    return _Parser(text).parse()


def elaborate(node: Node | str, tower: Tower, *, imaginary: str = "i") -> tuple[Tower, TowerElem]:
    """Build the element denoted by ``node`` in ``tower``, extending it as needed.

    Identifiers must name a monomial already in the tower (the indeterminate
    or a declared constant).  Over a Gaussian ground domain ``imaginary``
    denotes the square root of -1.
    """
    if isinstance(node, str):
        node = parse(node)
    box = [tower]
    value = _elab(node, box, imaginary)
    t = box[0]
    return t, t.coerce(value)


def parse_elem(text: str, tower: Tower) -> tuple[Tower, TowerElem]:
    return elaborate(parse(text), tower)


def _elab(node: Node, box: list, imaginary: str) -> TowerElem:
    t: Tower = box[0]
    if isinstance(node, Num):
        return t.coerce(node.value)
    if isinstance(node, Name):
        mono = t.name_lookup(node.id)
        if mono is not None:
            return t.gen(mono)
        if node.id == imaginary and getattr(t.domain, "is_AlgebraicField", False):
            return t.coerce(t.field.ground_new(t.domain.from_sympy(_sqrt_minus_one())))
        raise ParseError(f"unknown identifier {node.id!r}", *node.pos)
    if isinstance(node, Neg):
        return -_elab(node.operand, box, imaginary)
    if isinstance(node, BinOp):
        a = _elab(node.left, box, imaginary)
        b = _elab(node.right, box, imaginary)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if not b:
            raise ParseError("division by zero", *node.pos)
        return a / b
    if isinstance(node, Pow):
        b = _elab(node.base, box, imaginary)
        if node.exp < 0 and not b:
            raise ParseError("negative power of zero", *node.pos)
        return b ** node.exp
    if isinstance(node, Call):
        arg = _elab(node.arg, box, imaginary)
        try:
            t2, g = box[0].extend(node.func, arg)
        except TowerError as exc:
            raise TowerError(f"{node.pos[0]}:{node.pos[1]}: {exc}") from None
        box[0] = t2
        return g
    raise TypeError(node)


def _sqrt_minus_one():
    from sympy import I
    return I
