"""Recursive-descent parser for polynomial expressions.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := ("-")* atom ("^" exponent)?
    exponent := nonneg_int ("^" exponent)?
    atom   := nonneg_int | identifier | "(" expr ")"

``^`` binds tighter than unary minus, so ``-x^2`` is ``-(x^2)``; exponent
chains are right-associative. Multiplication must be written explicitly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

from .errors import ExponentError, ParseError, UnknownVariableError
from .numeric import ZZ, Ring
from .polynomial import Poly, render_poly

__all__ = ["ExprAst", "parse_ast", "lower", "parse", "render", "identifiers"]

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*^()]))"
)


@dataclass(frozen=True)
class ExprAst:
    kind: str  # int | var | neg | add | sub | mul | pow
    children: tuple = ()
    value: object = None
    offset: int = 0


@dataclass
class _Token:
    kind: str
    text: str
    offset: int


@dataclass
class _Parser:
    src: str
    tokens: list = field(default_factory=list)
    pos: int = 0

    def __post_init__(self):
        i = 0
        src = self.src
        while i < len(src):
            if src[i].isspace():
                i += 1
                continue
            m = _TOKEN.match(src, i)
            if not m or m.end() == i:
                raise ParseError(f"unexpected character {src[i]!r}", _byte_offset(src, i))
            kind = m.lastgroup
            start = m.start(kind)
            self.tokens.append(_Token(kind, m.group(kind), _byte_offset(src, start)))
            i = m.end()
        self.tokens.append(_Token("eof", "", len(src.encode())))

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def at_op(self, *ops) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.text in ops

    def expect_op(self, op):
        tok = self.take()
        if tok.kind != "op" or tok.text != op:
            raise ParseError(f"expected {op!r}, found {_describe(tok)}", tok.offset)
        return tok

    def expr(self) -> ExprAst:
        node = self.term()
        while self.at_op("+", "-"):
            tok = self.take()
            rhs = self.term()
            node = ExprAst("add" if tok.text == "+" else "sub", (node, rhs), offset=tok.offset)
        return node

    def term(self) -> ExprAst:
        node = self.factor()
        while self.at_op("*"):
            tok = self.take()
            node = ExprAst("mul", (node, self.factor()), offset=tok.offset)
        return node

    def factor(self) -> ExprAst:
        negs = []
        while self.at_op("-"):
            negs.append(self.take())
        node = self.atom()
        if self.at_op("^"):
            tok = self.take()
            node = ExprAst("pow", (node,), value=self.exponent(), offset=tok.offset)
        for tok in reversed(negs):
            node = ExprAst("neg", (node,), offset=tok.offset)
        return node

    def exponent(self) -> int:
        tok = self.take()
        if tok.kind == "op" and tok.text == "-":
            raise ExponentError("negative exponent", tok.offset)
        if tok.kind != "int":
            raise ExponentError(f"exponent must be a nonnegative integer literal, found {_describe(tok)}", tok.offset)
        e = int(tok.text)
        if self.at_op("^"):
            self.take()
            e = e ** self.exponent()
        return e

    def atom(self) -> ExprAst:
        tok = self.take()
        if tok.kind == "int":
            return ExprAst("int", value=int(tok.text), offset=tok.offset)
        if tok.kind == "ident":
            return ExprAst("var", value=tok.text, offset=tok.offset)
        if tok.kind == "op" and tok.text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ParseError(f"unexpected {_describe(tok)}", tok.offset)


def _byte_offset(src: str, i: int) -> int:
    return len(src[:i].encode())


def _describe(tok: _Token) -> str:
    return "end of input" if tok.kind == "eof" else repr(tok.text)


def parse_ast(src: str) -> ExprAst:
    if not src or not src.strip():
        raise ParseError("empty expression", 0)
    p = _Parser(src)
    node = p.expr()
    tok = p.peek()
    if tok.kind != "eof":
        raise ParseError(f"unexpected {_describe(tok)} after expression", tok.offset)
    return node


def lower(node: ExprAst, variables: Sequence[str], ring: Ring = ZZ) -> Poly:
    variables = tuple(variables)
    kind = node.kind
    if kind == "int":
        return Poly.constant(node.value, ring, variables)
    if kind == "var":
        if node.value not in variables:
            raise UnknownVariableError(
                f"unknown variable {node.value!r}; declared {list(variables)}", node.offset
            )
        return Poly.variable(node.value, ring, variables)
    if kind == "neg":
        return -lower(node.children[0], variables, ring)
    if kind == "pow":
        return lower(node.children[0], variables, ring) ** node.value
    a, b = (lower(c, variables, ring) for c in node.children)
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    return a * b


def parse(src: str, variables: Sequence[str], ring: Ring = ZZ) -> Poly:
    """Parse ``src`` into a normalized polynomial over ``ring``."""
    return lower(parse_ast(src), variables, ring)


def render(f: Poly, order=None) -> str:
    return render_poly(f) if order is None else render_poly(f, order)


def identifiers(src: str) -> list[str]:
    """Identifiers in order of first appearance (used to infer variable lists)."""
    seen = []
    for m in re.finditer(r"[A-Za-z][A-Za-z0-9_]*", src):
        if m.group() not in seen:
            seen.append(m.group())
    return seen
