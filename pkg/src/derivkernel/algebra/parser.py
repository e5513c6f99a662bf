"""Recursive-descent parser for polynomial and rational-function text.

Grammar (whitespace ignored)::

    expr     := ['+'|'-'] term (('+'|'-') term)*
    term     := factor ('*' factor)*            # polynomial mode
    term     := factor (('*'|'/') factor)*      # rational mode
    factor   := base ('^' nonneg-int)?
    base     := rational | ident | '(' expr ')'
    rational := int ('/' posint)?
    ident    := letter (letter | digit | '_')*

The optional leading sign lets canonical printed forms such as ``-a1^2``
round-trip.  Parsing produces an :class:`Expr` tree which can be evaluated
in any ring; evaluating the tree (rather than an expanded polynomial) keeps
substitutions into powers like ``(a0*a2 - a1^2)^5`` cheap.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping
from dataclasses import dataclass
from fractions import Fraction

from ..errors import ParseError, UnknownVariableError
from .polynomial import Polynomial, VarSet
from .ratfunc import RationalFunction

# -- expression tree ---------------------------------------------------------


class Expr:
    def evaluate(self, env: Mapping[str, object], varset: VarSet | None = None):
        raise NotImplementedError

    def identifiers(self) -> set[str]:
        raise NotImplementedError


@dataclass(frozen=True)
class Num(Expr):
    value: Fraction

    def evaluate(self, env, varset=None):
        return varset.const(self.value) if varset is not None else self.value

    def identifiers(self):
        return set()


@dataclass(frozen=True)
class Var(Expr):
    name: str
    position: int = -1

    def evaluate(self, env, varset=None):
        try:
            return env[self.name]
        except KeyError:
            raise UnknownVariableError(f"unknown variable {self.name!r}", self.position) from None

    def identifiers(self):
        return {self.name}


@dataclass(frozen=True)
class Leaf(Expr):
    """An already-built polynomial, substituted as a whole on evaluation."""

    poly: Polynomial

    def evaluate(self, env, varset=None):
        mapping = {n: env[n] for n in self.poly.variables() if n in env}
        return self.poly.substitute(mapping, varset)

    def identifiers(self):
        return set(self.poly.variables())


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr

    def evaluate(self, env, varset=None):
        a = self.left.evaluate(env, varset)
        b = self.right.evaluate(env, varset)
        return _BINOPS[self.op](a, b)

    def identifiers(self):
        return self.left.identifiers() | self.right.identifiers()


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr

    def evaluate(self, env, varset=None):
        return -self.operand.evaluate(env, varset)

    def identifiers(self):
        return self.operand.identifiers()


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int

    def evaluate(self, env, varset=None):
        return self.base.evaluate(env, varset) ** self.exponent

    def identifiers(self):
        return self.base.identifiers()


def _div(a, b):
    if isinstance(b, Fraction) and b == 0:
        raise ZeroDivisionError("division by zero")
    return a / b


_BINOPS: dict[str, Callable] = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": _div,
}


# -- tokenizer -----------------------------------------------------------------


@dataclass(frozen=True)
class _Tok:
    kind: str  # "int", "ident", "op", "eof"
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(_Tok("int", text[i:j], i))
            i = j
        elif ch.isascii() and ch.isalpha():
            j = i
            while j < n and text[j].isascii() and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Tok("ident", text[i:j], i))
            i = j
        elif ch in "+-*/^()":
            toks.append(_Tok("op", ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i, text)
    toks.append(_Tok("eof", "", n))
    return toks


class _Parser:
    def __init__(self, text: str, allow_division: bool, known: set[str] | None):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.allow_division = allow_division
        self.known = known

    def peek(self, offset: int = 0) -> _Tok:
        return self.toks[min(self.i + offset, len(self.toks) - 1)]

    def take(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, message: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        where = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(f"{message}, found {where}", tok.pos, self.text)

    def expect_op(self, op: str) -> None:
        tok = self.peek()
        if tok.kind != "op" or tok.text != op:
            self.fail(f"expected {op!r}")
        self.take()

    def parse(self) -> Expr:
        if self.peek().kind == "eof":
            self.fail("expected an expression")
        node = self.expr()
        if self.peek().kind != "eof":
            self.fail("unexpected token")
        return node

    def expr(self) -> Expr:
        tok = self.peek()
        negate = False
        if tok.kind == "op" and tok.text in "+-":
            self.take()
            negate = tok.text == "-"
        node = self.term()
        if negate:
            node = Neg(node)
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text in "+-":
                self.take()
                node = BinOp(tok.text, node, self.term())
            else:
                return node

    def term(self) -> Expr:
        node = self.factor()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text == "*":
                self.take()
                node = BinOp("*", node, self.factor())
            elif tok.kind == "op" and tok.text == "/" and self.allow_division:
                self.take()
                node = BinOp("/", node, self.factor())
            else:
                return node

    def factor(self) -> Expr:
        node = self.base()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.take()
            exp_tok = self.peek()
            if exp_tok.kind != "int":
                self.fail("expected a nonnegative integer exponent")
            self.take()
            node = Pow(node, int(exp_tok.text))
        return node

    def base(self) -> Expr:
        tok = self.peek()
        if tok.kind == "int":
            self.take()
            value = Fraction(int(tok.text))
            nxt, after = self.peek(), self.peek(1)
            if nxt.kind == "op" and nxt.text == "/" and after.kind == "int":
                self.take()
                self.take()
                den = int(after.text)
                if den == 0:
                    raise ParseError("rational literal with zero denominator", after.pos, self.text)
                value = Fraction(int(tok.text), den)
            return Num(value)
        if tok.kind == "ident":
            self.take()
            if self.known is not None and tok.text not in self.known:
                raise UnknownVariableError(f"unknown variable {tok.text!r}", tok.pos, self.text)
            return Var(tok.text, tok.pos)
        if tok.kind == "op" and tok.text == "(":
            self.take()
            node = self.expr()
            self.expect_op(")")
            return node
        self.fail("expected a number, variable or '('")


def parse_expression(text: str, *, allow_division: bool = True, known: set[str] | None = None) -> Expr:
    """Parse text into an expression tree without fixing a varset."""
    return _Parser(text, allow_division, known).parse()


def _evaluate(expr: Expr, vars: VarSet):
    env = {name: vars.var(name) for name in vars.names}
    value = expr.evaluate(env, vars)
    if isinstance(value, Fraction):
        value = vars.const(value)
    return value


def parse_polynomial(text: str, vars: VarSet) -> Polynomial:
    """Parse a polynomial; '/' is only legal inside a rational literal."""
    expr = parse_expression(text, allow_division=False, known=set(vars.names))
    return _evaluate(expr, vars)


def parse_rational_function(text: str, vars: VarSet) -> RationalFunction:
    expr = parse_expression(text, allow_division=True, known=set(vars.names))
    return RationalFunction.coerce(_evaluate(expr, vars), vars)


def parse_value(text: str, vars: VarSet) -> Polynomial | RationalFunction:
    """Parse either form; the result is a Polynomial when no real division occurs."""
    expr = parse_expression(text, allow_division=True, known=set(vars.names))
    value = _evaluate(expr, vars)
    if isinstance(value, RationalFunction) and value.is_polynomial():
        return value.as_polynomial()
    return value
