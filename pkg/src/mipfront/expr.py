"""Arithmetic expressions for objectives, constraints and derived variables.

Grammar (lowest to highest precedence)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' INT)?
    atom   := NUMBER | NAME | '(' expr ')'

``^`` binds tighter than unary minus, so ``-x^2`` is ``-(x^2)``.  Exponents
are nonnegative integer literals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Mapping, Sequence, Union

import numpy as np


class ExpressionError(ValueError):
    """Base class for expression errors."""


class ExpressionSyntaxError(ExpressionError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class EvaluationError(ExpressionError):
    pass


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expression"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Pow:
    base: "Expression"
    exponent: int


Expression = Union[Num, Var, Neg, BinOp, Pow]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExpressionSyntaxError(f"unknown token {text[bad]!r}", bad)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


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

    def expect_op(self, op: str):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ExpressionSyntaxError(f"expected {op!r}", pos)

    def parse(self) -> Expression:
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExpressionSyntaxError(f"unexpected {val!r}", pos)
        return node

    def expr(self) -> Expression:
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expression:
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expression:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expression:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            kind, val, pos = self.take()
            if kind != "num" or not re.fullmatch(r"\d+", val):
                raise ExpressionSyntaxError("exponent must be a nonnegative integer", pos)
            return Pow(base, int(val))
        return base

    def atom(self) -> Expression:
        kind, val, pos = self.take()
        if kind == "num":
            return Num(float(val))
        if kind == "name":
            return Var(val)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        what = "end of input" if kind == "end" else repr(val)
        raise ExpressionSyntaxError(f"unexpected {what}", pos)


def parse_expression(text: str) -> Expression:
    if not text or not text.strip():
        raise ExpressionSyntaxError("empty expression", 0)
    return _Parser(text).parse()


def variables(e: Expression) -> frozenset[str]:
    """Names referenced by ``e``."""
    if isinstance(e, Var):
        return frozenset([e.name])
    if isinstance(e, Num):
        return frozenset()
    if isinstance(e, Neg):
        return variables(e.operand)
    if isinstance(e, Pow):
        return variables(e.base)
    return variables(e.left) | variables(e.right)


def evaluate(e: Expression, assignment: Mapping[str, float]) -> float:
    """Recursively evaluate ``e``.

    Values in ``assignment`` may be numpy arrays, in which case the result is
    evaluated elementwise.
    """
    value = _eval(e, assignment)
    if not np.all(np.isfinite(value)):
        raise EvaluationError("non-finite result")
    return value


def _eval(e: Expression, env: Mapping[str, float]):
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        try:
            return env[e.name]
        except KeyError:
            raise EvaluationError(f"missing variable {e.name!r}") from None
    if isinstance(e, Neg):
        return -_eval(e.operand, env)
    if isinstance(e, Pow):
        base = _eval(e.base, env)
        if e.exponent == 0:
            return base * 0 + 1.0
        return base**e.exponent
    left = _eval(e.left, env)
    right = _eval(e.right, env)
    if e.op == "+":
        return left + right
    if e.op == "-":
        return left - right
    if e.op == "*":
        return left * right
    if np.any(np.asarray(right) == 0):
        raise EvaluationError("division by zero")
    return left / right


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def format_expression(e: Expression) -> str:
    """Render ``e`` in the parser's syntax with minimal parentheses."""
    return _fmt(e, 0)


def _fmt_num(v: float) -> str:
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def _fmt(e: Expression, ctx: int) -> str:
    # ctx: binding strength required by the parent (0 none, 1 additive rhs/operand,
    # 2 multiplicative, 3 unary operand, 5 power base)
    if isinstance(e, Num):
        s = _fmt_num(e.value)
        return f"({s})" if e.value < 0 and ctx > 0 else s
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Pow):
        s = f"{_fmt(e.base, 5)}^{e.exponent}"
        return f"({s})" if ctx > 4 else s
    if isinstance(e, Neg):
        s = "-" + _fmt(e.operand, 3)
        return f"({s})" if ctx > 3 else s
    prec = _PREC[e.op]
    s = f"{_fmt(e.left, prec)} {e.op} {_fmt(e.right, prec + 1)}"
    return f"({s})" if ctx > prec else s


def substitute(e: Expression, mapping: Mapping[str, Expression]) -> Expression:
    if isinstance(e, Var):
        return mapping.get(e.name, e)
    if isinstance(e, Num):
        return e
    if isinstance(e, Neg):
        return Neg(substitute(e.operand, mapping))
    if isinstance(e, Pow):
        return Pow(substitute(e.base, mapping), e.exponent)
    return BinOp(e.op, substitute(e.left, mapping), substitute(e.right, mapping))


def _py(e: Expression, names: Mapping[str, str]) -> str:
    if isinstance(e, Num):
        return repr(float(e.value))
    if isinstance(e, Var):
        return names[e.name]
    if isinstance(e, Neg):
        return f"(-{_py(e.operand, names)})"
    if isinstance(e, Pow):
        if e.exponent == 0:
            return f"({_py(e.base, names)}*0.0+1.0)"
        return f"({_py(e.base, names)}**{e.exponent})"
    return f"({_py(e.left, names)}{e.op}{_py(e.right, names)})"


@lru_cache(maxsize=4096)
def compile_expression(e: Expression, argnames: tuple[str, ...]) -> Callable[..., float]:
    """Compile ``e`` into a fast positional function of ``argnames``.

    The compiled function skips the division and finiteness checks of
    :func:`evaluate`; callers that need them check the result.
    """
    missing = variables(e) - set(argnames)
    if missing:
        raise EvaluationError(f"missing variable {sorted(missing)[0]!r}")
    local = {n: f"_a{i}" for i, n in enumerate(argnames)}
    src = f"lambda {', '.join(local[n] for n in argnames)}: {_py(e, local)}"
    return eval(src, {"__builtins__": {}})  # source built from the AST only


def linear_combination(terms: Sequence[tuple[float, Expression]], constant: float = 0.0) -> Expression:
    """Build ``constant + sum(c * e)`` skipping zero coefficients."""
    node: Expression | None = None
    for coef, e in terms:
        if coef == 0:
            continue
        part = e if coef == 1 else BinOp("*", Num(float(coef)), e)
        node = part if node is None else BinOp("+", node, part)
    if node is None:
        return Num(float(constant))
    if constant != 0:
        node = BinOp("+", node, Num(float(constant)))
    return node

