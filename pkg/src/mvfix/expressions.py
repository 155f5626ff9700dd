"""Exact expression grammar shared by contraction functions and scenario maps.

Grammar (all arithmetic exact over rationals):

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | primary
    primary := NUMBER | NAME | ('min' | 'max') '(' expr ',' expr ')' | '(' expr ')'

NUMBER is an unsigned integer or decimal literal, converted exactly.  NAME is
restricted to the variable set the caller declares ("t" and "s" for
contraction functions, "x" for map image expressions).  Rational constants
like 5/6 simply parse as exact division.

ASTs are plain tuples: ("num", Fraction), ("var", name), ("neg", a) and
(op, a, b) with op in add/sub/mul/div/min/max.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import EvaluationError, InputError, ParseError

Expr = tuple

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<name>[A-Za-z][A-Za-z0-9_-]*)|(?P<op>[-+*/(),]))"
)

_BINOPS = {"+": "add", "-": "sub", "*": "mul", "/": "div"}


def tokenize(text: str) -> list[tuple[str, str, int]]:
    """Split into (kind, text, column) tokens; kind is num/name/op."""
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos:].lstrip()[0]!r}", column=pos + 1)
        kind = match.lastgroup
        tokens.append((kind, match.group(kind), match.start(kind) + 1))
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, tokens, variables):
        self.tokens = tokens
        self.variables = frozenset(variables)
        self.index = 0

    def peek(self):
        if self.index < len(self.tokens):
            return self.tokens[self.index]
        return ("end", "", self.tokens[-1][2] + len(self.tokens[-1][1]) if self.tokens else 1)

    def take(self):
        token = self.peek()
        self.index += 1
        return token

    def expect(self, text):
        kind, value, col = self.take()
        if value != text:
            raise ParseError(f"expected {text!r}, found {value or 'end of input'!r}", column=col)

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            node = (_BINOPS[op], node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            node = (_BINOPS[op], node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.peek()[1] == "-":
            self.take()
            return ("neg", self.unary())
        return self.primary()

    def primary(self) -> Expr:
        kind, value, col = self.take()
        if kind == "num":
            return ("num", Fraction(value))
        if kind == "name":
            if value in ("min", "max"):
                self.expect("(")
                first = self.expr()
                self.expect(",")
                second = self.expr()
                self.expect(")")
                return (value, first, second)
            if value not in self.variables:
                allowed = ", ".join(sorted(self.variables)) or "none"
                raise ParseError(f"unknown name {value!r} (allowed variables: {allowed})", column=col)
            return ("var", value)
        if value == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"expected a value, found {value or 'end of input'!r}", column=col)


def parse_expression(text: str, variables=("t", "s")) -> Expr:
    """Parse `text` into an AST; only `variables` may appear as names."""
    tokens = tokenize(text)
    if not tokens:
        raise ParseError("empty expression", column=1)
    parser = _Parser(tokens, variables)
    node = parser.expr()
    kind, value, col = parser.peek()
    if kind != "end":
        raise ParseError(f"unexpected trailing {value!r}", column=col)
    return node


def evaluate(expr: Expr, env: dict[str, Fraction]) -> Fraction:
    """Evaluate exactly at rational points; division by zero raises."""
    head = expr[0]
    if head == "num":
        return expr[1]
    if head == "var":
        return env[expr[1]]
    if head == "neg":
        return -evaluate(expr[1], env)
    left = evaluate(expr[1], env)
    right = evaluate(expr[2], env)
    if head == "add":
        return left + right
    if head == "sub":
        return left - right
    if head == "mul":
        return left * right
    if head == "div":
        if right == 0:
            raise EvaluationError(f"division by zero in {unparse(expr)!r}")
        return left / right
    if head == "min":
        return min(left, right)
    if head == "max":
        return max(left, right)
    raise EvaluationError(f"unknown node {head!r}")


_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2}


def unparse(expr: Expr) -> str:
    """Render an AST back to grammar text; parse(unparse(e)) == e."""
    return _unparse(expr, 0)


def _unparse(expr: Expr, needed: int) -> str:
    head = expr[0]
    if head == "num":
        return format_rational(expr[1])
    if head == "var":
        return expr[1]
    if head == "neg":
        inner = _unparse(expr[1], 3)
        return f"-{inner}"
    if head in ("min", "max"):
        return f"{head}({_unparse(expr[1], 0)}, {_unparse(expr[2], 0)})"
    prec = _PREC[head]
    symbol = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[head]
    text = f"{_unparse(expr[1], prec)} {symbol} {_unparse(expr[2], prec + 1)}"
    if prec < needed:
        return f"({text})"
    return text


def affine_coefficients(expr: Expr, var: str = "x") -> tuple[Fraction, Fraction]:
    """Return (slope, intercept) of an expression affine in `var`.

    Raises InputError when the expression is not affine (products of two
    var-dependent terms, division by a var-dependent term, min/max over
    var-dependent arguments).
    """
    head = expr[0]
    if head == "num":
        return Fraction(0), expr[1]
    if head == "var":
        if expr[1] == var:
            return Fraction(1), Fraction(0)
        raise InputError(f"unexpected variable {expr[1]!r} in affine expression")
    if head == "neg":
        slope, intercept = affine_coefficients(expr[1], var)
        return -slope, -intercept
    ls, li = affine_coefficients(expr[1], var)
    rs, ri = affine_coefficients(expr[2], var)
    if head == "add":
        return ls + rs, li + ri
    if head == "sub":
        return ls - rs, li - ri
    if head == "mul":
        if ls != 0 and rs != 0:
            raise InputError(f"not affine in {var}: {unparse(expr)!r}")
        if ls == 0:
            return li * rs, li * ri
        return ls * ri, li * ri
    if head == "div":
        if rs != 0:
            raise InputError(f"not affine in {var}: division by {var}-dependent term")
        if ri == 0:
            raise EvaluationError(f"division by zero in {unparse(expr)!r}")
        return ls / ri, li / ri
    if head in ("min", "max"):
        if ls != 0 or rs != 0:
            raise InputError(f"not affine in {var}: {head} over {var}-dependent arguments")
        pick = min if head == "min" else max
        return Fraction(0), pick(li, ri)
    raise InputError(f"unknown node {head!r}")


def parse_rational(text: str) -> Fraction:
    """Exact rational from 'p/q', integer, or decimal text."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"malformed rational {text.strip()!r}") from exc


def format_rational(value: Fraction) -> str:
    return str(value)
