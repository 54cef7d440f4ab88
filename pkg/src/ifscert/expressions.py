"""Small arithmetic expression language.

One grammar serves both coordinate templates of parametric map families and
custom comparison functions:

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := base ('^' int)?
    base   := number | var | '(' expr ')'
    var    := 'x' digits | 'r' | 'i'

``x1 .. xd`` are point coordinates, ``r`` is the radius argument of a
comparison function and ``i`` is the index parameter of a parametric family.
Exponents are integer literals (optionally signed).  Division by a literal
zero is rejected at parse time; division by a subexpression that folds to
zero once ``i`` is bound is rejected at construction time.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import ExpressionError

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)"
    r"|(?P<var>x\d+|r|i)"
    r"|(?P<op>[-+*/^()]))"
)

Node = tuple
# ("num", float) | ("var", name) | ("bin", op, left, right) | ("pow", base, int)


@dataclass(frozen=True)
class Expr:
    """Parsed expression with its source text and the variables it uses."""

    root: Node
    source: str
    variables: frozenset[str]

    def __call__(self, **env):
        return evaluate(self, **env)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            rest = text[pos:].lstrip()
            if not rest:
                break
            raise ExpressionError(f"unexpected character {rest[0]!r}", pos)
        if m.group("num") is not None:
            tokens.append(("num", m.group("num"), m.start("num")))
        elif m.group("var") is not None:
            tokens.append(("var", m.group("var"), m.start("var")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.idx = 0
        self.variables: set[str] = set()

    def peek(self):
        if self.idx < len(self.tokens):
            return self.tokens[self.idx]
        return (None, None, len(self.text))

    def advance(self):
        tok = self.peek()
        self.idx += 1
        return tok

    def expect_op(self, op: str):
        kind, value, pos = self.advance()
        if kind != "op" or value != op:
            raise ExpressionError(f"expected {op!r}", pos)

    def parse(self) -> Node:
        node = self.expr()
        kind, value, pos = self.peek()
        if kind is not None:
            raise ExpressionError(f"trailing input {value!r}", pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                node = ("bin", value, node, self.term())
            else:
                return node

    def term(self) -> Node:
        node = self.factor()
        while True:
            kind, value, pos = self.peek()
            if kind == "op" and value in "*/":
                self.advance()
                rhs = self.factor()
                if value == "/" and rhs[0] == "num" and rhs[1] == 0.0:
                    raise ExpressionError("division by literal zero", pos)
                node = ("bin", value, node, rhs)
            else:
                return node

    def factor(self) -> Node:
        node = self.base()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            node = ("pow", node, self.int_literal())
        return node

    def int_literal(self) -> int:
        sign = 1
        kind, value, pos = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            sign = -1
        kind, value, pos = self.advance()
        if kind != "num" or not re.fullmatch(r"\d+", value):
            raise ExpressionError("exponent must be an integer literal", pos)
        return sign * int(value)

    def base(self) -> Node:
        kind, value, pos = self.advance()
        if kind == "num":
            return ("num", float(value))
        if kind == "var":
            self.variables.add(value)
            return ("var", value)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ExpressionError("expected number, variable or '('", pos)


def parse_expression(text: str, allowed_variables: set[str] | None = None) -> Expr:
    """Parse ``text`` into an :class:`Expr`.

    ``allowed_variables`` restricts which variable names may appear; a
    violation raises :class:`ExpressionError`.
    """
    parser = _Parser(text)
    root = parser.parse()
    if allowed_variables is not None:
        extra = parser.variables - allowed_variables
        if extra:
            raise ExpressionError(
                f"variable(s) {sorted(extra)} not allowed here "
                f"(allowed: {sorted(allowed_variables)})"
            )
    return Expr(root=root, source=text, variables=frozenset(parser.variables))


def _eval_node(node: Node, env: dict):
    tag = node[0]
    if tag == "num":
        return node[1]
    if tag == "var":
        name = node[1]
        if name not in env:
            raise ExpressionError(f"unbound variable {name!r}")
        return env[name]
    if tag == "pow":
        base = _eval_node(node[1], env)
        with np.errstate(all="ignore"):
            return base ** float(node[2])
    _, op, left, right = node
    a = _eval_node(left, env)
    b = _eval_node(right, env)
    with np.errstate(all="ignore"):
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        return a / b


def evaluate(expr: Expr, **env):
    """Evaluate over floats or numpy arrays. Non-finite results are the
    caller's business; nothing is raised here beyond unbound variables."""
    return _eval_node(expr.root, env)


def _fold(node: Node, binding: dict) -> Node:
    tag = node[0]
    if tag == "num":
        return node
    if tag == "var":
        if node[1] in binding:
            return ("num", float(binding[node[1]]))
        return node
    if tag == "pow":
        base = _fold(node[1], binding)
        if base[0] == "num":
            return ("num", float(base[1] ** float(node[2])))
        return ("pow", base, node[2])
    _, op, left, right = node
    lf = _fold(left, binding)
    rf = _fold(right, binding)
    if op == "/" and rf[0] == "num" and rf[1] == 0.0:
        raise ExpressionError("division by zero after substitution")
    if lf[0] == "num" and rf[0] == "num":
        a, b = lf[1], rf[1]
        value = {"+": a + b, "-": a - b, "*": a * b, "/": a / b if b != 0 else None}[op]
        return ("num", float(value))
    return ("bin", op, lf, rf)


def bind(expr: Expr, **binding) -> Expr:
    """Substitute variables by constants, folding constant subtrees.

    Raises :class:`ExpressionError` if a denominator folds to zero, so a
    template like ``x1/(i-i)`` fails when the family is instantiated.
    """
    root = _fold(expr.root, binding)
    remaining = expr.variables - set(binding)
    return Expr(root=root, source=expr.source, variables=frozenset(remaining))
