"""Canonical rendering of expression trees.

The output re-parses to a structurally equal tree.  Spacing is fixed: one
space around binary operators, none inside calls or after unary operators.
"""

from __future__ import annotations

from fractions import Fraction

from .ast import PRECEDENCE, Binary, EnumLit, Expr, Literal, MethodCall, SetLiteral, Unary, VarRef
from .lexer import escape_string


def _level(node: Expr) -> int:
    if isinstance(node, Binary):
        return PRECEDENCE[node.op]
    if isinstance(node, MethodCall):
        return PRECEDENCE["."] if node.receiver is not None else PRECEDENCE["atom"]
    if isinstance(node, Unary):
        return PRECEDENCE["unary"]
    if isinstance(node, Literal) and node.kind in ("Int", "Real") and node.value < 0:
        return PRECEDENCE["unary"]
    return PRECEDENCE["atom"]


def _real_text(v: Fraction) -> str:
    num, den = v.numerator, v.denominator
    d, twos, fives = den, 0, 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d == 1:
        digits = max(twos, fives, 1)
        scaled = abs(num) * (10**digits // den)
        whole, frac = divmod(scaled, 10**digits)
        text = f"{whole}.{frac:0{digits}d}".rstrip("0")
        if text.endswith("."):
            text += "0"
        return ("-" if num < 0 else "") + text
    return f"{num}.0 / {den}.0"


def to_source(node: Expr) -> str:
    if isinstance(node, Literal):
        k, v = node.kind, node.value
        if k == "Bool":
            return "true" if v else "false"
        if k == "Int":
            return str(v)
        if k == "Real":
            return _real_text(Fraction(v))
        if k == "Str":
            return '"' + escape_string(v) + '"'
        return f"'{v}'"
    if isinstance(node, (VarRef, EnumLit)):
        return node.name
    if isinstance(node, SetLiteral):
        return "{" + ", ".join(to_source(e) for e in node.elements) + "}"
    if isinstance(node, MethodCall):
        args = ", ".join(to_source(a) for a in node.args)
        if node.receiver is None:
            return f"{node.name}({args})"
        recv = to_source(node.receiver)
        if _level(node.receiver) < PRECEDENCE["atom"] and not (
            isinstance(node.receiver, MethodCall) and node.receiver.receiver is not None
        ):
            recv = f"({recv})"
        return f"{recv}.{node.name}({args})"
    if isinstance(node, Unary):
        inner = to_source(node.operand)
        if _level(node.operand) < PRECEDENCE["unary"]:
            inner = f"({inner})"
        return node.op + inner
    if isinstance(node, Binary):
        p = PRECEDENCE[node.op]
        left, right = to_source(node.left), to_source(node.right)
        if node.op == "^":
            if _level(node.left) < PRECEDENCE["atom"]:
                left = f"({left})"
            if _level(node.right) < PRECEDENCE["unary"]:
                right = f"({right})"
            return f"{left} ^ {right}"
        if _level(node.left) < p:
            left = f"({left})"
        if _level(node.right) <= p:
            right = f"({right})"
        return f"{left} {node.op} {right}"
    raise TypeError(f"not an expression node: {node!r}")


def fully_parenthesized(node: Expr) -> str:
    """Render with explicit parentheses around every compound node."""
    if isinstance(node, Binary):
        return f"({fully_parenthesized(node.left)} {node.op} {fully_parenthesized(node.right)})"
    if isinstance(node, Unary):
        return f"({node.op}{fully_parenthesized(node.operand)})"
    if isinstance(node, MethodCall):
        args = ", ".join(fully_parenthesized(a) for a in node.args)
        if node.receiver is None:
            return f"{node.name}({args})"
        return f"({fully_parenthesized(node.receiver)}).{node.name}({args})"
    if isinstance(node, SetLiteral):
        return "{" + ", ".join(fully_parenthesized(e) for e in node.elements) + "}"
    return to_source(node)
