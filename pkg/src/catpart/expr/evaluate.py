"""Reference interpreter.

Typed trees are compiled once into nested closures; the bounded search
engine calls the result many times, so this matters more than it looks.
``&&`` and ``||`` short-circuit left to right, which also decides whether a
partial operation on the right-hand side is ever reached.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Mapping

from . import builtins
from .ast import Binary, EnumLit, Expr, Literal, MethodCall, SetLiteral, Unary, VarRef
from .types import INT, DivisionByZero, EnumValue, EvalError, Value

Compiled = Callable[[Mapping[str, Value]], Value]


def java_div(a: int, b: int) -> int:
    if b == 0:
        raise DivisionByZero("integer division by zero")
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def java_mod(a: int, b: int) -> int:
    return a - b * java_div(a, b)


def _power(base, exp: int):
    if exp < 0:
        raise EvalError("negative exponent")
    return base**exp


def _arith(op: str, is_int: bool) -> Callable[[Value, Value], Value]:
    if op == "+":
        return lambda a, b: a + b
    if op == "-":
        return lambda a, b: a - b
    if op == "*":
        return lambda a, b: a * b
    if op == "%":
        return java_mod
    if op == "^":
        return _power
    if is_int:
        return java_div

    def real_div(a, b):
        if b == 0:
            raise DivisionByZero("division by zero")
        return Fraction(a) / Fraction(b)

    return real_div


_CMP = {
    "<": lambda a, b: a < b,
    ">": lambda a, b: a > b,
    "<=": lambda a, b: a <= b,
    ">=": lambda a, b: a >= b,
    "==": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
}


def compile_expr(node: Expr) -> Compiled:
    """Turn a typed tree into a function of a binding."""
    if node.ty is None:
        raise ValueError("compile_expr needs a type-checked tree")
    if isinstance(node, Literal):
        v = node.value
        if node.kind == "Real":
            v = Fraction(v)
        return lambda b: v
    if isinstance(node, VarRef):
        name = node.name
        return lambda b: b[name]
    if isinstance(node, EnumLit):
        ev = EnumValue(node.ty.enum or "", node.name)
        return lambda b: ev
    if isinstance(node, SetLiteral):
        parts = [compile_expr(e) for e in node.elements]
        return lambda b: frozenset(p(b) for p in parts)
    if isinstance(node, Unary):
        f = compile_expr(node.operand)
        if node.op == "!":
            return lambda b: not f(b)
        if node.op == "-":
            return lambda b: -f(b)
        return f
    if isinstance(node, Binary):
        lf, rf = compile_expr(node.left), compile_expr(node.right)
        op = node.op
        if op == "&&":
            return lambda b: lf(b) and rf(b)
        if op == "||":
            return lambda b: lf(b) or rf(b)
        if op in _CMP:
            cmp = _CMP[op]
            return lambda b: cmp(lf(b), rf(b))
        fn = _arith(op, node.ty == INT)
        return lambda b: fn(lf(b), rf(b))
    if isinstance(node, MethodCall):
        sig = builtins.signature_for(node.receiver.ty, node.name, len(node.args))
        if sig is None:
            raise ValueError(f"no implementation for {node.name}")
        impl = sig.impl
        recv = compile_expr(node.receiver)
        args = [compile_expr(a) for a in node.args]
        if not args:
            return lambda b: impl(recv(b))
        if len(args) == 1:
            a0 = args[0]
            return lambda b: impl(recv(b), a0(b))
        return lambda b: impl(recv(b), *(a(b) for a in args))
    raise TypeError(f"not an expression node: {node!r}")


def evaluate(node: Expr, binding: Mapping[str, Value]) -> Value:
    """Evaluate a typed tree.  Partial operations raise :class:`EvalError`."""
    return compile_expr(node)(binding)


def holds(fn: Compiled, binding: Mapping[str, Value]) -> bool:
    """True iff the compiled Boolean expression evaluates to true without error."""
    try:
        return fn(binding) is True
    except EvalError:
        return False
