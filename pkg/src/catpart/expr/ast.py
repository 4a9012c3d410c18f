"""Expression syntax tree.

Nodes are frozen dataclasses.  ``ty`` is filled in by the type checker and is
excluded from equality so that a typed tree compares equal to the untyped tree
it was derived from.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

from .types import SemType, Value

# Binary operator symbol -> node name used in error messages and printing.
BINARY_OPS = {
    "||": "Or",
    "&&": "And",
    "==": "Eq",
    "!=": "Ne",
    "<": "Lt",
    ">": "Gt",
    "<=": "Le",
    ">=": "Ge",
    "+": "Add",
    "-": "Sub",
    "*": "Mul",
    "/": "Div",
    "%": "Mod",
    "^": "Pow",
}

# Binding strength; larger binds tighter.  Method calls share level 6 with
# the multiplicative operators, unary operators sit at 7 and power at 8.
PRECEDENCE = {
    "||": 1,
    "&&": 2,
    "==": 3,
    "!=": 3,
    "<": 4,
    ">": 4,
    "<=": 4,
    ">=": 4,
    "+": 5,
    "-": 5,
    "*": 6,
    "/": 6,
    "%": 6,
    ".": 6,
    "unary": 7,
    "^": 8,
    "atom": 9,
}


@dataclass(frozen=True)
class Literal:
    value: Value
    kind: str  # "Int", "Real", "Str", "Char" or "Bool"; keeps 1, 1.0 and true apart
    ty: SemType | None = field(default=None, compare=False)
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class VarRef:
    name: str
    ty: SemType | None = field(default=None, compare=False)
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class EnumLit:
    name: str
    ty: SemType | None = field(default=None, compare=False)
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    ty: SemType | None = field(default=None, compare=False)
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Unary:
    op: str  # one of "-", "+", "!"
    operand: "Expr"
    ty: SemType | None = field(default=None, compare=False)
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class MethodCall:
    receiver: "Expr | None"  # None for a free function call, always rejected later
    name: str
    args: tuple["Expr", ...]
    ty: SemType | None = field(default=None, compare=False)
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class SetLiteral:
    elements: tuple["Expr", ...]
    ty: SemType | None = field(default=None, compare=False)
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False)


Expr = Union[Literal, VarRef, EnumLit, Binary, Unary, MethodCall, SetLiteral]


def children(node: Expr) -> Iterator[Expr]:
    if isinstance(node, Binary):
        yield node.left
        yield node.right
    elif isinstance(node, Unary):
        yield node.operand
    elif isinstance(node, MethodCall):
        if node.receiver is not None:
            yield node.receiver
        yield from node.args
    elif isinstance(node, SetLiteral):
        yield from node.elements


def walk(node: Expr) -> Iterator[Expr]:
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(list(children(n))))


def free_vars(node: Expr) -> set[str]:
    """Names referenced as variables.

    On an untyped tree every bare identifier other than ``true``/``false`` is
    a candidate variable; after type checking, identifiers that resolved to
    enumeration literals are :class:`EnumLit` nodes and are not reported.
    """
    return {n.name for n in walk(node) if isinstance(n, VarRef)}


def node_kind(node: Expr) -> str:
    if isinstance(node, Binary):
        return BINARY_OPS[node.op]
    if isinstance(node, Unary):
        return {"-": "Neg", "+": "Pos", "!": "Not"}[node.op]
    return type(node).__name__
