"""Negation normal form of Boolean expressions over linear numeric literals.

The bounded engine reasons about a conjunction of *literals*:

* ``LinLit``: ``sum(a_i * col_i) + k  OP  0`` with OP one of ``<= < == !=``;
  a column is a numeric variable, ``v.length()``, ``v.size()`` or any other
  numeric sub-term that is not linear (kept opaque, evaluated once its
  variables are known),
* ``BoolLit`` / ``EnumLit``: a Boolean or enumeration variable fixed to a value,
* ``Disj``: a disjunction of conjunctions of literals,
* ``Check``: anything else, decided by the interpreter once its variables
  are assigned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from ..expr import BOOL, INT, Binary, EnumLit, Expr, Literal, MethodCall, Unary, VarRef, compile_expr, free_vars


@dataclass(frozen=True)
class Col:
    kind: str  # "var", "len", "size" or "term"
    name: str = ""
    term: Expr | None = None
    integral: bool = True

    def __repr__(self) -> str:
        if self.kind == "term":
            from ..expr import to_source

            return f"[{to_source(self.term)}]"
        return self.name if self.kind == "var" else f"{self.kind}({self.name})"


@dataclass(frozen=True)
class Lin:
    coeffs: tuple[tuple[Col, Fraction], ...]
    const: Fraction = Fraction(0)

    @staticmethod
    def of(col: Col) -> "Lin":
        return Lin(((col, Fraction(1)),))

    @staticmethod
    def constant(v) -> "Lin":
        return Lin((), Fraction(v))

    def scale(self, c: Fraction) -> "Lin":
        if c == 0:
            return Lin.constant(0)
        return Lin(tuple((col, a * c) for col, a in self.coeffs), self.const * c)

    def plus(self, other: "Lin") -> "Lin":
        acc: dict[Col, Fraction] = dict(self.coeffs)
        for col, a in other.coeffs:
            acc[col] = acc.get(col, Fraction(0)) + a
        items = tuple(sorted(((c, a) for c, a in acc.items() if a != 0), key=lambda ca: repr(ca[0])))
        return Lin(items, self.const + other.const)

    def minus(self, other: "Lin") -> "Lin":
        return self.plus(other.scale(Fraction(-1)))

    @property
    def is_constant(self) -> bool:
        return not self.coeffs


@dataclass(frozen=True)
class LinLit:
    lin: Lin
    op: str  # "<=", "<", "==", "!="

    def negate(self) -> "LinLit":
        if self.op == "==":
            return LinLit(self.lin, "!=")
        if self.op == "!=":
            return LinLit(self.lin, "==")
        neg = self.lin.scale(Fraction(-1))
        return LinLit(neg, "<" if self.op == "<=" else "<=")


@dataclass(frozen=True)
class BoolLit:
    name: str
    value: bool


@dataclass(frozen=True)
class EnumEq:
    name: str
    value: str
    positive: bool


@dataclass(frozen=True)
class Disj:
    options: tuple[tuple["Lit", ...], ...]


@dataclass(frozen=True)
class Check:
    node: Expr
    positive: bool


@dataclass(frozen=True)
class Const:
    value: bool


Lit = Union[LinLit, BoolLit, EnumEq, Disj, Check, Const]


# ---------------------------------------------------------------------------
# Linearisation


def linearize(node: Expr) -> Lin:
    """Linear form of a numeric term; non-linear parts become opaque columns."""
    if isinstance(node, Literal):
        return Lin.constant(node.value)
    if isinstance(node, VarRef):
        return Lin.of(Col("var", node.name, integral=node.ty == INT))
    if isinstance(node, Unary):
        inner = linearize(node.operand)
        return inner.scale(Fraction(-1)) if node.op == "-" else inner
    if isinstance(node, Binary):
        if node.op in ("+", "-"):
            left, right = linearize(node.left), linearize(node.right)
            return left.plus(right) if node.op == "+" else left.minus(right)
        if node.op == "*":
            left, right = linearize(node.left), linearize(node.right)
            if left.is_constant:
                return right.scale(left.const)
            if right.is_constant:
                return left.scale(right.const)
        if node.op == "/" and node.ty != INT:
            left, right = linearize(node.left), linearize(node.right)
            if right.is_constant and right.const != 0:
                return left.scale(1 / right.const)
        if not free_vars(node):
            # closed sub-term such as 2^10: fold it (errors stay opaque)
            try:
                return Lin.constant(compile_expr(node)({}))
            except Exception:
                pass
    if isinstance(node, MethodCall) and not node.args and isinstance(node.receiver, VarRef):
        if node.name == "length":
            return Lin.of(Col("len", node.receiver.name))
        if node.name == "size":
            return Lin.of(Col("size", node.receiver.name))
    return Lin.of(Col("term", term=node, integral=node.ty == INT))


# ---------------------------------------------------------------------------
# Normal form

_FLIP = {"<": ">", ">": "<", "<=": ">=", ">=": "<="}


def _compare(op: str, left: Expr, right: Expr) -> LinLit:
    ll, rl = linearize(left), linearize(right)
    if op in ("<", "<="):
        return LinLit(ll.minus(rl), op)
    if op in (">", ">="):
        return LinLit(rl.minus(ll), _FLIP[op])
    return LinLit(ll.minus(rl), op)


def literals(node: Expr, positive: bool = True) -> list[Lit]:
    """Conjunction of literals equivalent (on error-free bindings) to ``node``."""
    if isinstance(node, Literal) and node.kind == "Bool":
        return [Const(bool(node.value) is positive)]
    if isinstance(node, Unary) and node.op == "!":
        return literals(node.operand, not positive)
    if isinstance(node, VarRef) and node.ty == BOOL:
        return [BoolLit(node.name, positive)]
    if isinstance(node, Binary):
        op = node.op
        if op in ("&&", "||"):
            conj = (op == "&&") == positive
            left, right = literals(node.left, positive), literals(node.right, positive)
            if conj:
                return left + right
            return [_disj([left, right])]
        if op in ("<", ">", "<=", ">=") or (op in ("==", "!=") and node.left.ty.is_numeric):
            lit = _compare(op, node.left, node.right)
            return [lit if positive else lit.negate()]
        if op in ("==", "!="):
            same = (op == "==") == positive
            if node.left.ty == BOOL:
                for a, b in ((node.left, node.right), (node.right, node.left)):
                    if isinstance(b, Literal):
                        return literals(a, bool(b.value) == same)
                both = literals(node.left, True) + literals(node.right, True)
                neither = literals(node.left, False) + literals(node.right, False)
                if same:
                    return [_disj([both, neither])]
                return [_disj([literals(node.left, True) + literals(node.right, False),
                               literals(node.left, False) + literals(node.right, True)])]
            if node.left.ty.kind == "Enum":
                for a, b in ((node.left, node.right), (node.right, node.left)):
                    if isinstance(a, VarRef) and isinstance(b, EnumLit):
                        return [EnumEq(a.name, b.name, same)]
    return [Check(node, positive)]


def _disj(options: list[list[Lit]]) -> Lit:
    flat: list[tuple[Lit, ...]] = []
    for opt in options:
        if any(isinstance(x, Const) and not x.value for x in opt):
            continue
        opt = [x for x in opt if not isinstance(x, Const)]
        if not opt:
            return Const(True)
        if len(opt) == 1 and isinstance(opt[0], Disj):
            flat.extend(opt[0].options)
        else:
            flat.append(tuple(opt))
    if not flat:
        return Const(False)
    return Disj(tuple(flat))


def lit_vars(lit: Lit) -> set[str]:
    if isinstance(lit, LinLit):
        out: set[str] = set()
        for col, _ in lit.lin.coeffs:
            out |= col_vars(col)
        return out
    if isinstance(lit, (BoolLit, EnumEq)):
        return {lit.name}
    if isinstance(lit, Disj):
        return set().union(*(lit_vars(x) for opt in lit.options for x in opt))
    if isinstance(lit, Check):
        return free_vars(lit.node)
    return set()


def col_vars(col: Col) -> set[str]:
    if col.kind == "term":
        return free_vars(col.term)
    return {col.name}
