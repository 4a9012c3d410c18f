"""Static typing of expression trees against a variable environment."""

from __future__ import annotations

from dataclasses import replace
from typing import Mapping

from . import builtins
from .ast import Binary, EnumLit, Expr, Literal, MethodCall, SetLiteral, Unary, VarRef
from .errors import BadArgument, NotBoolean, UnknownIdentifier, UnknownOperation
from .types import BOOL, INT, INTSET, REAL, STR, CHAR, SemType

EnumTables = Mapping[str, tuple[str, ...]]


def _pos(node: Expr) -> tuple[int, int]:
    return node.pos or (1, 1)


class TypeChecker:
    def __init__(self, env: Mapping[str, SemType], enums: EnumTables | None = None):
        self.env = env
        self.enums = dict(enums or {})
        # value name -> enum types declaring it
        self.owners: dict[str, list[str]] = {}
        for tname, values in self.enums.items():
            for v in values:
                self.owners.setdefault(v, []).append(tname)

    def check_bool(self, node: Expr) -> Expr:
        typed = self.check(node)
        if typed.ty != BOOL:
            line, col = _pos(node)
            raise NotBoolean(f"expression has type {typed.ty}, expected Bool", line, col)
        return typed

    # -- helpers -------------------------------------------------------
    def _bad(self, node: Expr, op: str, expected: str, found: SemType | None) -> BadArgument:
        line, col = _pos(node)
        return BadArgument(f"{op}: expected {expected}, found {found}", line, col)

    def _is_pending_enum(self, node: Expr) -> bool:
        return isinstance(node, VarRef) and node.name not in self.env and node.name in self.owners

    def _enum_lit(self, node: VarRef, tname: str) -> EnumLit:
        return EnumLit(node.name, ty=SemType.enum_of(tname), pos=node.pos)

    # -- dispatch ------------------------------------------------------
    def check(self, node: Expr) -> Expr:
        if isinstance(node, Literal):
            return replace(node, ty=SemType(node.kind))
        if isinstance(node, VarRef):
            if node.name in self.env:
                return replace(node, ty=self.env[node.name])
            owners = self.owners.get(node.name, [])
            if len(owners) == 1:
                return self._enum_lit(node, owners[0])
            line, col = _pos(node)
            if owners:
                raise UnknownIdentifier(f"ambiguous enumeration literal {node.name!r}", line, col)
            raise UnknownIdentifier(f"unknown identifier {node.name!r}", line, col)
        if isinstance(node, EnumLit):
            return self.check(VarRef(node.name, pos=node.pos))
        if isinstance(node, Unary):
            return self._unary(node)
        if isinstance(node, Binary):
            return self._binary(node)
        if isinstance(node, MethodCall):
            return self._call(node)
        if isinstance(node, SetLiteral):
            elems = []
            for e in node.elements:
                te = self.check(e)
                if te.ty != INT:
                    raise self._bad(e, "set literal", "Int", te.ty)
                elems.append(te)
            return replace(node, elements=tuple(elems), ty=INTSET)
        raise TypeError(f"not an expression node: {node!r}")

    def _unary(self, node: Unary) -> Expr:
        operand = self.check(node.operand)
        if node.op == "!":
            if operand.ty != BOOL:
                raise self._bad(node, "!", "Bool", operand.ty)
            return replace(node, operand=operand, ty=BOOL)
        if not operand.ty.is_numeric:
            raise self._bad(node, node.op, "Int or Real", operand.ty)
        return replace(node, operand=operand, ty=operand.ty)

    def _binary(self, node: Binary) -> Expr:
        op = node.op
        if op in ("==", "!="):
            return self._equality(node)
        left, right = self.check(node.left), self.check(node.right)
        if op in ("&&", "||"):
            for side in (left, right):
                if side.ty != BOOL:
                    raise self._bad(node, op, "Bool", side.ty)
            return replace(node, left=left, right=right, ty=BOOL)
        for side in (left, right):
            if not side.ty.is_numeric:
                raise self._bad(node, op, "Int or Real", side.ty)
        if op in ("<", ">", "<=", ">="):
            return replace(node, left=left, right=right, ty=BOOL)
        if op == "%":
            if left.ty != INT or right.ty != INT:
                raise self._bad(node, op, "Int", REAL)
            return replace(node, left=left, right=right, ty=INT)
        if op == "^":
            if right.ty != INT:
                raise self._bad(node, op, "Int exponent", right.ty)
            return replace(node, left=left, right=right, ty=left.ty)
        ty = INT if left.ty == INT and right.ty == INT else REAL
        return replace(node, left=left, right=right, ty=ty)

    def _equality(self, node: Binary) -> Expr:
        lp, rp = self._is_pending_enum(node.left), self._is_pending_enum(node.right)
        if lp and not rp:
            right = self.check(node.right)
            left = self._resolve_against(node.left, right.ty, node)
        elif rp and not lp:
            left = self.check(node.left)
            right = self._resolve_against(node.right, left.ty, node)
        else:
            left, right = self.check(node.left), self.check(node.right)
        lt, rt = left.ty, right.ty
        if not (lt == rt or (lt.is_numeric and rt.is_numeric)):
            raise self._bad(node, node.op, str(lt), rt)
        return replace(node, left=left, right=right, ty=BOOL)

    def _resolve_against(self, name_node: VarRef, other: SemType, ctx: Expr) -> Expr:
        if other.kind == "Enum" and other.enum in self.owners.get(name_node.name, []):
            return self._enum_lit(name_node, other.enum)
        if other.kind == "Enum":
            raise self._bad(ctx, ctx.op, f"a value of {other}", None)
        return self.check(name_node)

    def _call(self, node: MethodCall) -> Expr:
        line, col = _pos(node)
        if node.receiver is None:
            raise UnknownOperation(f"function {node.name!r} needs a receiver", line, col)
        receiver = self.check(node.receiver)
        candidates = builtins.lookup(receiver.ty, node.name)
        if not candidates:
            raise UnknownOperation(f"type {receiver.ty} has no operation {node.name!r}", line, col)
        args = [self.check(a) for a in node.args]
        arity_match = [s for s in candidates if len(s.params) == len(args)]
        if not arity_match:
            arities = sorted({len(s.params) for s in candidates})
            raise BadArgument(
                f"{node.name}: expected {' or '.join(map(str, arities))} argument(s), found {len(args)}", line, col
            )
        sig = arity_match[0]
        for k, (want, arg) in enumerate(zip(sig.params, args)):
            got = arg.ty
            ok = got == want or (want == REAL and got == INT) or (want == STR and got == CHAR and k in sig.char_ok)
            if not ok:
                raise self._bad(arg, f"{sig.name} argument {k + 1}", str(want), got)
        return replace(node, receiver=receiver, name=sig.name, args=tuple(args), ty=sig.result)


def type_check(node: Expr, env: Mapping[str, SemType], enums: EnumTables | None = None) -> Expr:
    """Annotate ``node`` with types; the top-level expression must be Bool."""
    return TypeChecker(env, enums).check_bool(node)


def infer(node: Expr, env: Mapping[str, SemType], enums: EnumTables | None = None) -> Expr:
    """Annotate without requiring a Bool result (used for sub-terms)."""
    return TypeChecker(env, enums).check(node)
