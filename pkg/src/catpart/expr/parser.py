"""Recursive-descent parser following the expression grammar level by level.

Method calls live at the multiplicative level: ``a.f()`` is a ``DOT`` whose
right operand must be a function application, applied to everything parsed
so far at that level.  ``x * s.length()`` therefore means ``(x * s).length()``
and ``!s.isEmpty()`` means ``(!s).isEmpty()``; write ``!(s.isEmpty())``.
"""

from __future__ import annotations

from fractions import Fraction

from .ast import Binary, Expr, Literal, MethodCall, SetLiteral, Unary, VarRef
from .errors import ParseError, UnsupportedOperator
from .lexer import Token, tokenize, unescape_string

_UNSUPPORTED = {"BIT_AND": "&", "BIT_OR": "|", "LSHIFT": "<<", "TILDE": "~"}

_EQ_OPS = {"EQ": "==", "NE": "!="}
_REL_OPS = {"LT": "<", "GT": ">", "LE": "<=", "GE": ">="}
_ADD_OPS = {"PLUS": "+", "MINUS": "-"}
_MUL_OPS = {"MUL": "*", "DIV": "/", "MOD": "%"}
_PRIMARY_START = (
    "INTEGER_LITERAL",
    "FLOATING_POINT_LITERAL",
    "STRING_LITERAL",
    "CHARACTER_LITERAL",
    "IDENTIFIER",
    "LPAREN",
    "LBRACE",
)


class Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    # -- token helpers -------------------------------------------------
    @property
    def cur(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self) -> Token:
        t = self.cur
        self.i += 1
        return t

    def expect(self, kind: str) -> Token:
        if self.cur.kind != kind:
            self.fail(f"unexpected {self._describe(self.cur)}", (kind,))
        return self.take()

    def fail(self, message: str, expected: tuple[str, ...]) -> None:
        t = self.cur
        if t.kind in _UNSUPPORTED:
            raise UnsupportedOperator(f"operator {_UNSUPPORTED[t.kind]!r} is not supported", t.line, t.column)
        if t.kind == "LBRACKET":
            raise UnsupportedOperator("bracketed list expressions are not supported", t.line, t.column)
        raise ParseError(message, t.line, t.column, expected)

    @staticmethod
    def _describe(t: Token) -> str:
        return "end of input" if t.kind == "EOF" else repr(t.lexeme)

    # -- grammar -------------------------------------------------------
    def parse(self) -> Expr:
        e = self.expression()
        if self.cur.kind != "EOF":
            self.fail(f"unexpected {self._describe(self.cur)}", ("SC_OR", "SC_AND", "EOF"))
        return e

    def _binary_level(self, sub, ops: dict[str, str]) -> Expr:
        left = sub()
        while self.cur.kind in ops:
            t = self.take()
            right = sub()
            left = Binary(ops[t.kind], left, right, pos=(t.line, t.column))
        return left

    def expression(self) -> Expr:
        return self._binary_level(self.and_expression, {"SC_OR": "||"})

    def and_expression(self) -> Expr:
        return self._binary_level(self.equal_expression, {"SC_AND": "&&"})

    def equal_expression(self) -> Expr:
        return self._binary_level(self.relational_expression, _EQ_OPS)

    def relational_expression(self) -> Expr:
        return self._binary_level(self.additive_expression, _REL_OPS)

    def additive_expression(self) -> Expr:
        return self._binary_level(self.multiplicative_expression, _ADD_OPS)

    def multiplicative_expression(self) -> Expr:
        left = self.unary_expression()
        while True:
            k = self.cur.kind
            if k in _MUL_OPS:
                t = self.take()
                right = self.unary_expression()
                left = Binary(_MUL_OPS[k], left, right, pos=(t.line, t.column))
            elif k == "DOT":
                self.take()
                name_tok = self.expect("IDENTIFIER")
                if self.cur.kind != "LPAREN":
                    self.fail("a method name must be followed by an argument list", ("LPAREN",))
                args = self.argument_list()
                left = MethodCall(left, name_tok.lexeme, args, pos=(name_tok.line, name_tok.column))
            else:
                return left

    def unary_expression(self) -> Expr:
        t = self.cur
        if t.kind in ("PLUS", "MINUS", "NOT"):
            self.take()
            operand = self.unary_expression()
            op = {"PLUS": "+", "MINUS": "-", "NOT": "!"}[t.kind]
            return Unary(op, operand, pos=(t.line, t.column))
        return self.power_expression()

    def power_expression(self) -> Expr:
        base = self.primary()
        if self.cur.kind == "POWER":
            t = self.take()
            exponent = self.unary_expression()
            return Binary("^", base, exponent, pos=(t.line, t.column))
        return base

    def primary(self) -> Expr:
        t = self.cur
        pos = (t.line, t.column)
        if t.kind == "INTEGER_LITERAL":
            self.take()
            return Literal(int(t.lexeme), "Int", pos=pos)
        if t.kind == "FLOATING_POINT_LITERAL":
            self.take()
            return Literal(Fraction(t.lexeme), "Real", pos=pos)
        if t.kind == "STRING_LITERAL":
            self.take()
            return Literal(unescape_string(t.lexeme[1:-1]), "Str", pos=pos)
        if t.kind == "CHARACTER_LITERAL":
            self.take()
            return Literal(t.lexeme[1], "Char", pos=pos)
        if t.kind == "IDENTIFIER":
            self.take()
            if self.cur.kind == "LPAREN":
                args = self.argument_list()
                return MethodCall(None, t.lexeme, args, pos=pos)
            if t.lexeme in ("true", "false"):
                return Literal(t.lexeme == "true", "Bool", pos=pos)
            return VarRef(t.lexeme, pos=pos)
        if t.kind == "LPAREN":
            self.take()
            e = self.expression()
            self.expect("RPAREN")
            return e
        if t.kind == "LBRACE":
            self.take()
            elems: list[Expr] = []
            if self.cur.kind != "RBRACE":
                elems.append(self.expression())
                while self.cur.kind == "COMMA":
                    self.take()
                    elems.append(self.expression())
            self.expect("RBRACE")
            return SetLiteral(tuple(elems), pos=pos)
        self.fail(f"unexpected {self._describe(t)}", _PRIMARY_START)
        raise AssertionError("unreachable")

    def argument_list(self) -> tuple[Expr, ...]:
        self.expect("LPAREN")
        args: list[Expr] = []
        if self.cur.kind != "RPAREN":
            args.append(self.expression())
            while self.cur.kind == "COMMA":
                self.take()
                args.append(self.expression())
        self.expect("RPAREN")
        return tuple(args)


def parse(tokens: list[Token]) -> Expr:
    return Parser(tokens).parse()


def parse_expr(source: str) -> Expr:
    return parse(tokenize(source))
