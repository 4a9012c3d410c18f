"""Choice-expression language: tokenizer, parser, type checker, interpreter."""

from .ast import Binary, EnumLit, Expr, Literal, MethodCall, SetLiteral, Unary, VarRef, free_vars, walk
from .errors import (
    BadArgument,
    ExprError,
    LexError,
    NotBoolean,
    ParseError,
    UnknownIdentifier,
    UnknownOperation,
    UnsupportedOperator,
    UnterminatedChar,
    UnterminatedString,
)
from .evaluate import compile_expr, evaluate, holds
from .lexer import Token, tokenize
from .parser import parse, parse_expr
from .printer import fully_parenthesized, to_source
from .typecheck import infer, type_check
from .types import (
    BOOL,
    CHAR,
    INT,
    INTSET,
    REAL,
    STR,
    DivisionByZero,
    EnumValue,
    EvalError,
    IndexOutOfRange,
    SemType,
    Value,
)

__all__ = [
    "BOOL",
    "CHAR",
    "INT",
    "INTSET",
    "REAL",
    "STR",
    "BadArgument",
    "Binary",
    "DivisionByZero",
    "EnumLit",
    "EnumValue",
    "EvalError",
    "Expr",
    "ExprError",
    "IndexOutOfRange",
    "LexError",
    "Literal",
    "MethodCall",
    "NotBoolean",
    "ParseError",
    "SemType",
    "SetLiteral",
    "Token",
    "Unary",
    "UnknownIdentifier",
    "UnknownOperation",
    "UnsupportedOperator",
    "UnterminatedChar",
    "UnterminatedString",
    "Value",
    "VarRef",
    "compile_expr",
    "evaluate",
    "free_vars",
    "fully_parenthesized",
    "holds",
    "infer",
    "parse",
    "parse_expr",
    "to_source",
    "tokenize",
    "type_check",
    "walk",
]
