"""Semantic types and runtime values of the choice-expression language.

Values use plain Python objects wherever the mapping is unambiguous:

==========  ==============================
SemType     Python value
==========  ==============================
Bool        ``bool``
Int         ``int``
Real        ``fractions.Fraction``
Str         ``str``
Char        ``str`` of length one
IntSet      ``frozenset[int]``
Enum(T)     :class:`EnumValue`
==========  ==============================

Str and Char share a Python representation; the static type carried by the
typed AST tells them apart.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union


@dataclass(frozen=True)
class SemType:
    kind: str
    enum: str | None = None

    def __str__(self) -> str:
        return f"Enum({self.enum})" if self.kind == "Enum" else self.kind

    @property
    def is_numeric(self) -> bool:
        return self.kind in ("Int", "Real")

    @staticmethod
    def enum_of(name: str) -> "SemType":
        return SemType("Enum", name)


BOOL = SemType("Bool")
INT = SemType("Int")
REAL = SemType("Real")
STR = SemType("Str")
CHAR = SemType("Char")
INTSET = SemType("IntSet")


@dataclass(frozen=True, order=True)
class EnumValue:
    type_name: str
    name: str

    def __str__(self) -> str:
        return self.name


Value = Union[bool, int, Fraction, str, frozenset, EnumValue]


class EvalError(Exception):
    """A partial operation was applied outside its domain.

    Raised by the interpreter; search engines read it as "this binding is
    not a model" rather than as a failure of the tool.
    """


class DivisionByZero(EvalError):
    pass


class IndexOutOfRange(EvalError):
    def __init__(self, op: str, index: int):
        super().__init__(f"{op}: index {index} out of range")
        self.op = op
        self.index = index


def is_value_of(value: object, ty: SemType) -> bool:
    """Check that ``value`` is a well-formed runtime value of type ``ty``."""
    k = ty.kind
    if k == "Bool":
        return isinstance(value, bool)
    if k == "Int":
        return isinstance(value, int) and not isinstance(value, bool)
    if k == "Real":
        return isinstance(value, (Fraction, int)) and not isinstance(value, bool)
    if k == "Str":
        return isinstance(value, str)
    if k == "Char":
        return isinstance(value, str) and len(value) == 1
    if k == "IntSet":
        return isinstance(value, frozenset) and all(
            isinstance(x, int) and not isinstance(x, bool) for x in value
        )
    if k == "Enum":
        return isinstance(value, EnumValue) and value.type_name == ty.enum
    return False


def render_value(value: object, ty: SemType | None = None) -> str:
    """Render a value the way fixture listings show it (without quotes)."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, frozenset):
        return ", ".join(str(x) for x in sorted(value))
    if isinstance(value, EnumValue):
        return value.name
    return str(value)


def parse_value(text: str, ty: SemType) -> Value:
    """Inverse of :func:`render_value` for a known type."""
    k = ty.kind
    if k == "Bool":
        if text not in ("true", "false"):
            raise ValueError(f"not a Boolean: {text!r}")
        return text == "true"
    if k == "Int":
        return int(text)
    if k == "Real":
        return Fraction(text.replace(" ", ""))
    if k == "Str":
        return text
    if k == "Char":
        if len(text) != 1:
            raise ValueError(f"not a character: {text!r}")
        return text
    if k == "IntSet":
        parts = [p.strip() for p in text.split(",") if p.strip()]
        return frozenset(int(p) for p in parts)
    if k == "Enum":
        return EnumValue(ty.enum or "", text.strip())
    raise ValueError(f"unknown type {ty}")
