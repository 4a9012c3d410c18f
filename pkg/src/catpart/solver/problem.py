"""Satisfiability problems built from frames, and their results."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Mapping, Union

from ..expr import CHAR, STR, Expr, SemType, free_vars, parse_expr, type_check
from ..expr.builtins import ALNUM
from ..expr.types import Value

DIGITS_LOWER_UPPER = "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
DEFAULT_ALPHABET = DIGITS_LOWER_UPPER

Label = Hashable


@dataclass(frozen=True)
class Bounds:
    """Finite domains for the bounded engine (and the SMT set universe)."""

    int_lo: int = -10
    int_hi: int = 1000
    real_numerator: int = 1000  # |p| for grid points p/q
    real_denominator: int = 4  # 1 <= q <= this
    max_string_len: int = 5
    alphabet: str = DEFAULT_ALPHABET
    set_universe: int = 24  # sets range over {0..set_universe}
    node_budget: int = 200_000

    def __post_init__(self) -> None:
        if self.int_lo > self.int_hi:
            raise ValueError("empty integer range")
        if self.real_denominator < 1 or self.max_string_len < 0 or self.set_universe < 0:
            raise ValueError("bounds must be non-negative")
        if not self.alphabet or len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("alphabet must be non-empty and duplicate-free")


@dataclass(frozen=True)
class SolveProblem:
    declarations: dict[str, SemType]
    labeled_assertions: list[tuple[Label, Expr]]
    global_constraints: list[Expr] = field(default_factory=list)
    enums: dict[str, tuple[str, ...]] = field(default_factory=dict)
    alphabet: str = DEFAULT_ALPHABET

    def __post_init__(self) -> None:
        for label, expr in self.labeled_assertions:
            missing = free_vars(expr) - set(self.declarations)
            if missing:
                raise ValueError(f"assertion {label} uses undeclared {sorted(missing)}")

    @property
    def labels(self) -> list[Label]:
        return [lab for lab, _ in self.labeled_assertions]

    def restricted(self, keep: set) -> "SolveProblem":
        """The same problem with only the assertions whose label is in ``keep``."""
        return SolveProblem(
            self.declarations,
            [(lab, e) for lab, e in self.labeled_assertions if lab in keep],
            self.global_constraints,
            self.enums,
            self.alphabet,
        )


# ---------------------------------------------------------------------------
# Results


class UnknownReason(enum.Enum):
    TIMEOUT = "Timeout"
    RESOURCE_LIMIT = "ResourceLimit"
    BACKEND_ERROR = "BackendError"


@dataclass(frozen=True)
class Sat:
    model: dict[str, Value]

    @property
    def verdict(self) -> str:
        return "sat"


@dataclass(frozen=True)
class Unsat:
    core: frozenset
    bounds_relative: bool = False

    @property
    def verdict(self) -> str:
        return "unsat"


@dataclass(frozen=True)
class Unknown:
    reason: UnknownReason
    detail: str = ""

    @property
    def verdict(self) -> str:
        return "unknown"


SolveResult = Union[Sat, Unsat, Unknown]


class UnsupportedForBackend(Exception):
    def __init__(self, op: str):
        super().__init__(f"operation {op} has no encoding for this backend")
        self.op = op


class EngineFailure(Exception):
    """The external solver could not be started or talked to."""


# ---------------------------------------------------------------------------
# Alphabet restriction


def alphabet_constraints(declarations: Mapping[str, SemType], alphabet: str) -> list[Expr]:
    """Interpreter-checkable restriction of strings and characters to the alphabet.

    Only the alphanumeric alphabet (or a subset of it) has a builtin predicate;
    for other alphabets the engines enforce the restriction directly.
    """
    if not set(alphabet) <= ALNUM:
        return []
    out = []
    for name, ty in declarations.items():
        if ty == STR:
            src = f"{name}.isEmpty() || {name}.Alphanumeric()"
        elif ty == CHAR:
            src = f"{name}.isLetterOrDigit()"
        else:
            continue
        out.append(type_check(parse_expr(src), {name: ty}))
    return out


def make_problem(
    declarations: Mapping[str, SemType],
    assertions: list[tuple[Label, Expr]],
    enums: Mapping[str, tuple[str, ...]] | None = None,
    alphabet: str = DEFAULT_ALPHABET,
) -> SolveProblem:
    decls = dict(declarations)
    return SolveProblem(decls, list(assertions), alphabet_constraints(decls, alphabet), dict(enums or {}), alphabet)


def default_value(ty: SemType, bounds: Bounds, enums: Mapping[str, tuple[str, ...]]) -> Value:
    from ..expr.types import EnumValue

    k = ty.kind
    if k == "Bool":
        return False
    if k == "Int":
        return min(max(0, bounds.int_lo), bounds.int_hi)
    if k == "Real":
        return Fraction(min(max(0, bounds.int_lo), bounds.int_hi))
    if k == "Str":
        return ""
    if k == "Char":
        return bounds.alphabet[0]
    if k == "IntSet":
        return frozenset()
    values = enums.get(ty.enum or "", ())
    return EnumValue(ty.enum or "", values[0]) if values else EnumValue(ty.enum or "", "")
