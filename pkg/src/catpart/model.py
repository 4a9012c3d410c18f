"""Category-partition specification model and its text format.

A specification is a list of parameters and environment variables.  Each owns
ordered categories, each category owns ordered choices.  A choice is a
Boolean expression over the specification's variables, optionally annotated
with a selector over property names, a set of declared properties and an
error/single marker.

The text format::

    Specification: Triangle            (optional header)
    Parameter(2638): SA of type Integer
      Category 1 - Values for SA
        *Ch 1.1: Strictly positive
          SA > 0
          [properties SApositive]
        Ch 1.2: Negative or zero
          SA <= 0
          [error]

Expressions may wrap over several lines and annotation groups may be split
across lines or concatenated on one line.  ``#`` starts a comment.
"""

from __future__ import annotations

import enum
import re
import zlib
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

from .expr import Expr, ExprError, SemType, parse_expr, to_source, type_check
from .expr import types as T

# ---------------------------------------------------------------------------
# Errors


class SpecError(Exception):
    pass


class DslParseError(SpecError):
    def __init__(self, message: str, line: int, column: int = 1, expected: tuple[str, ...] = ()):
        text = f"line {line}, column {column}: {message}"
        if expected:
            text += f" (expected {' or '.join(expected)})"
        super().__init__(text)
        self.message = message
        self.line = line
        self.column = column
        self.expected = expected


class DuplicateId(SpecError):
    pass


class DuplicateName(SpecError):
    pass


class UnknownType(DslParseError):
    pass


class NotFound(SpecError):
    def __init__(self, ref: "ChoiceRef"):
        super().__init__(f"no choice {ref}")
        self.ref = ref


# ---------------------------------------------------------------------------
# Data model


class Special(enum.Enum):
    NONE = "none"
    ERROR = "error"
    SINGLE = "single"


_TYPE_NAMES = ("Boolean", "Character", "Integer", "IntegerSet", "Real", "String")
_SEM = {
    "Boolean": T.BOOL,
    "Character": T.CHAR,
    "Integer": T.INT,
    "IntegerSet": T.INTSET,
    "Real": T.REAL,
    "String": T.STR,
}


@dataclass(frozen=True)
class ParamType:
    kind: str
    values: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.kind == "Enumeration":
            if not self.values or len(set(self.values)) != len(self.values):
                raise SpecError("enumeration values must be non-empty and distinct")
        elif self.kind not in _TYPE_NAMES:
            raise SpecError(f"unknown type {self.kind}")

    def sem_type(self, param_name: str) -> SemType:
        if self.kind == "Enumeration":
            return SemType.enum_of(param_name)
        return _SEM[self.kind]

    def __str__(self) -> str:
        if self.kind == "Enumeration":
            return f"Enumeration({', '.join(self.values)})"
        return self.kind


@dataclass(frozen=True, order=True)
class ChoiceRef:
    param_id: int
    cat_index: int
    choice_index: int

    def __str__(self) -> str:
        return f"{self.param_id}Cat{self.cat_index}Ch{self.choice_index}"

    @property
    def category_key(self) -> tuple[int, int]:
        return (self.param_id, self.cat_index)

    @staticmethod
    def parse(text: str) -> "ChoiceRef":
        m = re.fullmatch(r"\s*(\d+)Cat(\d+)Ch(\d+)\s*", text)
        if not m:
            raise ValueError(f"not a choice reference: {text!r}")
        return ChoiceRef(int(m.group(1)), int(m.group(2)), int(m.group(3)))


@dataclass(frozen=True)
class Choice:
    index: int
    description: str
    expression: Expr
    properties: tuple[str, ...] = ()
    selector: Expr | None = None
    special: Special = Special.NONE

    @property
    def is_error(self) -> bool:
        return self.special is Special.ERROR

    @property
    def is_single(self) -> bool:
        return self.special is Special.SINGLE


@dataclass(frozen=True)
class Category:
    index: int
    description: str
    choices: tuple[Choice, ...]
    base_index: int | None = None

    @property
    def base(self) -> Choice | None:
        if self.base_index is None:
            return None
        return self.choices[self.base_index - 1]


@dataclass(frozen=True)
class Parameter:
    id: int
    name: str
    ptype: ParamType
    is_env: bool = False
    categories: tuple[Category, ...] = ()

    @property
    def sem_type(self) -> SemType:
        return self.ptype.sem_type(self.name)


@dataclass(frozen=True)
class TypedChoice:
    expression: Expr | None
    selector: Expr | None
    expression_error: ExprError | None = None
    selector_error: ExprError | None = None


@dataclass(frozen=True)
class CpSpec:
    name: str = "spec"
    parameters: tuple[Parameter, ...] = ()
    env_vars: tuple[Parameter, ...] = ()

    def __post_init__(self) -> None:
        seen_ids: set[int] = set()
        seen_names: set[str] = set()
        for p in self.all_params:
            if p.id in seen_ids:
                raise DuplicateId(f"duplicate parameter id {p.id}")
            if p.name in seen_names:
                raise DuplicateName(f"duplicate parameter name {p.name}")
            seen_ids.add(p.id)
            seen_names.add(p.name)

    # -- navigation ----------------------------------------------------
    @property
    def all_params(self) -> tuple[Parameter, ...]:
        return self.parameters + self.env_vars

    def param(self, param_id: int) -> Parameter:
        for p in self.all_params:
            if p.id == param_id:
                return p
        raise KeyError(param_id)

    def categories(self) -> Iterator[tuple[Parameter, Category]]:
        for p in self.all_params:
            for c in p.categories:
                yield p, c

    def choices(self) -> Iterator[tuple[ChoiceRef, Choice]]:
        for p, c in self.categories():
            for ch in c.choices:
                yield ChoiceRef(p.id, c.index, ch.index), ch

    def refs(self) -> list[ChoiceRef]:
        return [r for r, _ in self.choices()]

    def category_refs(self, param: Parameter, cat: Category) -> list[ChoiceRef]:
        return [ChoiceRef(param.id, cat.index, ch.index) for ch in cat.choices]

    def category(self, key: tuple[int, int]) -> Category:
        p = self.param(key[0])
        return p.categories[key[1] - 1]

    def resolve(self, ref: ChoiceRef) -> Choice:
        return resolve(self, ref)

    def base_ref(self, key: tuple[int, int]) -> ChoiceRef | None:
        cat = self.category(key)
        return None if cat.base_index is None else ChoiceRef(key[0], key[1], cat.base_index)

    # -- typing --------------------------------------------------------
    @cached_property
    def var_types(self) -> dict[str, SemType]:
        return {p.name: p.sem_type for p in self.all_params}

    @cached_property
    def enum_tables(self) -> dict[str, tuple[str, ...]]:
        return {p.name: p.ptype.values for p in self.all_params if p.ptype.kind == "Enumeration"}

    @cached_property
    def property_names(self) -> tuple[str, ...]:
        names: dict[str, None] = {}
        for _, ch in self.choices():
            for prop in ch.properties:
                names.setdefault(prop, None)
        return tuple(names)

    @cached_property
    def typed(self) -> dict[ChoiceRef, TypedChoice]:
        prop_env = {name: T.BOOL for name in self.property_names}
        out = {}
        for ref, ch in self.choices():
            expr = sel = None
            eerr = serr = None
            try:
                expr = type_check(ch.expression, self.var_types, self.enum_tables)
            except ExprError as e:
                eerr = e
            if ch.selector is not None:
                try:
                    sel = type_check(ch.selector, prop_env)
                except ExprError as e:
                    serr = e
            out[ref] = TypedChoice(expr, sel, eerr, serr)
        return out

    def typed_expression(self, ref: ChoiceRef) -> Expr:
        tc = self.typed[ref]
        if tc.expression is None:
            raise tc.expression_error  # type: ignore[misc]
        return tc.expression


def resolve(spec: CpSpec, ref: ChoiceRef) -> Choice:
    for p in spec.all_params:
        if p.id != ref.param_id:
            continue
        if 1 <= ref.cat_index <= len(p.categories):
            cat = p.categories[ref.cat_index - 1]
            if 1 <= ref.choice_index <= len(cat.choices):
                return cat.choices[ref.choice_index - 1]
    raise NotFound(ref)


def stable_id(name: str) -> int:
    """Positive 31-bit id derived from a name, used when the text omits ids."""
    return (zlib.crc32(name.encode()) & 0x7FFFFFFF) or 1


# ---------------------------------------------------------------------------
# Loading

_HEADER = re.compile(r"(Parameter|Variable)\s*(?:\(\s*(\d+)\s*\))?\s*:\s*([A-Za-z_]\w*)\s+of\s+type\s+(.*?)\s*$")
_SPEC_NAME = re.compile(r"Specification\s*:\s*(.*?)\s*$")
_CATEGORY = re.compile(r"Category\s+(\d+)\s*-\s*(.*?)\s*$")
_CHOICE = re.compile(r"(\*)?\s*Ch\s*(\d+)\.(\d+)\s*:?\s*(.*?)\s*$")
_ENUM = re.compile(r"Enumeration\s*\(\s*(.*?)\s*\)\s*$")
_IDENT = re.compile(r"[A-Za-z_]\w*")


def _strip_comment(line: str) -> str:
    quote = None
    for i, c in enumerate(line):
        if quote:
            if c == "\\":
                continue
            if c == quote:
                quote = None
        elif c in "\"'":
            quote = c
        elif c == "#":
            return line[:i]
    return line


def _classify(text: str) -> str:
    s = text.strip()
    if not s:
        return "blank"
    if _HEADER.match(s):
        return "header"
    if _CATEGORY.match(s):
        return "category"
    if _CHOICE.match(s):
        return "choice"
    if s.startswith("["):
        return "annotation"
    if _SPEC_NAME.match(s):
        return "name"
    return "text"


@dataclass
class _ChoiceDraft:
    line: int
    base: bool
    cat_no: int
    index: int
    description: str
    expr_lines: list[tuple[int, str]] = field(default_factory=list)
    annotations: list[tuple[int, int, str]] = field(default_factory=list)  # (line, col, text)


def _parse_type(text: str, line: int, column: int) -> ParamType:
    m = _ENUM.match(text)
    if m:
        values = tuple(v.strip() for v in m.group(1).split(",") if v.strip())
        bad = [v for v in values if not _IDENT.fullmatch(v)]
        if not values or bad:
            raise DslParseError("enumeration values must be identifiers", line, column)
        if len(set(values)) != len(values):
            raise DslParseError("duplicate enumeration value", line, column)
        return ParamType("Enumeration", values)
    if text in _TYPE_NAMES:
        return ParamType(text)
    if text == "Enumeration":
        raise UnknownType("Enumeration types must list their values, e.g. Enumeration(A, B)", line, column)
    raise UnknownType(f"unknown type {text!r}", line, column, _TYPE_NAMES + ("Enumeration(...)",))


def _parse_expression(lines: list[tuple[int, str]], what: str, anchor: int) -> Expr:
    if not lines:
        raise DslParseError(f"missing {what}", anchor, 1, ("expression",))
    first = lines[0][0]
    source = "\n".join(text for _, text in lines)
    try:
        return parse_expr(source)
    except ExprError as e:
        raise DslParseError(e.message, first + e.line - 1, e.column, tuple(getattr(e, "expected", ()))) from None


def _split_annotations(items: list[tuple[int, int, str]]) -> list[tuple[int, int, str]]:
    """Split concatenated ``[..][..]`` groups; returns (line, col, inner text)."""
    groups = []
    buf = ""
    depth = 0
    start = None
    for line, col, text in items:
        for k, c in enumerate(text):
            if depth == 0:
                if c == "[":
                    depth = 1
                    buf = ""
                    start = (line, col + k)
                elif not c.isspace():
                    raise DslParseError(f"unexpected {c!r} after annotation", line, col + k, ("[",))
                continue
            if c == "[":
                depth += 1
            elif c == "]":
                depth -= 1
                if depth == 0:
                    groups.append((start[0], start[1], buf))
                    continue
            buf += c
        if depth:
            buf += "\n"
    if depth:
        raise DslParseError("unterminated annotation", start[0], start[1], ("]",))
    return groups


def _build_choice(d: _ChoiceDraft) -> Choice:
    expr = _parse_expression(d.expr_lines, "choice expression", d.line)
    props: list[str] = []
    selector = None
    special = Special.NONE
    for line, col, inner in _split_annotations(d.annotations):
        body = inner.strip()
        word = body.split(None, 1)[0] if body else ""
        rest = body[len(word):]
        if word == "if":
            if selector is not None:
                raise DslParseError("duplicate [if] annotation", line, col)
            # Keep the selector text aligned with the file for error positions.
            offset = inner.index("if") + 2
            try:
                selector = parse_expr(inner[offset:])
            except ExprError as e:
                c = col + 1 + offset + e.column - 1 if e.line == 1 else e.column
                raise DslParseError(f"in selector: {e.message}", line + e.line - 1, c) from None
        elif word in ("error", "single") and not rest.strip():
            new = Special(word)
            if special is not Special.NONE and special is not new:
                raise DslParseError("a choice cannot be both error and single", line, col)
            special = new
        elif word == "properties":
            names = rest.split()
            if not names:
                raise DslParseError("[properties] needs at least one name", line, col)
            for n in names:
                if not _IDENT.fullmatch(n):
                    raise DslParseError(f"bad property name {n!r}", line, col)
                if n not in props:
                    props.append(n)
        else:
            raise DslParseError(f"unknown annotation [{body}]", line, col, ("if", "error", "single", "properties"))
    return Choice(d.index, d.description, expr, tuple(props), selector, special)


def load_spec(text: str, name: str | None = None) -> CpSpec:
    """Parse the text format into a :class:`CpSpec` (expressions untyped)."""
    spec_name = name
    params: list[Parameter] = []
    env_vars: list[Parameter] = []

    cur_param: dict | None = None
    cur_cat: dict | None = None
    cur_choice: _ChoiceDraft | None = None
    in_annotations = False
    ann_depth = 0

    def close_choice() -> None:
        nonlocal cur_choice, in_annotations
        if cur_choice is not None:
            assert cur_cat is not None
            cur_cat["choices"].append(_build_choice(cur_choice))
            cur_choice = None
        in_annotations = False

    def close_category() -> None:
        nonlocal cur_cat
        close_choice()
        if cur_cat is not None:
            assert cur_param is not None
            cur_param["categories"].append(
                Category(cur_cat["index"], cur_cat["desc"], tuple(cur_cat["choices"]), cur_cat["base"])
            )
            cur_cat = None

    def close_param() -> None:
        nonlocal cur_param
        close_category()
        if cur_param is not None:
            p = Parameter(
                cur_param["id"], cur_param["name"], cur_param["type"], cur_param["env"], tuple(cur_param["categories"])
            )
            (env_vars if p.is_env else params).append(p)
            cur_param = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        indent = len(line) - len(line.lstrip())
        kind = _classify(line)
        if kind == "blank":
            continue
        if in_annotations and ann_depth > 0:
            # continuation of a bracket group that wrapped
            assert cur_choice is not None
            cur_choice.annotations.append((lineno, 1, line))
            ann_depth += line.count("[") - line.count("]")
            continue
        s = line.strip()
        if kind == "name":
            if params or env_vars or cur_param:
                raise DslParseError("the Specification header must come first", lineno, indent + 1)
            spec_name = _SPEC_NAME.match(s).group(1)
            continue
        if kind == "header":
            close_param()
            m = _HEADER.match(s)
            pid = int(m.group(2)) if m.group(2) else stable_id(m.group(3))
            if pid <= 0:
                raise DslParseError("parameter ids must be positive", lineno, indent + 1)
            ptype = _parse_type(m.group(4), lineno, indent + s.index(m.group(4)) + 1)
            cur_param = dict(id=pid, name=m.group(3), type=ptype, env=m.group(1) == "Variable", categories=[])
            continue
        if kind == "category":
            if cur_param is None:
                raise DslParseError("category outside a parameter", lineno, indent + 1, ("Parameter", "Variable"))
            close_category()
            m = _CATEGORY.match(s)
            idx = int(m.group(1))
            expected_idx = len(cur_param["categories"]) + 1
            if idx != expected_idx:
                raise DslParseError(f"category number {idx} out of sequence (expected {expected_idx})", lineno, indent + 1)
            cur_cat = dict(index=idx, desc=m.group(2), choices=[], base=None)
            continue
        if kind == "choice":
            if cur_cat is None:
                raise DslParseError("choice outside a category", lineno, indent + 1, ("Category",))
            close_choice()
            m = _CHOICE.match(s)
            cat_no, idx = int(m.group(2)), int(m.group(3))
            expected_idx = len(cur_cat["choices"]) + 1
            if cat_no != cur_cat["index"] or idx != expected_idx:
                raise DslParseError(
                    f"choice number {cat_no}.{idx} out of sequence (expected {cur_cat['index']}.{expected_idx})",
                    lineno,
                    indent + 1,
                )
            if m.group(1):
                if cur_cat["base"] is not None:
                    raise DslParseError("a category has at most one base choice", lineno, indent + 1)
                cur_cat["base"] = idx
            cur_choice = _ChoiceDraft(lineno, bool(m.group(1)), cat_no, idx, m.group(4))
            continue
        if cur_choice is None:
            raise DslParseError(f"unexpected text {s[:20]!r}", lineno, indent + 1, ("Parameter", "Category", "Ch"))
        if kind == "annotation" or in_annotations:
            if kind != "annotation":
                raise DslParseError("expression text after annotations", lineno, indent + 1, ("[",))
            in_annotations = True
            cur_choice.annotations.append((lineno, 1, line))
            ann_depth = line.count("[") - line.count("]")
            continue
        cur_choice.expr_lines.append((lineno, line))
    close_param()
    return CpSpec(spec_name or "spec", tuple(params), tuple(env_vars))


# ---------------------------------------------------------------------------
# Saving


def _choice_lines(cat_index: int, ch: Choice, base: bool) -> list[str]:
    star = "*" if base else ""
    out = [f"    {star}Ch {cat_index}.{ch.index}: {ch.description}".rstrip(), f"      {to_source(ch.expression)}"]
    ann = ""
    if ch.selector is not None:
        ann += f"[if {to_source(ch.selector)}]"
    if ch.special is not Special.NONE:
        ann += f"[{ch.special.value}]"
    if ch.properties:
        ann += f"[properties {' '.join(ch.properties)}]"
    if ann:
        out.append(f"      {ann}")
    return out


def save_spec(spec: CpSpec) -> str:
    """Deterministic canonical text for ``spec``."""
    lines = [f"Specification: {spec.name}"]
    for p in spec.all_params:
        kw = "Variable" if p.is_env else "Parameter"
        lines.append(f"{kw}({p.id}): {p.name} of type {p.ptype}")
        for cat in p.categories:
            lines.append(f"  Category {cat.index} - {cat.description}".rstrip())
            for ch in cat.choices:
                lines.extend(_choice_lines(cat.index, ch, cat.base_index == ch.index))
    return "\n".join(lines) + "\n"
