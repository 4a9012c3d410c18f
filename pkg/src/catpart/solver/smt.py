"""SMT-LIB 2 emission and an external solver process (``z3 -in`` by default).

Every expression is compiled to a pair ``(value, defined)``.  ``defined`` is
the condition under which the interpreter would finish without an error, so
an assertion ``e`` becomes ``defined(e) and value(e)``, matching the
interpreter's notion of a constraint that holds.  ``&&`` and ``||`` keep their
short-circuit behaviour in ``defined``.

Integer sets never appear as SMT arrays in formulas: a set-valued term is a
list of Boolean terms, one per element of the universe ``0..K``.  Variables
are still declared as ``(Array Int Bool)`` and read with ``select``.
"""

from __future__ import annotations

import os
import shutil
import subprocess
import time
from dataclasses import dataclass, field
from fractions import Fraction

from ..expr import (
    INT,
    REAL,
    Binary,
    EnumLit,
    EnumValue,
    Expr,
    Literal,
    MethodCall,
    SemType,
    SetLiteral,
    Unary,
    VarRef,
    compile_expr,
    holds,
)
from ..expr import builtins as B
from .problem import (
    Bounds,
    EngineFailure,
    Label,
    Sat,
    SolveProblem,
    SolveResult,
    Unknown,
    UnknownReason,
    Unsat,
    UnsupportedForBackend,
    default_value,
)

TRUE, FALSE = "true", "false"


def _and(*parts: str) -> str:
    parts = tuple(p for p in parts if p != TRUE)
    if FALSE in parts:
        return FALSE
    if not parts:
        return TRUE
    return parts[0] if len(parts) == 1 else f"(and {' '.join(parts)})"


def _or(*parts: str) -> str:
    parts = tuple(p for p in parts if p != FALSE)
    if TRUE in parts:
        return TRUE
    if not parts:
        return FALSE
    return parts[0] if len(parts) == 1 else f"(or {' '.join(parts)})"


def _not(p: str) -> str:
    return FALSE if p == TRUE else TRUE if p == FALSE else f"(not {p})"


def smt_string(text: str) -> str:
    out = []
    for ch in text:
        code = ord(ch)
        if ch == '"':
            out.append('""')
        elif 32 <= code < 127 and ch != "\\":
            out.append(ch)
        else:
            out.append(f"\\u{{{code:x}}}")
    return '"' + "".join(out) + '"'


def smt_int(v: int) -> str:
    return str(v) if v >= 0 else f"(- {-v})"


def smt_real(v) -> str:
    v = Fraction(v)
    num = f"{abs(v.numerator)}.0"
    body = num if v.denominator == 1 else f"(/ {num} {v.denominator}.0)"
    return body if v >= 0 else f"(- {body})"


def _ranges(chars) -> str:
    """A regular expression matching exactly one character of ``chars``."""
    codes = sorted({ord(c) for c in chars})
    if not codes:
        return "re.none"
    parts = []
    start = prev = codes[0]
    for c in codes[1:] + [None]:
        if c is not None and c == prev + 1:
            prev = c
            continue
        lo, hi = smt_string(chr(start)), smt_string(chr(prev))
        parts.append(f"(str.to_re {lo})" if start == prev else f"(re.range {lo} {hi})")
        if c is not None:
            start = prev = c
    return parts[0] if len(parts) == 1 else f"(re.union {' '.join(parts)})"


_ANY = "(re.* re.allchar)"


def _contains_class(chars) -> str:
    return f"(re.++ {_ANY} {_ranges(chars)} {_ANY})"


_HEX = _ranges(B.HEX_CHARS)
_NON_HEX = f"(re.inter re.allchar (re.comp {_HEX}))"
_EVEN_HEX = f"(re.++ (re.* (re.++ (re.* {_NON_HEX}) {_HEX} (re.* {_NON_HEX}) {_HEX})) (re.* {_NON_HEX}))"
_ODD_HEX = f"(re.++ {_EVEN_HEX} {_HEX} (re.* {_NON_HEX}))"


def _hex_family(name: str, s: str) -> str:
    if name.startswith("NoHexadecimal"):
        return f"(str.in_re {s} (re.* {_NON_HEX}))"
    if name.startswith("AllHexadecimal"):
        return f"(str.in_re {s} (re.+ {_HEX}))"
    if name.startswith("MixHexadecimal"):
        return _and(f"(str.in_re {s} (re.++ {_ANY} {_HEX} {_ANY}))", f"(str.in_re {s} (re.++ {_ANY} {_NON_HEX} {_ANY}))")
    if name.startswith("OddNumber"):
        return f"(str.in_re {s} {_ODD_HEX})"
    return f"(str.in_re {s} {_EVEN_HEX})"


_ALL_IN = {
    "Alphanumeric": B.ALNUM,
    "AllLowercaseCharacters": B.LOWER,
    "AllUppercaseCharacters": B.UPPER,
    "AllNumericalCharacters": B.DIGITS,
    "AllLowercaseHexadecimal": B.DIGITS | B.LOWER_HEX_LETTERS,
    "AllUppercaseHexadecimal": B.DIGITS | B.UPPER_HEX_LETTERS,
}

_CHAR_IN = {
    "isDigit": B.DIGITS,
    "isLetter": B.LETTERS,
    "isLetterOrDigit": B.ALNUM,
    "isLowerCase": B.LOWER,
    "isUpperCase": B.UPPER,
    "isLegal": B.ALNUM | {" "},
    "isSpace": frozenset(" "),
    "isHexadecimal": B.HEX_CHARS,
}


def enum_constructor(type_name: str, value: str) -> str:
    return f"{type_name}__{value}"


def _sym(name: str) -> str:
    return name if name.replace("_", "a").isalnum() and not name[0].isdigit() else f"|{name}|"


class Encoder:
    """Compiles typed expressions to SMT-LIB terms."""

    def __init__(self, declarations: dict[str, SemType], universe: int):
        self.decl = declarations
        self.universe = universe
        self.aux: list[tuple[str, str]] = []  # (name, sort)
        self.aux_facts: list[str] = []

    def fresh(self, sort: str) -> str:
        name = f"aux__{len(self.aux)}"
        self.aux.append((name, sort))
        return name

    # -- top level -------------------------------------------------------
    def assertion(self, node: Expr) -> str:
        v, d = self.term(node)
        return _and(d, v)

    def _num(self, node: Expr, want_real: bool) -> tuple[str, str]:
        v, d = self.term(node)
        if want_real and node.ty == INT:
            v = f"(to_real {v})"
        return v, d

    def term(self, node: Expr) -> tuple[str, str]:
        """``(value, defined)`` of a non-set expression."""
        if isinstance(node, Literal):
            k = node.kind
            if k == "Bool":
                return (TRUE if node.value else FALSE), TRUE
            if k == "Int":
                return smt_int(node.value), TRUE
            if k == "Real":
                return smt_real(node.value), TRUE
            return smt_string(node.value), TRUE
        if isinstance(node, VarRef):
            if node.ty.kind == "IntSet":
                raise UnsupportedForBackend("set-valued term outside a set operation")
            return _sym(node.name), TRUE
        if isinstance(node, EnumLit):
            return enum_constructor(node.ty.enum, node.name), TRUE
        if isinstance(node, Unary):
            v, d = self.term(node.operand)
            if node.op == "!":
                return _not(v), d
            return (f"(- {v})" if node.op == "-" else v), d
        if isinstance(node, Binary):
            return self._binary(node)
        if isinstance(node, MethodCall):
            return self._method(node)
        raise UnsupportedForBackend(type(node).__name__)

    def _binary(self, node: Binary) -> tuple[str, str]:
        op = node.op
        if op in ("&&", "||"):
            lv, ld = self.term(node.left)
            rv, rd = self.term(node.right)
            if op == "&&":
                return _and(lv, rv), _and(ld, _or(_not(lv), rd))
            return _or(lv, rv), _and(ld, _or(lv, rd))
        lt, rt = node.left.ty, node.right.ty
        if op in ("==", "!=") and lt.kind == "IntSet":
            a, da = self.set_term(node.left)
            b, db = self.set_term(node.right)
            eq = _and(*(f"(= {x} {y})" for x, y in zip(a, b)))
            return (eq if op == "==" else _not(eq)), _and(da, db)
        if op in ("==", "!=", "<", ">", "<=", ">="):
            real = lt.is_numeric and (lt == REAL or rt == REAL)
            lv, ld = self._num(node.left, real)
            rv, rd = self._num(node.right, real)
            if op == "==":
                v = f"(= {lv} {rv})"
            elif op == "!=":
                v = f"(not (= {lv} {rv}))"
            else:
                v = f"({op} {lv} {rv})"
            return v, _and(ld, rd)
        real = node.ty == REAL
        lv, ld = self._num(node.left, real)
        if op == "^":
            if not isinstance(node.right, Literal):
                raise UnsupportedForBackend("^ with a non-constant exponent")
            n = node.right.value
            if n < 0:
                return lv, FALSE
            if n == 0:
                return ("1.0" if real else "1"), ld
            return (lv if n == 1 else f"(* {' '.join([lv] * n)})"), ld
        rv, rd = self._num(node.right, real)
        d = _and(ld, rd)
        if op in ("+", "-", "*"):
            return f"({op} {lv} {rv})", d
        nonzero = f"(not (= {rv} {'0.0' if real else '0'}))"
        if op == "/" and real:
            return f"(/ {lv} {rv})", _and(d, nonzero)
        quotient = f"(ite (= (>= {lv} 0) (>= {rv} 0)) (div (abs {lv}) (abs {rv})) (- (div (abs {lv}) (abs {rv}))))"
        if op == "/":
            return quotient, _and(d, nonzero)
        if op == "%":
            return f"(- {lv} (* {rv} {quotient}))", _and(d, nonzero)
        raise UnsupportedForBackend(op)

    # -- sets --------------------------------------------------------------
    def set_term(self, node: Expr) -> tuple[list[str], str]:
        idx = range(self.universe + 1)
        if isinstance(node, VarRef):
            return [f"(select {_sym(node.name)} {i})" for i in idx], TRUE
        if isinstance(node, SetLiteral):
            parts = [self.term(e) for e in node.elements]
            return [_or(*(f"(= {v} {i})" for v, _ in parts)) for i in idx], _and(*(d for _, d in parts))
        if isinstance(node, MethodCall) and node.name in ("intersection", "union", "difference"):
            a, da = self.set_term(node.receiver)
            b, db = self.set_term(node.args[0])
            if node.name == "intersection":
                out = [_and(x, y) for x, y in zip(a, b)]
            elif node.name == "union":
                out = [_or(x, y) for x, y in zip(a, b)]
            else:
                out = [_and(x, _not(y)) for x, y in zip(a, b)]
            return out, _and(da, db)
        raise UnsupportedForBackend(f"set expression {type(node).__name__}")

    def _set_method(self, node: MethodCall) -> tuple[str, str]:
        a, d = self.set_term(node.receiver)
        name = node.name
        if name == "size":
            return f"(+ 0 {' '.join(f'(ite {x} 1 0)' for x in a)})", d
        if name == "isEmpty":
            return _and(*(_not(x) for x in a)), d
        if name == "contains":
            v, dv = self.term(node.args[0])
            return _or(*(_and(f"(= {v} {i})", x) for i, x in enumerate(a))), _and(d, dv)
        b, db = self.set_term(node.args[0])
        if name == "includes":
            return _and(_or(*b), *(_or(_not(y), x) for x, y in zip(a, b))), _and(d, db)
        if name == "equals":
            return _and(*(f"(= {x} {y})" for x, y in zip(a, b))), _and(d, db)
        raise UnsupportedForBackend(name)

    # -- strings and characters ------------------------------------------
    def _method(self, node: MethodCall) -> tuple[str, str]:
        recv_ty = node.receiver.ty
        if recv_ty.kind == "IntSet":
            return self._set_method(node)
        name = node.name
        s, ds = self.term(node.receiver)
        args = [self.term(a) for a in node.args]
        d = _and(ds, *(x[1] for x in args))
        av = [x[0] for x in args]
        if recv_ty.kind == "Char":
            if name == "asString":
                return s, d
            if name in _CHAR_IN:
                return f"(str.in_re {s} {_ranges(_CHAR_IN[name])})", d
            raise UnsupportedForBackend(name)
        length = f"(str.len {s})"
        if name == "length":
            return length, d
        if name == "isEmpty":
            return f"(= {length} 0)", d
        if name == "charAt":
            i = av[0]
            return f"(str.at {s} {i})", _and(d, f"(<= 0 {i})", f"(< {i} {length})")
        if name == "concat":
            return f"(str.++ {s} {av[0]})", d
        if name == "contains":
            return f"(str.contains {s} {av[0]})", d
        if name == "endsWith":
            return f"(str.suffixof {av[0]} {s})", d
        if name == "startsWith":
            return f"(str.prefixof {av[0]} {s})", d
        if name == "equals":
            return f"(= {s} {av[0]})", d
        if name == "indexOf":
            if len(av) == 1:
                return f"(str.indexof {s} {av[0]} 0)", d
            start = f"(ite (< {av[1]} 0) 0 (ite (> {av[1]} {length}) {length} {av[1]}))"
            return f"(str.indexof {s} {av[0]} {start})", d
        if name == "lastIndexOf":
            return self._last_index_of(s, av[0]), d
        if name == "substring":
            b = av[0]
            ok = _and(f"(<= 0 {b})", f"(<= {b} {length})")
            if len(av) == 1:
                return f"(str.substr {s} {b} (- {length} {b}))", _and(d, ok)
            e = av[1]
            return f"(str.substr {s} {b} (- {e} {b}))", _and(d, ok, f"(<= {b} {e})", f"(<= {e} {length})")
        if name in _ALL_IN:
            return f"(str.in_re {s} (re.+ {_ranges(_ALL_IN[name])}))", d
        if name == "MixedCase":
            return _and(f"(str.in_re {s} {_contains_class(B.LOWER)})", f"(str.in_re {s} {_contains_class(B.UPPER)})"), d
        if name == "MixedCaseHexadecimalCharacters":
            return (
                _and(
                    f"(str.in_re {s} {_contains_class(B.LOWER_HEX_LETTERS)})",
                    f"(str.in_re {s} {_contains_class(B.UPPER_HEX_LETTERS)})",
                ),
                d,
            )
        if name.endswith("inFirstChars"):
            i = av[0]
            return _hex_family(name, f"(str.substr {s} 0 {i})"), _and(d, f"(<= 0 {i})")
        if "Hexadecimal" in name:
            return _hex_family(name, s), d
        raise UnsupportedForBackend(name)

    def _last_index_of(self, s: str, t: str) -> str:
        k = self.fresh("Int")
        lt, ls = f"(str.len {t})", f"(str.len {s})"
        found = _and(
            f"(<= 0 {k})",
            f"(<= (+ {k} {lt}) {ls})",
            f"(= (str.substr {s} {k} {lt}) {t})",
            f"(not (str.contains (str.substr {s} (+ {k} 1) {ls}) {t}))",
        )
        self.aux_facts.append(
            f"(ite (= {lt} 0) (= {k} {ls}) (ite (str.contains {s} {t}) {found} (= {k} (- 1))))"
        )
        return k


# ---------------------------------------------------------------------------
# Script emission


def _sort(ty: SemType) -> str:
    return {
        "Bool": "Bool",
        "Int": "Int",
        "Real": "Real",
        "Str": "String",
        "Char": "String",
        "IntSet": "(Array Int Bool)",
    }.get(ty.kind) or ty.enum


@dataclass
class Script:
    text: str
    labels: dict[str, Label]  # tracking symbol -> assertion label
    value_terms: list[tuple[str, str]] = field(default_factory=list)  # (variable, term) pairs asked for


def emit_smtlib(problem: SolveProblem, bounds: Bounds, timeout_ms: int | None = None, assumptions: list[Label] | None = None) -> Script:
    """An SMT-LIB 2 script deciding ``problem``; raises UnsupportedForBackend."""
    enc = Encoder(problem.declarations, bounds.set_universe)
    lines = ["(set-option :produce-unsat-cores true)", "(set-option :produce-models true)"]
    if timeout_ms is not None:
        lines.append(f"(set-option :timeout {int(timeout_ms)})")
    lines.append("(set-logic ALL)")
    used_enums = {ty.enum for ty in problem.declarations.values() if ty.kind == "Enum"}
    for tname in sorted(used_enums):
        values = problem.enums.get(tname, ())
        ctors = " ".join(f"({enum_constructor(tname, v)})" for v in values)
        lines.append(f"(declare-datatype {tname} ({ctors}))")
    for name, ty in problem.declarations.items():
        lines.append(f"(declare-const {_sym(name)} {_sort(ty)})")
    alphabet = _ranges(problem.alphabet)
    body: list[str] = []
    for name, ty in problem.declarations.items():
        if ty.kind == "Str":
            body.append(f"(assert (str.in_re {_sym(name)} (re.* {alphabet})))")
        elif ty.kind == "Char":
            body.append(f"(assert (str.in_re {_sym(name)} {alphabet}))")
    labels: dict[str, Label] = {}
    for i, (label, expr) in enumerate(problem.labeled_assertions):
        if assumptions is not None and label not in assumptions:
            continue
        sym = f"lab__{i}"
        labels[sym] = label
        lines.append(f"(declare-const {sym} Bool)")
        body.append(f"(assert (=> {sym} {enc.assertion(expr)}))")
    for g in problem.global_constraints:
        body.append(f"(assert {enc.assertion(g)})")
    for name, sort in enc.aux:
        lines.append(f"(declare-const {name} {sort})")
    body.extend(f"(assert {fact})" for fact in enc.aux_facts)
    lines.extend(body)
    lines.append(f"(check-sat-assuming ({' '.join(labels)}))")
    value_terms: list[tuple[str, str]] = []
    for name, ty in problem.declarations.items():
        if ty.kind == "IntSet":
            value_terms.extend((name, f"(select {_sym(name)} {i})") for i in range(bounds.set_universe + 1))
        else:
            value_terms.append((name, _sym(name)))
    if value_terms:
        lines.append(f"(get-value ({' '.join(t for _, t in value_terms)}))")
    lines.append("(get-unsat-core)")
    return Script("\n".join(lines) + "\n", labels, value_terms)


# ---------------------------------------------------------------------------
# Output parsing


def parse_sexprs(text: str) -> list:
    """Parse solver output into nested lists of atoms (strings keep their quotes)."""
    out: list = []
    stack: list[list] = [out]
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c == "(":
            stack.append([])
            i += 1
        elif c == ")":
            if len(stack) == 1:
                raise ValueError("unbalanced solver output")
            done = stack.pop()
            stack[-1].append(done)
            i += 1
        elif c == '"':
            j = i + 1
            while j < n:
                if text[j] == '"':
                    if j + 1 < n and text[j + 1] == '"':
                        j += 2
                        continue
                    break
                j += 1
            stack[-1].append(text[i : j + 1])
            i = j + 1
        elif c == "|":
            j = text.index("|", i + 1)
            stack[-1].append(text[i + 1 : j])
            i = j + 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in '()"':
                j += 1
            stack[-1].append(text[i:j])
            i = j
    if len(stack) != 1:
        raise ValueError("unbalanced solver output")
    return out


def _unescape(lit: str) -> str:
    body = lit[1:-1].replace('""', '"')
    out = []
    i = 0
    while i < len(body):
        if body.startswith("\\u{", i):
            j = body.index("}", i)
            out.append(chr(int(body[i + 3 : j], 16)))
            i = j + 1
        elif body.startswith("\\u", i) and len(body) >= i + 6:
            out.append(chr(int(body[i + 2 : i + 6], 16)))
            i += 6
        else:
            out.append(body[i])
            i += 1
    return "".join(out)


def _number(sx) -> Fraction:
    if isinstance(sx, str):
        return Fraction(sx)
    head = sx[0]
    if head == "-" and len(sx) == 2:
        return -_number(sx[1])
    if head == "/":
        return _number(sx[1]) / _number(sx[2])
    if head == "-":
        return _number(sx[1]) - _number(sx[2])
    raise ValueError(f"unexpected numeral {sx!r}")


def decode_value(sx, ty: SemType):
    k = ty.kind
    if k == "Bool":
        return sx == "true"
    if k == "Int":
        return int(_number(sx))
    if k == "Real":
        return _number(sx)
    if k in ("Str", "Char"):
        return _unescape(sx)
    if k == "Enum":
        text = sx if isinstance(sx, str) else sx[-1]
        return EnumValue(ty.enum, text.split("__", 1)[1])
    raise ValueError(k)


# ---------------------------------------------------------------------------
# Engine


def find_solver(path: str | None = None) -> str | None:
    candidate = path or os.environ.get("CP_SOLVER") or "z3"
    return shutil.which(candidate) or (candidate if os.path.isfile(candidate) else None)


@dataclass
class SmtEngine:
    """Runs an external SMT-LIB 2 solver; falls back to bounded search on unsupported operations."""

    bounds: Bounds = field(default_factory=Bounds)
    timeout_ms: int | None = 10_000
    solver: str | None = None
    name: str = "smt"
    fallbacks: int = 0

    def _command(self) -> list[str]:
        exe = find_solver(self.solver)
        if exe is None:
            raise EngineFailure(f"SMT solver not found: {self.solver or os.environ.get('CP_SOLVER') or 'z3'}")
        return [exe, "-in"]

    def run(self, script: Script, deadline: float | None) -> tuple[str, list]:
        timeout = None if deadline is None else max(deadline - time.monotonic(), 0.05) + 1.0
        try:
            proc = subprocess.run(self._command(), input=script.text, capture_output=True, text=True, timeout=timeout)
        except subprocess.TimeoutExpired:
            return "timeout", []
        except OSError as exc:
            raise EngineFailure(str(exc)) from exc
        try:
            items = parse_sexprs(proc.stdout)
        except ValueError:
            return "error", [proc.stdout + proc.stderr]
        return ("error", items) if not items else (str(items[0]), items[1:])

    def solve(self, problem: SolveProblem, core: bool = True) -> SolveResult:
        deadline = None if self.timeout_ms is None else time.monotonic() + self.timeout_ms / 1000
        try:
            result = self._solve(problem, None, deadline)
            if core and isinstance(result, Unsat) and len(result.core) > 1:
                result = self._shrink(problem, result, deadline)
            return result
        except UnsupportedForBackend:
            from .bounded import BoundedEngine

            self.fallbacks += 1
            return BoundedEngine(self.bounds, self.timeout_ms).solve(problem, core)

    def _solve(self, problem: SolveProblem, keep: list[Label] | None, deadline: float | None) -> SolveResult:
        remaining = None if deadline is None else max(int((deadline - time.monotonic()) * 1000), 1)
        script = emit_smtlib(problem, self.bounds, remaining, keep)
        verdict, rest = self.run(script, deadline)
        if verdict == "timeout":
            return Unknown(UnknownReason.TIMEOUT, "solver process killed")
        if verdict == "sat":
            return self._model(problem, script, rest)
        if verdict == "unsat":
            core_syms = next((x for x in rest if isinstance(x, list) and all(isinstance(s, str) and s in script.labels for s in x)), [])
            return Unsat(frozenset(script.labels[s] for s in core_syms))
        if verdict == "unknown":
            return Unknown(UnknownReason.TIMEOUT if remaining is not None else UnknownReason.BACKEND_ERROR, "solver answered unknown")
        return Unknown(UnknownReason.BACKEND_ERROR, " ".join(map(str, [verdict, *rest]))[:500])

    def _model(self, problem: SolveProblem, script: Script, rest: list) -> SolveResult:
        pairs = next((x for x in rest if isinstance(x, list) and x and x[0] != "error" and all(isinstance(p, list) and len(p) == 2 for p in x)), None)
        if pairs is None and script.value_terms:
            return Unknown(UnknownReason.BACKEND_ERROR, "no model in solver output")
        model: dict = {}
        flags: dict[str, list[str]] = {}
        for (name, _), (_, val) in zip(script.value_terms, pairs or []):
            ty = problem.declarations[name]
            if ty.kind == "IntSet":
                # membership flags arrive in universe order
                flags.setdefault(name, []).append(val)
            else:
                model[name] = decode_value(val, ty)
        for name, vals in flags.items():
            model[name] = frozenset(i for i, v in enumerate(vals) if v == "true")
        for name, ty in problem.declarations.items():
            model.setdefault(name, default_value(ty, self.bounds, problem.enums))
        checks = [compile_expr(e) for _, e in problem.labeled_assertions] + [compile_expr(g) for g in problem.global_constraints]
        if not all(holds(fn, model) for fn in checks):
            return Unknown(UnknownReason.BACKEND_ERROR, "solver model failed interpreter validation")
        return Sat(model)

    def _shrink(self, problem: SolveProblem, result: Unsat, deadline: float | None) -> Unsat:
        core = [lab for lab in problem.labels if lab in result.core]
        for lab in list(core):
            if lab not in core:
                continue
            trial = [x for x in core if x != lab]
            if not trial:
                continue
            sub = self._solve(problem, trial, deadline)
            if isinstance(sub, Unsat):
                core = [x for x in trial if x in sub.core] or trial
        return Unsat(frozenset(core))

