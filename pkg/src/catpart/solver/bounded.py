"""Exhaustive search over bounded domains.

This engine is the independent oracle for the SMT path: every model it returns
has been checked with the reference interpreter, and every ``Unsat`` it reports
means "no model within the configured bounds".

Search outline, per connected group of variables:

1. assertions are turned into literals (see :mod:`.literals`);
2. interval bounds are propagated through linear literals to a fixpoint, and a
   linear-programming relaxation prunes nodes whose linear part is infeasible;
3. undecided numeric disjunctions are split, then variables are branched on in
   the order Bool, Enum, Int, Real, Char, Str, IntSet.  Integers are bisected
   until a range is small enough to enumerate; strings are enumerated by
   length and then character by character, identifying characters that no
   predicate in the problem can tell apart; integer sets are enumerated by the
   number of elements in each region of their Venn diagram.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from ..expr import INT, Expr, Literal, MethodCall, compile_expr, free_vars, holds, walk
from ..expr import builtins as B
from ..expr.types import EvalError, EnumValue, Value
from .literals import Check, Col, Const, Disj, EnumEq, Lin, LinLit, Lit, BoolLit, literals
from .problem import Bounds, Label, Sat, SolveProblem, SolveResult, Unknown, UnknownReason, Unsat, default_value

UNDEF = "undefined"  # domain of an opaque column whose evaluation raised
SMALL_RANGE = 16
PROPAGATION_ROUNDS = 30
_KIND_ORDER = {"Bool": 0, "Enum": 1, "Int": 2, "Real": 3, "Char": 4, "Str": 5, "IntSet": 6}


class _OutOfBudget(Exception):
    def __init__(self, reason: UnknownReason):
        self.reason = reason


# ---------------------------------------------------------------------------
# Interval helpers (None stands for an infinite end)


def _scale(iv, c):
    lo, hi = iv
    if c == 0:
        return (0, 0)
    if c > 0:
        return (None if lo is None else lo * c, None if hi is None else hi * c)
    return (None if hi is None else hi * c, None if lo is None else lo * c)


def _add(a, b):
    return (
        None if a[0] is None or b[0] is None else a[0] + b[0],
        None if a[1] is None or b[1] is None else a[1] + b[1],
    )


def _mul(a, b):
    if a == (0, 0) or b == (0, 0):
        return (0, 0)
    if None in a or None in b:
        return (None, None)
    corners = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
    return (min(corners), max(corners))


def _meet(a, b):
    lo = a[0] if b[0] is None else b[0] if a[0] is None else max(a[0], b[0])
    hi = a[1] if b[1] is None else b[1] if a[1] is None else min(a[1], b[1])
    return lo, hi


def _empty(iv) -> bool:
    return iv[0] is not None and iv[1] is not None and iv[0] > iv[1]


def _point(iv) -> bool:
    return iv[0] is not None and iv[0] == iv[1]


# ---------------------------------------------------------------------------
# Character classes for symmetry reduction

_CLASS_SETS = {
    "alphanumeric": [B.ALNUM],
    "alllowercasecharacters": [B.LOWER],
    "alluppercasecharacters": [B.UPPER],
    "allnumericalcharacters": [B.DIGITS],
    "mixedcase": [B.LOWER, B.UPPER],
    "mixedcasehexadecimalcharacters": [B.LOWER_HEX_LETTERS, B.UPPER_HEX_LETTERS],
    "alllowercasehexadecimal": [B.DIGITS | B.LOWER_HEX_LETTERS],
    "alluppercasehexadecimal": [B.DIGITS | B.UPPER_HEX_LETTERS],
    "isdigit": [B.DIGITS],
    "isletter": [B.LETTERS],
    "isletterordigit": [B.ALNUM],
    "islowercase": [B.LOWER],
    "isuppercase": [B.UPPER],
    "islegal": [B.ALNUM | {" "}],
    "isspace": [frozenset(" ")],
    "ishexadecimal": [B.HEX_CHARS],
}


def char_classes(exprs: list[Expr], alphabet: str) -> list[list[str]] | None:
    """Partition the alphabet into characters no expression can distinguish.

    Returns None when symmetry reduction is unsound for these expressions
    (case-insensitive comparison relates characters across classes).
    """
    sets: list[frozenset] = []
    singles: set[str] = set()
    for e in exprs:
        for node in walk(e):
            if isinstance(node, MethodCall):
                name = node.name.lower()
                if name == "equalsignorecase":
                    return None
                if "hexadecimalcharacters" in name and name not in _CLASS_SETS:
                    sets.append(B.HEX_CHARS)
                sets.extend(_CLASS_SETS.get(name, []))
            elif isinstance(node, Literal) and node.kind in ("Str", "Char"):
                singles.update(node.value)
    groups: dict[tuple, list[str]] = {}
    for ch in alphabet:
        key = ("lit", ch) if ch in singles else tuple(ch in s for s in sets)
        groups.setdefault(key, []).append(ch)
    return sorted(groups.values(), key=lambda g: alphabet.index(g[0]))


# ---------------------------------------------------------------------------
# Search state


@dataclass
class _State:
    dom: dict[Col, object]
    binding: dict[str, Value]
    enums: dict[str, tuple[str, ...]]
    required: list[Lit]
    used_chars: tuple[str, ...] = ()

    def copy(self) -> "_State":
        return _State(dict(self.dom), dict(self.binding), dict(self.enums), list(self.required), self.used_chars)


def _normalize(lit: LinLit) -> Lit:
    """Integer-scale literals over integral columns; turn strict into non-strict."""
    if lit.lin.is_constant:
        v = lit.lin.const
        return Const({"<=": v <= 0, "<": v < 0, "==": v == 0, "!=": v != 0}[lit.op])
    if not all(c.integral for c, _ in lit.lin.coeffs):
        return lit
    dens = [a.denominator for _, a in lit.lin.coeffs] + [lit.lin.const.denominator]
    m = math.lcm(*dens)
    lin = lit.lin.scale(Fraction(m))
    op = lit.op
    if op == "<":
        lin, op = Lin(lin.coeffs, lin.const + 1), "<="
    g = math.gcd(*(int(a) for _, a in lin.coeffs))
    if g > 1:
        if op == "<=":
            # sum(a x) <= -k  becomes  sum(a/g x) <= floor(-k/g)
            lin = Lin(tuple((c, a / g) for c, a in lin.coeffs), -Fraction(math.floor(-lin.const / g)))
        elif lin.const % g != 0:
            return Const(op == "!=")
        else:
            lin = lin.scale(Fraction(1, g))
    return LinLit(lin, op)


def _normalize_all(lits: list[Lit]) -> list[Lit]:
    out = []
    for lit in lits:
        if isinstance(lit, LinLit):
            out.append(_normalize(lit))
        elif isinstance(lit, Disj):
            out.append(Disj(tuple(tuple(_normalize_all(list(opt))) for opt in lit.options)))
        else:
            out.append(lit)
    return out


class _Group:
    """Search over one connected group of variables."""

    def __init__(self, engine: "BoundedEngine", names: list[str], assertions: list[tuple[Label, Expr]], globals_: list[Expr]):
        self.engine = engine
        self.bounds = engine.bounds
        self.problem = engine.problem
        decl = self.problem.declarations
        self.names = sorted(names, key=lambda n: (_KIND_ORDER[decl[n].kind], list(decl).index(n)))
        self.checks = [compile_expr(e) for _, e in assertions] + [compile_expr(g) for g in globals_]
        lits: list[Lit] = []
        for _, e in assertions:
            lits.extend(literals(e))
        self.lits = _normalize_all(lits)
        self.compiled: dict[int, object] = {}  # keyed by node identity; trees are deep to hash
        self.free: dict[int, frozenset[str]] = {}
        exprs = [e for _, e in assertions]
        self.classes = char_classes(exprs, self.bounds.alphabet)
        self.set_elements = self._distinguished(exprs)
        self.cols: set[Col] = set()
        for lit in self.lits:
            self._collect(lit)
        self._lp_failed = False

    # -- setup ---------------------------------------------------------
    def _collect(self, lit: Lit) -> None:
        if isinstance(lit, LinLit):
            self.cols.update(c for c, _ in lit.lin.coeffs)
        elif isinstance(lit, Disj):
            for opt in lit.options:
                for x in opt:
                    self._collect(x)

    def _distinguished(self, exprs: list[Expr]) -> list[int]:
        """Integers named by set literals or constant ``contains`` arguments."""
        found: set[int] = set()
        for e in exprs:
            for node in walk(e):
                if isinstance(node, Literal) and node.kind == "Int":
                    found.add(node.value)
        return sorted(v for v in found if 0 <= v <= self.bounds.set_universe)

    def _free(self, node: Expr) -> frozenset[str]:
        fv = self.free.get(id(node))
        if fv is None:
            fv = self.free[id(node)] = frozenset(free_vars(node))
        return fv

    def _fn(self, node: Expr):
        fn = self.compiled.get(id(node))
        if fn is None:
            fn = self.compiled[id(node)] = compile_expr(node)
        return fn

    def initial(self) -> _State:
        b = self.bounds
        dom: dict[Col, object] = {}
        decl = self.problem.declarations
        for n in self.names:
            ty = decl[n]
            if ty.kind == "Int":
                dom[Col("var", n, integral=True)] = (b.int_lo, b.int_hi)
            elif ty.kind == "Real":
                top = Fraction(b.real_numerator)
                dom[Col("var", n, integral=False)] = (-top, top)
            elif ty.kind == "Str":
                dom[Col("len", n)] = (0, b.max_string_len)
            elif ty.kind == "IntSet":
                dom[Col("size", n)] = (0, b.set_universe + 1)
        for c in self.cols:
            dom.setdefault(c, (None, None))
        enums = {n: self.problem.enums.get(decl[n].enum, ()) for n in self.names if decl[n].kind == "Enum"}
        return _State(dom, {}, enums, list(self.lits))

    # -- evaluation helpers -------------------------------------------
    def _assigned(self, names: set[str], st: _State) -> bool:
        return all(n in st.binding for n in names)

    def _forward(self, node: Expr, st: _State):
        """Interval of a numeric term under the current domains."""
        if self._assigned(self._free(node), st):
            try:
                v = self._fn(node)(st.binding)
            except EvalError:
                return UNDEF
            return (v, v)
        from ..expr import Binary, Unary, VarRef

        if isinstance(node, Literal):
            return (node.value, node.value)
        if isinstance(node, VarRef):
            return st.dom.get(Col("var", node.name, integral=node.ty == INT), (None, None))
        if isinstance(node, Unary):
            inner = self._forward(node.operand, st)
            if inner == UNDEF:
                return (None, None)
            return _scale(inner, -1) if node.op == "-" else inner
        if isinstance(node, Binary):
            a, b = self._forward(node.left, st), self._forward(node.right, st)
            if UNDEF in (a, b):
                return (None, None)
            if node.op == "+":
                return _add(a, b)
            if node.op == "-":
                return _add(a, _scale(b, -1))
            if node.op == "*":
                return _mul(a, b)
            if node.op == "%" and _point(b) and b[0] != 0:
                m = abs(b[0]) - 1
                if a[0] is not None and a[0] >= 0:
                    return (0, m if a[1] is None else min(m, a[1]))
                if a[1] is not None and a[1] <= 0:
                    return (-m if a[0] is None else max(-m, a[0]), 0)
                return (-m, m)
            return (None, None)
        if isinstance(node, MethodCall):
            recv = node.receiver
            if isinstance(recv, VarRef) and node.name in ("length", "size"):
                return st.dom.get(Col("len" if node.name == "length" else "size", recv.name), (0, None))
            if node.name in ("indexOf", "lastIndexOf"):
                hi = None
                if isinstance(recv, VarRef):
                    hi = st.dom.get(Col("len", recv.name), (0, None))[1]
                return (-1, None if hi is None else max(hi - 1, -1))
            if node.name == "length":
                return (0, None)
            if node.name == "size":
                return (0, self.bounds.set_universe + 1)
        return (None, None)

    def _col_iv(self, col: Col, st: _State):
        return st.dom.get(col, (None, None))

    def _lin_iv(self, lin: Lin, st: _State):
        total = (lin.const, lin.const)
        for col, a in lin.coeffs:
            iv = self._col_iv(col, st)
            if iv == UNDEF:
                return UNDEF
            total = _add(total, _scale(iv, a))
        return total

    def decide(self, lit: Lit, st: _State) -> bool | None:
        if isinstance(lit, Const):
            return lit.value
        if isinstance(lit, BoolLit):
            v = st.binding.get(lit.name)
            return None if v is None else v == lit.value
        if isinstance(lit, EnumEq):
            values = st.enums.get(lit.name, ())
            if lit.value not in values:
                return not lit.positive
            if len(values) == 1:
                return lit.positive
            return None
        if isinstance(lit, LinLit):
            iv = self._lin_iv(lit.lin, st)
            if iv == UNDEF:
                return False
            lo, hi = iv
            op = lit.op
            if op == "<=":
                return True if hi is not None and hi <= 0 else False if lo is not None and lo > 0 else None
            if op == "<":
                return True if hi is not None and hi < 0 else False if lo is not None and lo >= 0 else None
            if op == "==":
                if lo == hi == 0:
                    return True
                return False if (lo is not None and lo > 0) or (hi is not None and hi < 0) else None
            if lo == hi == 0:
                return False
            return True if (lo is not None and lo > 0) or (hi is not None and hi < 0) else None
        if isinstance(lit, Check):
            if not self._assigned(self._free(lit.node), st):
                return None
            try:
                v = self._fn(lit.node)(st.binding)
            except EvalError:
                return False
            return v is lit.positive
        if isinstance(lit, Disj):
            seen_unknown = False
            for opt in lit.options:
                r = self._decide_conj(opt, st)
                if r is True:
                    return True
                if r is None:
                    seen_unknown = True
            return None if seen_unknown else False
        raise TypeError(lit)

    def _decide_conj(self, opt, st: _State) -> bool | None:
        out: bool | None = True
        for x in opt:
            r = self.decide(x, st)
            if r is False:
                return False
            if r is None:
                out = None
        return out

    # -- propagation ---------------------------------------------------
    def _set(self, col: Col, lo, hi, st: _State) -> bool | None:
        """Narrow a column; returns False on wipe-out, True if changed."""
        cur = st.dom.get(col, (None, None))
        if cur == UNDEF:
            return False
        if col.integral:
            if lo is not None:
                lo = math.ceil(lo)
            if hi is not None:
                hi = math.floor(hi)
        new = _meet(cur, (lo, hi))
        if _empty(new):
            return False
        if new == cur:
            return None
        st.dom[col] = new
        if col.kind == "var" and _point(new) and col.name not in st.binding:
            v = new[0]
            st.binding[col.name] = int(v) if col.integral else Fraction(v)
        return True

    def _revise_le(self, lin: Lin, st: _State) -> bool | None:
        parts = []
        for col, a in lin.coeffs:
            iv = self._col_iv(col, st)
            if iv == UNDEF:
                return False
            parts.append((col, a, _scale(iv, a)))
        lows = [p[2][0] for p in parts]
        n_inf = sum(1 for x in lows if x is None)
        finite = lin.const + sum(x for x in lows if x is not None)
        if n_inf == 0 and finite > 0:
            return False
        changed = None
        for col, a, term in parts:
            if term[0] is None:
                if n_inf > 1:
                    continue
                rest = finite
            else:
                if n_inf > 0:
                    continue
                rest = finite - term[0]
            bound = -rest / a
            r = self._set(col, None, bound, st) if a > 0 else self._set(col, bound, None, st)
            if r is False:
                return False
            changed = changed or r
        return changed

    def _revise(self, lit: LinLit, st: _State) -> bool | None:
        op = lit.op
        if op in ("<=", "<"):
            r = self._revise_le(lit.lin, st)
            if r is not False and op == "<" and self.decide(lit, st) is False:
                return False
            return r
        if op == "==":
            r1 = self._revise_le(lit.lin, st)
            if r1 is False:
                return False
            r2 = self._revise_le(lit.lin.scale(Fraction(-1)), st)
            if r2 is False:
                return False
            return r1 or r2
        # "!=": shave an endpoint of the single free column
        if self.decide(lit, st) is False:
            return False
        free = [(c, a) for c, a in lit.lin.coeffs if not _point(self._col_iv(c, st))]
        if len(free) != 1 or not free[0][0].integral:
            return None
        col, a = free[0]
        rest = lit.lin.const + sum(a2 * self._col_iv(c2, st)[0] for c2, a2 in lit.lin.coeffs if c2 != col)
        v = -rest / a
        lo, hi = self._col_iv(col, st)
        if lo is not None and v == lo:
            return self._set(col, lo + 1, None, st)
        if hi is not None and v == hi:
            return self._set(col, None, hi - 1, st)
        return None

    def _refresh(self, st: _State) -> bool:
        for col in self.cols:
            if col.kind == "var":
                continue
            if col.kind == "term":
                iv = self._forward(col.term, st)
                if iv == UNDEF:
                    st.dom[col] = UNDEF
                    continue
            elif col.name in st.binding:
                v = st.binding[col.name]
                iv = (len(v), len(v))
            else:
                continue
            if self._set(col, iv[0], iv[1], st) is False:
                return False
        return True

    def propagate(self, st: _State) -> bool:
        for _ in range(PROPAGATION_ROUNDS):
            if not self._refresh(st):
                return False
            changed = False
            keep: list[Lit] = []
            queue = list(st.required)
            while queue:
                lit = queue.pop(0)
                if isinstance(lit, Const):
                    if not lit.value:
                        return False
                    continue
                if isinstance(lit, BoolLit):
                    v = st.binding.get(lit.name)
                    if v is None:
                        st.binding[lit.name] = lit.value
                        changed = True
                    elif v != lit.value:
                        return False
                    continue
                if isinstance(lit, EnumEq):
                    values = st.enums.get(lit.name, ())
                    new = tuple(x for x in values if (x == lit.value) == lit.positive)
                    if not new:
                        return False
                    if new != values:
                        st.enums[lit.name] = new
                        changed = True
                    if len(new) == 1 and lit.name not in st.binding:
                        tname = self.problem.declarations[lit.name].enum or ""
                        st.binding[lit.name] = EnumValue(tname, new[0])
                    continue
                if isinstance(lit, LinLit):
                    r = self._revise(lit, st)
                    if r is False:
                        return False
                    changed = changed or bool(r)
                    if self.decide(lit, st) is not True:
                        keep.append(lit)
                    continue
                if isinstance(lit, Check):
                    r = self.decide(lit, st)
                    if r is False:
                        return False
                    if r is None:
                        keep.append(lit)
                    continue
                if isinstance(lit, Disj):
                    live = []
                    satisfied = False
                    for opt in lit.options:
                        r = self._decide_conj(opt, st)
                        if r is True:
                            satisfied = True
                            break
                        if r is None:
                            live.append(opt)
                    if satisfied:
                        continue
                    if not live:
                        return False
                    if len(live) == 1:
                        queue.extend(live[0])
                        changed = True
                        continue
                    keep.append(Disj(tuple(live)) if len(live) != len(lit.options) else lit)
                    continue
            st.required = keep
            if not changed:
                break
        return self._lp_feasible(st)

    def _lp_feasible(self, st: _State) -> bool:
        rows = [x for x in st.required if isinstance(x, LinLit) and x.op != "!="]
        multi = [x for x in rows if sum(1 for c, _ in x.lin.coeffs if not _point(st.dom.get(c, (None, None)))) > 1]
        if len(multi) < 2 or self._lp_failed:
            return True
        cols = sorted({c for x in rows for c, _ in x.lin.coeffs}, key=repr)
        idx = {c: i for i, c in enumerate(cols)}
        a_ub, b_ub, a_eq, b_eq = [], [], [], []
        for x in rows:
            vec = [0.0] * len(cols)
            for c, a in x.lin.coeffs:
                vec[idx[c]] = float(a)
            if x.op == "==":
                a_eq.append(vec)
                b_eq.append(float(-x.lin.const))
            else:
                a_ub.append(vec)
                b_ub.append(float(-x.lin.const))
        bnds = []
        for c in cols:
            iv = st.dom.get(c, (None, None))
            if iv == UNDEF:
                return False
            bnds.append((None if iv[0] is None else float(iv[0]), None if iv[1] is None else float(iv[1])))
        try:
            from scipy.optimize import linprog

            res = linprog(
                [0.0] * len(cols),
                A_ub=a_ub or None,
                b_ub=b_ub or None,
                A_eq=a_eq or None,
                b_eq=b_eq or None,
                bounds=bnds,
                method="highs",
            )
        except Exception:
            self._lp_failed = True
            return True
        return res.status != 2

    # -- branching -----------------------------------------------------
    def search(self) -> dict[str, Value] | None:
        return self._dfs(self.initial())

    def _dfs(self, st: _State) -> dict[str, Value] | None:
        self.engine.tick()
        if not self.propagate(st):
            return None
        for lit in st.required:
            if isinstance(lit, Disj) and all(not isinstance(x, Check) for opt in lit.options for x in opt):
                rest = [x for x in st.required if x is not lit]
                for opt in lit.options:
                    child = st.copy()
                    child.required = rest + list(opt)
                    found = self._dfs(child)
                    if found is not None:
                        return found
                return None
        var = next((n for n in self.names if n not in st.binding), None)
        if var is None:
            return self._leaf(st)
        kind = self.problem.declarations[var].kind
        for child in self._children(var, kind, st):
            found = self._dfs(child)
            if found is not None:
                return found
        return None

    def _leaf(self, st: _State) -> dict[str, Value] | None:
        b = st.binding
        if all(holds(fn, b) for fn in self.checks):
            return {n: b[n] for n in self.names}
        return None

    def _children(self, var: str, kind: str, st: _State) -> Iterator[_State]:
        if kind == "Bool":
            for v in (False, True):
                child = st.copy()
                child.binding[var] = v
                yield child
        elif kind == "Enum":
            tname = self.problem.declarations[var].enum or ""
            for v in st.enums.get(var, ()):
                child = st.copy()
                child.enums[var] = (v,)
                child.binding[var] = EnumValue(tname, v)
                yield child
        elif kind == "Int":
            col = Col("var", var, integral=True)
            lo, hi = st.dom[col]
            if hi - lo + 1 <= SMALL_RANGE:
                for v in range(lo, hi + 1):
                    child = st.copy()
                    child.dom[col] = (v, v)
                    child.binding[var] = v
                    yield child
            else:
                mid = (lo + hi) // 2
                for part in ((lo, mid), (mid + 1, hi)):
                    child = st.copy()
                    child.dom[col] = part
                    yield child
        elif kind == "Real":
            yield from self._real_children(var, st)
        elif kind in ("Char", "Str"):
            yield from self._text_children(var, kind, st)
        elif kind == "IntSet":
            yield from self._set_children(st)

    def _real_children(self, var: str, st: _State) -> Iterator[_State]:
        col = Col("var", var, integral=False)
        lo, hi = st.dom[col]
        q_max = self.bounds.real_denominator
        p_max = self.bounds.real_numerator
        if math.floor(hi) - math.ceil(lo) + 1 > SMALL_RANGE:
            mid = Fraction(math.floor((lo + hi) / 2))
            for part in ((lo, mid), (mid + Fraction(1, q_max), hi)):
                child = st.copy()
                child.dom[col] = part
                yield child
            return
        seen: set[Fraction] = set()
        for q in range(1, q_max + 1):
            for p in range(math.ceil(lo * q), math.floor(hi * q) + 1):
                if abs(p) > p_max:
                    continue
                v = Fraction(p, q)
                if v in seen:
                    continue
                seen.add(v)
                child = st.copy()
                child.dom[col] = (v, v)
                child.binding[var] = v
                yield child

    def _symbols(self, used: tuple[str, ...]) -> list[str]:
        alphabet = self.bounds.alphabet
        if self.classes is None:
            return list(alphabet)
        out = sorted(used, key=alphabet.index)
        for cls in self.classes:
            fresh = next((c for c in cls if c not in used), None)
            if fresh is not None:
                out.append(fresh)
        return out

    def _strings(self, length: int, used: tuple[str, ...]) -> Iterator[tuple[str, tuple[str, ...]]]:
        if length == 0:
            yield "", used
            return
        for c in self._symbols(used):
            nxt = used if c in used else used + (c,)
            for rest, final in self._strings(length - 1, nxt):
                yield c + rest, final

    def _text_children(self, var: str, kind: str, st: _State) -> Iterator[_State]:
        if kind == "Char":
            for c in self._symbols(st.used_chars):
                child = st.copy()
                child.binding[var] = c
                if c not in child.used_chars:
                    child.used_chars += (c,)
                yield child
            return
        col = Col("len", var)
        lo, hi = st.dom[col]
        for n in range(max(lo, 0), min(hi, self.bounds.max_string_len) + 1):
            for text, used in self._strings(n, st.used_chars):
                child = st.copy()
                child.dom[col] = (n, n)
                child.binding[var] = text
                child.used_chars = used
                yield child

    def _set_children(self, st: _State) -> Iterator[_State]:
        decl = self.problem.declarations
        sets = [n for n in self.names if decl[n].kind == "IntSet" and n not in st.binding]
        k = len(sets)
        universe = list(range(self.bounds.set_universe + 1))
        special = [e for e in self.set_elements if e in universe]
        plain = [e for e in universe if e not in special]
        regions = list(range(1, 1 << k))
        size_dom = [st.dom.get(Col("size", s), (0, None)) for s in sets]
        for total in range(len(plain) + 1):
            for counts in _compositions(total, len(regions)):
                for pattern in itertools.product(range(1 << k), repeat=len(special)):
                    members: list[set[int]] = [set() for _ in sets]
                    pos = 0
                    for r, cnt in zip(regions, counts):
                        chunk = plain[pos : pos + cnt]
                        pos += cnt
                        for i in range(k):
                            if r >> i & 1:
                                members[i].update(chunk)
                    for e, mask in zip(special, pattern):
                        for i in range(k):
                            if mask >> i & 1:
                                members[i].add(e)
                    if any(
                        (lo is not None and len(m) < lo) or (hi is not None and len(m) > hi)
                        for m, (lo, hi) in zip(members, size_dom)
                    ):
                        continue
                    child = st.copy()
                    for s, m in zip(sets, members):
                        child.binding[s] = frozenset(m)
                        child.dom[Col("size", s)] = (len(m), len(m))
                    yield child


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Tuples of ``parts`` non-negative integers summing to ``total``, lexicographically."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# Engine


@dataclass
class BoundedEngine:
    """Exhaustive bounded search, with deletion-based unsat cores."""

    bounds: Bounds = field(default_factory=Bounds)
    timeout_ms: int | None = 10_000
    problem: SolveProblem | None = None
    nodes: int = 0
    deadline: float | None = None
    name: str = "bounded"

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.bounds.node_budget:
            raise _OutOfBudget(UnknownReason.RESOURCE_LIMIT)
        if self.deadline is not None and self.nodes % 64 == 0 and time.monotonic() > self.deadline:
            raise _OutOfBudget(UnknownReason.TIMEOUT)

    def solve(self, problem: SolveProblem, core: bool = True) -> SolveResult:
        start = time.monotonic()
        deadline = None if self.timeout_ms is None else start + self.timeout_ms / 1000
        result = self._solve(problem, deadline)
        if core and isinstance(result, Unsat) and len(result.core) > 1:
            result = self._shrink(problem, result, deadline)
        return result

    def _solve(self, problem: SolveProblem, deadline: float | None) -> SolveResult:
        runner = BoundedEngine(self.bounds, self.timeout_ms, problem, 0, deadline)
        groups = _components(problem)
        model: dict[str, Value] = {}
        try:
            for names, assertions, globals_ in groups:
                found = _Group(runner, names, assertions, globals_).search()
                if found is None:
                    return Unsat(frozenset(lab for lab, _ in assertions), bounds_relative=True)
                model.update(found)
        except _OutOfBudget as exc:
            return Unknown(exc.reason, f"after {runner.nodes} nodes")
        for name, ty in problem.declarations.items():
            if name not in model:
                model[name] = default_value(ty, self.bounds, problem.enums)
        return Sat(model)

    def _shrink(self, problem: SolveProblem, result: Unsat, deadline: float | None) -> Unsat:
        core = [lab for lab in problem.labels if lab in result.core]
        for lab in list(core):
            trial = [x for x in core if x != lab]
            if not trial:
                continue
            sub = self._solve(problem.restricted(set(trial)), deadline)
            if isinstance(sub, Unsat):
                core = [x for x in core if x in sub.core]
        return Unsat(frozenset(core), bounds_relative=True)


def _components(problem: SolveProblem) -> list[tuple[list[str], list[tuple[Label, Expr]], list[Expr]]]:
    parent: dict[str, str] = {}

    def find(x: str) -> str:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(names: set[str]) -> None:
        names = list(names)
        for other in names[1:]:
            parent[find(other)] = find(names[0])

    for _, e in problem.labeled_assertions:
        fv = free_vars(e)
        for n in fv:
            find(n)
        union(fv)
    groups: dict[str, tuple[list[str], list, list]] = {}
    order: list[str] = []
    for _, e in problem.labeled_assertions:
        for n in sorted(free_vars(e)):
            root = find(n)
            if root not in groups:
                groups[root] = ([], [], [])
                order.append(root)
            if n not in groups[root][0]:
                groups[root][0].append(n)
    for lab, e in problem.labeled_assertions:
        fv = free_vars(e)
        if fv:
            groups[find(next(iter(fv)))][1].append((lab, e))
        else:
            # closed assertion: a group of its own with no variables
            root = f"#closed{len(order)}"
            groups[root] = ([], [(lab, e)], [])
            order.append(root)
    for g in problem.global_constraints:
        fv = free_vars(g)
        roots = {find(n) for n in fv if n in parent}
        for r in roots:
            groups[r][2].append(g)
    return [groups[r] for r in order]
