"""Static checks on a category-partition specification."""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .expr import compile_expr, free_vars, holds
from .findings import Finding, Severity
from .frames import BOT, FrameSpace
from .model import Category, ChoiceRef, CpSpec, Parameter
from .solver import Engine, EngineFailure, Sat, Unknown, Unsat, build_problem

# Above this many shared contexts the overlap check gives up with a Warning.
CONTEXT_LIMIT = 4096


@dataclass(frozen=True)
class VerificationReport:
    findings: tuple[Finding, ...] = ()

    @property
    def passed(self) -> bool:
        return not any(f.is_error for f in self.findings)

    @property
    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.is_error]

    @property
    def warnings(self) -> list[Finding]:
        return [f for f in self.findings if not f.is_error]


@dataclass
class VerifyOptions:
    coverage_warnings: bool = True
    jobs: int = 1
    context_limit: int = CONTEXT_LIMIT


# ---------------------------------------------------------------------------
# Structure


def _where(p: Parameter, cat: Category | None = None) -> tuple[str, ...]:
    return (p.name,) if cat is None else (p.name, f"Category {cat.index}")


def check_structure(spec: CpSpec) -> list[Finding]:
    out: list[Finding] = []

    def err(check: str, subject: tuple, detail: str) -> None:
        out.append(Finding(Severity.ERROR, check, subject, detail))

    if len(spec.all_params) < 2:
        err("structure", (spec.name,), "a specification needs at least two parameters or environment variables")
    declared_in: dict[str, set[tuple[int, int]]] = {}
    for ref, ch in spec.choices():
        for prop in ch.properties:
            declared_in.setdefault(prop, set()).add(ref.category_key)
    for p in spec.all_params:
        if not p.name:
            err("structure", (str(p.id),), "parameter without a name")
        if not p.categories:
            err("structure", _where(p), "parameter has no category")
        seen: set[str] = set()
        for cat in p.categories:
            where = _where(p, cat)
            if not cat.description.strip():
                err("structure", where, "category without a description")
            elif cat.description in seen:
                err("structure", where, f"duplicate category name {cat.description!r}")
            seen.add(cat.description)
            if len(cat.choices) < 2:
                err("structure", where, "a category needs at least two choices")
            if cat.base_index is None:
                err("structure", where, "category has no base choice")
            for ch in cat.choices:
                ref = ChoiceRef(p.id, cat.index, ch.index)
                if not ch.description.strip():
                    err("structure", (str(ref),), "choice without a description")
                typed = spec.typed[ref]
                if typed.expression_error is not None:
                    err("type", (str(ref),), f"expression: {typed.expression_error}")
                if typed.selector_error is not None:
                    err("type", (str(ref),), f"selector: {typed.selector_error}")
                if ch.selector is not None:
                    for name in sorted(free_vars(ch.selector)):
                        owners = declared_in.get(name, set())
                        if not owners - {ref.category_key}:
                            err(
                                "selector",
                                (str(ref),),
                                f"selector property {name!r} is not declared by a choice of another category",
                            )
    return out


# ---------------------------------------------------------------------------
# Semantic checks


def _inconclusive(check: str, subject: tuple, result: Unknown | Exception) -> Finding:
    if isinstance(result, Unknown):
        why = f"{result.reason.value}" + (f": {result.detail}" if result.detail else "")
    else:
        why = str(result)
    return Finding(Severity.WARNING, check, subject, f"check inconclusive ({why})")


def _typed_refs(spec: CpSpec, refs: list[ChoiceRef]) -> bool:
    return all(spec.typed[r].expression is not None for r in refs)


def _vars(spec: CpSpec, refs) -> set[str]:
    out: set[str] = set()
    for r in refs:
        out |= free_vars(spec.typed_expression(r))
    return out


def _contexts(spec: CpSpec, space: FrameSpace, a: ChoiceRef, b: ChoiceRef, limit: int) -> list[tuple[ChoiceRef, ...]] | None:
    """Choices of neighbouring categories under which both ``a`` and ``b`` may be selected.

    A neighbour is a category sharing a variable with ``a`` or ``b``.  A
    context counts when some valid frame contains it together with ``a`` and
    another valid frame contains it together with ``b``.  None means too many.
    """
    names = _vars(spec, (a, b))
    key = a.category_key
    slots = []
    for i, k in enumerate(space.keys):
        if k == key:
            continue
        if any(free_vars(spec.typed_expression(r)) & names for r in space.options[i] if spec.typed[r].expression is not None):
            slots.append(i)
    total = 1
    for i in slots:
        total *= len(space.options[i]) + 1
    if total > limit:
        return None
    seen: dict[tuple, None] = {}
    for combo in itertools.product(*[space.options[i] + [BOT] for i in slots]):
        ok = True
        for pick in (a, b):
            work: list = [None] * len(space.keys)
            work[space.pos[key]] = pick
            for i, c in zip(slots, combo):
                work[i] = c
            if space.complete(work) is None:
                ok = False
                break
        if ok:
            seen.setdefault(tuple(c for c in combo if c is not BOT), None)
    return list(seen)


def _space_for(spec: CpSpec, key: tuple[int, int]) -> FrameSpace:
    # Error choices of other categories always stand alone in their frame.
    return FrameSpace(spec, lambda ref, ch: not ch.is_error or ref.category_key == key)


def check_overlap(spec: CpSpec, p: Parameter, cat: Category, engine: Engine, limit: int = CONTEXT_LIMIT) -> list[Finding]:
    """Pairs of choices of one category that some value satisfies together.

    Two choices only compete when a frame could hold either of them next to
    the same choices elsewhere, so a pair whose conjunction is satisfiable is
    re-checked under every such shared context and reported only if it still
    overlaps in one of them.
    """
    refs = spec.category_refs(p, cat)
    out: list[Finding] = []
    space: FrameSpace | None = None
    for a, b in itertools.combinations(refs, 2):
        if not _typed_refs(spec, [a, b]):
            continue
        subject = (str(a), str(b))
        try:
            raw = engine.solve(build_problem(spec, (a, b)), core=False)
            if isinstance(raw, Unsat):
                continue
            if space is None:
                space = _space_for(spec, a.category_key)
            contexts = _contexts(spec, space, a, b, limit)
            if contexts is None:
                out.append(Finding(Severity.WARNING, "overlap", subject, "too many shared contexts to examine"))
                continue
            verdict: Finding | None = None
            for ctx in contexts:
                refs_ctx = (a, b) + ctx
                if not _typed_refs(spec, list(ctx)):
                    continue
                res = engine.solve(build_problem(spec, refs_ctx), core=False)
                if isinstance(res, Sat):
                    where = ", ".join(str(c) for c in ctx) or "no other choice"
                    verdict = Finding(Severity.ERROR, "overlap", subject, f"both choices hold alongside {where}", res.model)
                    break
                if isinstance(res, Unknown) and verdict is None:
                    verdict = _inconclusive("overlap", subject, res)
            if verdict is not None:
                out.append(verdict)
        except EngineFailure as exc:
            out.append(_inconclusive("overlap", subject, exc))
    return out


def check_coverage(spec: CpSpec, p: Parameter, cat: Category, engine: Engine) -> list[Finding]:
    refs = spec.category_refs(p, cat)
    if not refs or not _typed_refs(spec, refs):
        return []
    from .expr import Unary

    problem = build_problem(spec, refs)
    negated = [(lab, Unary("!", e, ty=e.ty)) for lab, e in problem.labeled_assertions]
    problem = type(problem)(problem.declarations, negated, problem.global_constraints, problem.enums, problem.alphabet)
    subject = (p.name, f"Category {cat.index}")
    try:
        res = engine.solve(problem, core=False)
    except EngineFailure as exc:
        return [_inconclusive("coverage", subject, exc)]
    if isinstance(res, Sat):
        return [Finding(Severity.WARNING, "coverage", subject, "some value satisfies no choice of the category", res.model)]
    if isinstance(res, Unknown):
        return [_inconclusive("coverage", subject, res)]
    return []


def check_base_frame(spec: CpSpec, engine: Engine) -> list[Finding]:
    bases = [spec.base_ref((p.id, c.index)) for p, c in spec.categories()]
    bases = [b for b in bases if b is not None]
    out: list[Finding] = []
    props = {name: False for name in spec.property_names}
    for b in bases:
        for prop in spec.resolve(b).properties:
            props[prop] = True
    for b in bases:
        sel = spec.typed[b].selector
        if sel is not None and not holds(compile_expr(sel), props):
            out.append(Finding(Severity.ERROR, "base-selectors", (str(b),), "selector is false in the all-base frame"))
    typed = [b for b in bases if spec.typed[b].expression is not None]
    if not typed:
        return out
    try:
        res = engine.solve(build_problem(spec, tuple(typed)))
    except EngineFailure as exc:
        return out + [_inconclusive("base-values", tuple(map(str, typed)), exc)]
    if isinstance(res, Unsat):
        core = tuple(str(r) for r in sorted(res.core))
        note = " within the search bounds" if res.bounds_relative else ""
        out.append(Finding(Severity.ERROR, "base-values", core, f"no value satisfies the base choices{note}"))
    elif isinstance(res, Unknown):
        out.append(_inconclusive("base-values", tuple(map(str, typed)), res))
    return out


def verify(spec: CpSpec, engine: Engine, options: VerifyOptions | None = None) -> VerificationReport:
    opts = options or VerifyOptions()
    findings = check_structure(spec)
    if not spec.all_params:
        return VerificationReport(tuple(findings))
    cats = list(spec.categories())

    def per_category(pc: tuple[Parameter, Category]) -> list[Finding]:
        p, cat = pc
        got = check_overlap(spec, p, cat, engine, opts.context_limit)
        if opts.coverage_warnings:
            got += check_coverage(spec, p, cat, engine)
        return got

    if opts.jobs > 1:
        with ThreadPoolExecutor(max_workers=opts.jobs) as pool:
            results = list(pool.map(per_category, cats))
    else:
        results = [per_category(pc) for pc in cats]
    for r in results:
        findings.extend(r)
    if all(c.base_index is not None for _, c in cats):
        findings.extend(check_base_frame(spec, engine))
    return VerificationReport(tuple(findings))
