"""Test frame generation.

A frame assigns each category either one of its choices or nothing (written
``⊥`` below).  A category is left empty only when none of its choices can be
added without breaking a selector: every generated frame is *maximal* in that
sense.  Grocery's coupon frame, for instance, has no quantity choice because
all quantity choices are guarded by item-type properties the coupon lacks.

Selectors are compiled to three-valued functions over property bitmasks, so a
partially built frame can be rejected as soon as some selector is already
definitely false, whatever the remaining categories turn out to be.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .expr import Binary, Expr, Literal, Unary, VarRef
from .findings import Finding, Severity
from .model import Choice, ChoiceRef, CpSpec

# ---------------------------------------------------------------------------
# Public types


class Origin(enum.Enum):
    COVERING_ARRAY = "CoveringArray"
    BASE_VARIATION = "BaseVariation"
    ERROR_SINGLETON = "ErrorSingleton"
    SINGLE_SELECTION = "SingleSelection"
    COVERAGE_COMPLETION = "CoverageCompletion"


class Criterion(enum.Enum):
    EACH_CHOICE = "each-choice"
    PAIRWISE = "pairwise"
    THREE_WAY = "three-way"
    BASE_CHOICE = "base-choice"

    @property
    def strength(self) -> int:
        return {"each-choice": 1, "pairwise": 2, "three-way": 3}.get(self.value, 0)

    @classmethod
    def parse(cls, text: str) -> "Criterion":
        norm = text.strip().lower().replace("_", "-")
        aliases = {"1": "each-choice", "2": "pairwise", "3": "three-way", "base": "base-choice", "each": "each-choice"}
        return cls(aliases.get(norm, norm))


@dataclass(frozen=True)
class TestFrame:
    choices: tuple[ChoiceRef, ...]
    origin: Origin = field(default=Origin.COVERING_ARRAY, compare=False)

    __test__ = False  # keep pytest from collecting this class

    def __contains__(self, ref: object) -> bool:
        return ref in self.choices

    def __len__(self) -> int:
        return len(self.choices)

    def layout(self) -> str:
        return "-|-".join(str(r) for r in self.choices)


@dataclass
class FrameSet:
    frames: list[TestFrame]
    criterion: Criterion | None = None
    findings: list[Finding] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.frames)

    def __iter__(self):
        return iter(self.frames)

    @property
    def stats(self) -> dict[str, int]:
        counts = {o.value: 0 for o in Origin}
        for f in self.frames:
            counts[f.origin.value] += 1
        return counts


class InfeasibleChoice(Exception):
    def __init__(self, ref: ChoiceRef):
        super().__init__(f"choice {ref} belongs to no valid frame")
        self.ref = ref


class Unrepairable(Exception):
    def __init__(self, ref: ChoiceRef):
        super().__init__(f"no valid frame contains {ref}")
        self.ref = ref


# ---------------------------------------------------------------------------
# Three-valued selector evaluation

Kleene = Callable[[int, int], "bool | None"]


def _kleene(node: Expr, bits: dict[str, int]) -> Kleene:
    """Compile a Boolean selector over properties.

    The returned function takes ``(sure, maybe)`` bitmasks where ``sure`` holds
    properties already induced and ``maybe`` those that could still appear
    (a superset of ``sure``).  It returns True/False when decided, else None.
    """
    if isinstance(node, Literal):
        v = bool(node.value)
        return lambda s, m: v
    if isinstance(node, VarRef):
        b = bits.get(node.name, 0)
        return lambda s, m: True if s & b else (None if m & b else False)
    if isinstance(node, Unary) and node.op == "!":
        f = _kleene(node.operand, bits)

        def neg(s, m):
            r = f(s, m)
            return None if r is None else not r

        return neg
    if isinstance(node, Binary):
        lf, rf = _kleene(node.left, bits), _kleene(node.right, bits)
        if node.op == "&&":

            def conj(s, m):
                a = lf(s, m)
                if a is False:
                    return False
                b = rf(s, m)
                if b is False:
                    return False
                return None if a is None or b is None else True

            return conj
        if node.op == "||":

            def disj(s, m):
                a = lf(s, m)
                if a is True:
                    return True
                b = rf(s, m)
                if b is True:
                    return True
                return None if a is None or b is None else False

            return disj
        if node.op in ("==", "!="):
            want = node.op == "=="

            def eq(s, m):
                a, b = lf(s, m), rf(s, m)
                if a is None or b is None:
                    return None
                return (a == b) is want

            return eq
    raise ValueError(f"unsupported selector construct: {node!r}")


# ---------------------------------------------------------------------------
# Frame space


class _Bot:
    """The empty slot of a category."""

    def __repr__(self) -> str:
        return "⊥"


BOT = _Bot()


class FrameSpace:
    """Bitmask view of the categories of a spec, restricted to allowed choices."""

    def __init__(self, spec: CpSpec, allowed: Callable[[ChoiceRef, Choice], bool] | None = None):
        self.spec = spec
        self.keys: list[tuple[int, int]] = []
        self.options: list[list[ChoiceRef]] = []
        self.base: list[ChoiceRef | None] = []
        self.bits = {name: 1 << i for i, name in enumerate(spec.property_names)}
        self.mask: dict[ChoiceRef, int] = {}
        self.selector: dict[ChoiceRef, Kleene] = {}
        for p, cat in spec.categories():
            key = (p.id, cat.index)
            opts = []
            for ch in cat.choices:
                ref = ChoiceRef(p.id, cat.index, ch.index)
                if allowed is not None and not allowed(ref, ch):
                    continue
                opts.append(ref)
            self.keys.append(key)
            self.options.append(opts)
            b = spec.base_ref(key)
            self.base.append(b if b in opts else None)
        for _, cat_opts in enumerate(self.options):
            for ref in cat_opts:
                self._register(ref)
        self.pos = {k: i for i, k in enumerate(self.keys)}
        self.cat_mask = [self._union(opts) for opts in self.options]
        referenced = 0
        for ref, ch in spec.choices():
            sel = spec.typed[ref].selector
            if sel is not None:
                for name in _names(sel):
                    referenced |= self.bits.get(name, 0)
        self.referenced = referenced
        # Categories whose choices neither carry selectors nor declare a
        # property some selector reads never constrain anything.
        self.relevant = [
            any(r in self.selector or self.mask[r] & referenced for r in opts) for opts in self.options
        ]
        self._memo: dict[tuple, bool] = {}

    def _register(self, ref: ChoiceRef) -> None:
        if ref in self.mask:
            return
        ch = self.spec.resolve(ref)
        m = 0
        for prop in ch.properties:
            m |= self.bits[prop]
        self.mask[ref] = m
        sel = self.spec.typed[ref].selector
        if sel is not None:
            self.selector[ref] = _kleene(sel, self.bits)

    def _union(self, refs: Iterable[ChoiceRef]) -> int:
        m = 0
        for r in refs:
            m |= self.mask[r]
        return m

    def __len__(self) -> int:
        return len(self.keys)

    # -- validity ------------------------------------------------------
    def _sure_maybe(self, assign: Sequence) -> tuple[int, int]:
        sure = maybe = 0
        for i, a in enumerate(assign):
            if a is None:
                maybe |= self.cat_mask[i]
            elif a is not BOT:
                sure |= self.mask[a]
        return sure, sure | maybe

    def consistent(self, assign: Sequence) -> bool:
        """False when some chosen selector is already definitely false."""
        sure, maybe = self._sure_maybe(assign)
        for a in assign:
            if a is None or a is BOT:
                continue
            f = self.selector.get(a)
            if f is not None and f(sure, maybe) is False:
                return False
        return True

    def valid_refs(self, refs: Iterable[ChoiceRef]) -> bool:
        refs = list(refs)
        for r in refs:
            self._register(r)
        sure = self._union(refs)
        return all(self.selector[r](sure, sure) is True for r in refs if r in self.selector)

    def maximal(self, assign: Sequence) -> bool:
        chosen = [a for a in assign if a is not None and a is not BOT]
        for i, a in enumerate(assign):
            if a is BOT:
                for c in self.options[i]:
                    if self.valid_refs(chosen + [c]):
                        return False
        return True

    # -- search --------------------------------------------------------
    def _order(self, i: int, prefer_base: bool) -> list:
        opts = list(self.options[i])
        if prefer_base and self.base[i] is not None:
            opts.remove(self.base[i])
            opts.insert(0, self.base[i])
        return opts + [BOT]

    def complete(self, assign: Sequence, prefer_base: bool = True) -> list | None:
        """Fill every unassigned slot so the frame is valid and maximal.

        Relevant categories are searched depth-first in declaration order,
        trying the base choice first when ``prefer_base``; the remaining
        categories are filled afterwards since they can never conflict.
        """
        work = list(assign)
        for i, a in enumerate(work):
            if a is BOT and not self.relevant[i] and self.options[i]:
                return None
        todo = [i for i, a in enumerate(work) if a is None and self.relevant[i]]

        def dfs(k: int) -> bool:
            if k == len(todo):
                return self.maximal(work)
            i = todo[k]
            for c in self._order(i, prefer_base):
                work[i] = c
                if self.consistent(work) and dfs(k + 1):
                    return True
            work[i] = None
            return False

        if not self.consistent(work) or not dfs(0):
            return None
        for i, a in enumerate(work):
            if a is None:
                work[i] = self._order(i, prefer_base)[0]
        return work

    def extendable(self, assign: Sequence) -> bool:
        key = []
        for i, a in enumerate(assign):
            if self.relevant[i]:
                key.append(a)
            elif a is BOT and self.options[i]:
                return False
        key_t = tuple(key)
        hit = self._memo.get(key_t)
        if hit is None:
            hit = self.complete(assign) is not None
            self._memo[key_t] = hit
        return hit

    def frame(self, assign: Sequence, origin: Origin) -> TestFrame:
        return TestFrame(tuple(a for a in assign if a is not None and a is not BOT), origin)

    def assignment(self, refs: Iterable[ChoiceRef]) -> list:
        work: list = [None] * len(self.keys)
        for r in refs:
            work[self.pos[r.category_key]] = r
        return work


def _names(node: Expr) -> set[str]:
    from .expr import free_vars

    return set(free_vars(node))


# ---------------------------------------------------------------------------
# Frame predicates


def induced_properties(frame: TestFrame | Iterable[ChoiceRef], spec: CpSpec) -> dict[str, bool]:
    refs = frame.choices if isinstance(frame, TestFrame) else tuple(frame)
    on = {prop for r in refs for prop in spec.resolve(r).properties}
    return {name: name in on for name in spec.property_names}


def frame_is_valid(frame: TestFrame | Iterable[ChoiceRef], spec: CpSpec) -> bool:
    """Every selector of an included choice holds under the induced properties.

    A frame made of a single error choice is exempt: error choices are
    exercised alone on purpose, so their selectors are never consulted.
    """
    refs = frame.choices if isinstance(frame, TestFrame) else tuple(frame)
    keys = [r.category_key for r in refs]
    if len(set(keys)) != len(keys):
        return False
    if len(refs) == 1 and spec.resolve(refs[0]).is_error:
        return True
    from .expr import compile_expr

    props = induced_properties(refs, spec)
    for r in refs:
        sel = spec.typed[r].selector
        if sel is not None and compile_expr(sel)(props) is not True:
            return False
    return True


# ---------------------------------------------------------------------------
# Covering arrays


def _not_error(ref: ChoiceRef, ch: Choice) -> bool:
    return not ch.is_error


def _plain(ref: ChoiceRef, ch: Choice) -> bool:
    return not ch.is_error and not ch.is_single


def feasible_tuples(space: FrameSpace, t: int) -> list[tuple[tuple[int, ChoiceRef], ...]]:
    """All t-tuples of choices from distinct categories that extend to a frame."""
    n = len(space)
    t = min(t, n)
    out = []
    for cats in itertools.combinations(range(n), t):
        for combo in itertools.product(*(space.options[i] for i in cats)):
            work: list = [None] * n
            for i, r in zip(cats, combo):
                work[i] = r
            if space.extendable(work):
                out.append(tuple(zip(cats, combo)))
    return out


def enumerate_frames(space: FrameSpace, limit: int | None = None) -> list[list] | None:
    """Every valid maximal frame of the space, or None once ``limit`` is exceeded."""
    n = len(space)
    rel = [i for i in range(n) if space.relevant[i]]
    free = [i for i in range(n) if not space.relevant[i]]
    free_count = 1
    for i in free:
        free_count *= max(1, len(space.options[i]))
    cores: list[list] = []
    work: list = [None] * n

    def dfs(k: int) -> bool:
        if k == len(rel):
            if space.maximal(work):
                cores.append(list(work))
                if limit is not None and len(cores) * free_count > limit:
                    return False
            return True
        i = rel[k]
        for c in space.options[i] + [BOT]:
            work[i] = c
            if space.consistent(work) and not dfs(k + 1):
                return False
        work[i] = None
        return True

    if not dfs(0):
        return None
    out = []
    for core in cores:
        for combo in itertools.product(*((space.options[i] or [BOT]) for i in free)):
            row = list(core)
            for i, c in zip(free, combo):
                row[i] = c
            out.append(row)
    return out


def _greedy_cover(space: FrameSpace, t: int, frames: list[list]) -> list[list]:
    """Greedy set cover of the t-tuples, choosing among enumerated frames.

    At every step the frame covering the most uncovered tuples wins; ties go
    to the earliest frame in enumeration order, which is declaration order.
    """
    n = len(space)
    t = max(1, min(t, n))
    radix = [len(o) + 1 for o in space.options]  # last slot encodes the empty cell
    index = [{r: k for k, r in enumerate(o)} for o in space.options]
    cells = np.array(
        [[len(space.options[i]) if row[i] is BOT else index[i][row[i]] for i in range(n)] for row in frames],
        dtype=np.int64,
    )
    combos = list(itertools.combinations(range(n), t))
    columns = []
    invalid = []
    offset = 0
    for cats in combos:
        ids = np.zeros(len(frames), dtype=np.int64)
        has_bot = np.zeros(len(frames), dtype=bool)
        size = 1
        for i in cats:
            ids = ids * radix[i] + cells[:, i]
            has_bot |= cells[:, i] == radix[i] - 1
            size *= radix[i]
        columns.append(ids + offset)
        invalid.append(has_bot)
        offset += size
    ids = np.stack(columns, axis=1)
    sink = offset  # tuples with an empty cell map here and never count
    ids[np.stack(invalid, axis=1)] = sink
    need = np.zeros(offset + 1, dtype=bool)
    need[ids.ravel()] = True
    need[sink] = False
    chosen = []
    while need.any():
        gains = need[ids].sum(axis=1)
        k = int(np.argmax(gains))
        chosen.append(frames[k])
        need[ids[k]] = False
    return chosen


def _ipog(space: FrameSpace, t: int) -> list[list]:
    """In-parameter-order construction with don't-care cells.

    Categories are added one at a time.  Each existing row first receives the
    value of the new category that covers the most uncovered tuples (left as a
    don't-care when nothing is gained); the tuples still uncovered are then
    placed into rows whose don't-care cells accept them, or into new rows.
    Every intermediate row stays extendable to a valid maximal frame.
    """
    n = len(space)
    if n == 0:
        return []
    t = max(1, min(t, n))
    by_last: dict[int, list] = {}
    for tup in feasible_tuples(space, t):
        by_last.setdefault(tup[-1][0], []).append(tup)
    rows: list[list] = []
    for i in range(n):
        pending = by_last.get(i, [])
        uncovered = set(pending)
        for row in rows:
            chosen = [j for j in range(i) if row[j] is not None and row[j] is not BOT]
            best, best_gain = None, 0
            for c in space.options[i] + [BOT]:
                row[i] = c
                if not space.extendable(row):
                    continue
                g = 0
                if c is not BOT:
                    for sub in itertools.combinations(chosen, t - 1):
                        tup = tuple((j, row[j]) for j in sub) + ((i, c),)
                        g += tup in uncovered
                if g > best_gain:
                    best, best_gain = c, g
            row[i] = best
            if best is not None and best is not BOT:
                for sub in itertools.combinations(chosen, t - 1):
                    uncovered.discard(tuple((j, row[j]) for j in sub) + ((i, best),))
        for tup in pending:
            if tup not in uncovered:
                continue
            placed = False
            for row in rows:
                if any(row[j] is not None and row[j] != c for j, c in tup):
                    continue
                saved = [row[j] for j, _ in tup]
                for j, c in tup:
                    row[j] = c
                if space.extendable(row):
                    placed = True
                    break
                for (j, _), old in zip(tup, saved):
                    row[j] = old
            if not placed:
                row = [None] * n
                for j, c in tup:
                    row[j] = c
                rows.append(row)
            chosen_row = row
            cells = [j for j in range(i + 1) if chosen_row[j] is not None and chosen_row[j] is not BOT]
            for sub in itertools.combinations(cells, t):
                uncovered.discard(tuple((j, chosen_row[j]) for j in sub))
    out = []
    for row in rows:
        filled = space.complete(row)
        assert filled is not None, "row lost extendability"
        out.append(filled)
    return out


# Beyond this many valid frames the in-parameter-order builder takes over.
ENUMERATION_LIMIT = 100_000


def _covering(space: FrameSpace, t: int) -> tuple[list[list], list[Finding]]:
    findings = []
    for i, opts in enumerate(space.options):
        for r in opts:
            work: list = [None] * len(space)
            work[i] = r
            if not space.extendable(work):
                findings.append(Finding(Severity.WARNING, "InfeasibleChoice", (r,), "choice belongs to no valid frame"))
    if len(space) == 0:
        return [], findings
    frames = enumerate_frames(space, ENUMERATION_LIMIT)
    rows = _greedy_cover(space, t, frames) if frames is not None else _ipog(space, t)
    return rows, findings


def covering_array(
    spec: CpSpec, t: int, allowed: Callable[[ChoiceRef, Choice], bool] | None = None
) -> FrameSet:
    """Greedy constrained covering array of strength ``t`` over allowed choices."""
    space = FrameSpace(spec, allowed)
    rows, findings = _covering(space, t)
    frames = [space.frame(w, Origin.COVERING_ARRAY) for w in rows]
    return FrameSet(_dedupe(frames), findings=findings)


def _dedupe(frames: Iterable[TestFrame]) -> list[TestFrame]:
    seen: set[frozenset] = set()
    out = []
    for f in frames:
        key = frozenset(f.choices)
        if key not in seen:
            seen.add(key)
            out.append(f)
    return out


# ---------------------------------------------------------------------------
# Base choice


def _min_change(space: FrameSpace, fixed: int, ref: ChoiceRef, start: list) -> list | None:
    """Valid maximal frame containing ``ref`` that keeps as many of ``start`` as possible.

    Branch and bound over the relevant categories; alternatives are tried in
    declaration order so ties resolve to the earliest one.
    """
    n = len(space)
    work = list(start)
    work[fixed] = ref
    todo = [i for i in range(n) if i != fixed and space.relevant[i]]
    best: list = [None, n + 1]

    def options(i: int) -> list:
        keep = start[i]
        rest = [c for c in space.options[i] if c != keep]
        return ([keep] if keep is not None and keep is not BOT else []) + rest + [BOT]

    def dfs(k: int, changes: int) -> None:
        if changes >= best[1]:
            return
        if k == len(todo):
            if space.maximal(work):
                best[0], best[1] = list(work), changes
            return
        i = todo[k]
        saved = work[i]
        for c in options(i):
            work[i] = c
            if space.consistent(work):
                dfs(k + 1, changes + (c != start[i]))
        work[i] = saved

    for i in todo:
        work[i] = None
    if space.consistent(work):
        dfs(0, 0)
    if best[0] is None:
        return None
    out = best[0]
    for i in range(n):
        if out[i] is None:
            out[i] = start[i]
    return out


def base_choice_frames(spec: CpSpec, keep_duplicates: bool = True) -> FrameSet:
    """Base frame, one variation per non-base choice, and error singletons.

    Duplicates produced by repairing different variations into the same frame
    are kept by default so counts follow the one-frame-per-choice rule.
    """
    singles = {r for r, ch in spec.choices() if ch.is_single}
    findings: list[Finding] = []
    space = FrameSpace(spec, _not_error)
    n = len(space)
    base_assign = [b if b is not None else BOT for b in space.base]
    if not space.valid_refs(b for b in base_assign if b is not BOT) or not space.maximal(base_assign):
        repaired = space.complete([None] * n)
        if repaired is None:
            return FrameSet([], Criterion.BASE_CHOICE, [Finding(Severity.ERROR, "Unrepairable", (), "no valid frame")])
        base_assign = repaired
    frames = [space.frame(base_assign, Origin.BASE_VARIATION)]
    errors = []
    # Repairs may not pull in singles: each single is exercised by its own variation only.
    rspace = FrameSpace(spec, lambda r, ch: not ch.is_error and not ch.is_single)
    for ref, ch in spec.choices():
        i = space.pos[ref.category_key]
        if ch.is_error:
            errors.append(TestFrame((ref,), Origin.ERROR_SINGLETON))
            continue
        if base_assign[i] == ref:
            continue
        work = list(base_assign)
        work[i] = ref
        chosen = [a for a in work if a is not BOT]
        if not (space.valid_refs(chosen) and rspace.maximal(work)):
            start = [a if a not in singles else BOT for a in base_assign]
            rspace._register(ref)
            work = _min_change(rspace, i, ref, start)
        if work is None:
            findings.append(Finding(Severity.ERROR, "Unrepairable", (ref,), "no valid frame contains this choice"))
            continue
        frames.append(space.frame(work, Origin.BASE_VARIATION))
    if not keep_duplicates:
        frames = _dedupe(frames)
    return FrameSet(frames + errors, Criterion.BASE_CHOICE, findings)


# ---------------------------------------------------------------------------
# Two-stage generation


def generate_frames(spec: CpSpec, criterion: Criterion | str) -> FrameSet:
    if isinstance(criterion, str):
        criterion = Criterion.parse(criterion)
    if criterion is Criterion.BASE_CHOICE:
        return base_choice_frames(spec)
    t = criterion.strength
    findings: list[Finding] = []

    stage1 = FrameSpace(spec, _plain)
    rows, f1 = _covering(stage1, t)
    findings.extend(f for f in f1 if not _single_or_error(spec, f))
    frames = _dedupe(stage1.frame(w, Origin.COVERING_ARRAY) for w in rows)
    covered = {r for f in frames for r in f.choices}

    singles = [r for r, ch in spec.choices() if ch.is_single]
    exercised: set[ChoiceRef] = set()

    # Stage 3 comes before singles in the output but needs only plain choices.
    # A choice whose selector can only be met through a single borrows one
    # (and only one), and that frame then counts as the single's own frame.
    completion = []
    for ref, ch in spec.choices():
        if ch.is_error or ch.is_single or ref in covered:
            continue
        filled = stage1.complete(stage1.assignment([ref]))
        for s in singles if filled is None else ():
            if s in exercised:
                continue
            with_one = FrameSpace(spec, lambda r, c, s=s: r == s or not (c.is_error or c.is_single))
            filled = with_one.complete(with_one.assignment([ref]))
            if filled is not None:
                exercised.update(x for x in filled if x in singles)
                break
        if filled is None:
            findings.append(Finding(Severity.ERROR, "Unrepairable", (ref,), "no valid frame contains this choice"))
            continue
        fr = stage1.frame(filled, Origin.COVERAGE_COMPLETION)
        completion.append(fr)
        covered.update(fr.choices)

    single_frames: list[TestFrame] = []
    if singles:
        # Each single gets its own frame, free of every other single, so it is
        # exercised exactly once and never masks another special choice.
        single_set = set(singles)
        stage2 = FrameSpace(spec, _not_error)
        rows2, _ = _covering(stage2, t)
        candidates = [stage2.frame(w, Origin.SINGLE_SELECTION) for w in rows2]
        for s in singles:
            if s in exercised:
                continue
            pick = next((f for f in candidates if s in f.choices and len(single_set & set(f.choices)) == 1), None)
            if pick is None:
                alone = FrameSpace(spec, lambda r, ch, s=s: r == s or not (ch.is_error or ch.is_single))
                filled = alone.complete(alone.assignment([s]))
                if filled is None:
                    findings.append(Finding(Severity.ERROR, "Unrepairable", (s,), "no valid frame contains this choice"))
                    continue
                pick = alone.frame(filled, Origin.SINGLE_SELECTION)
            single_frames.append(pick)

    errors = [TestFrame((r,), Origin.ERROR_SINGLETON) for r, ch in spec.choices() if ch.is_error]
    out = _dedupe(frames + completion + single_frames + errors)
    return FrameSet(out, criterion, findings)


def _single_or_error(spec: CpSpec, f: Finding) -> bool:
    return any(spec.resolve(r).is_error or spec.resolve(r).is_single for r in f.subject)


def subsumption_audit(frames: FrameSet | Iterable[TestFrame], spec: CpSpec) -> list[ChoiceRef]:
    present = {r for f in frames for r in f.choices}
    return [r for r, ch in spec.choices() if not ch.is_error and r not in present]
