"""Brute-force oracles shared by the frame tests and the acceptance run."""

from __future__ import annotations

import itertools
import json
from collections import Counter
from functools import lru_cache

from catpart.expr import compile_expr
from catpart.frames import Criterion, FrameSet
from catpart.model import ChoiceRef, CpSpec

from .conftest import DATA

COUNTS = json.loads((DATA / "frame_counts.json").read_text(encoding="utf-8"))
COVERING = [Criterion.EACH_CHOICE, Criterion.PAIRWISE, Criterion.THREE_WAY]


def window(name: str, criterion: Criterion) -> tuple[int, int]:
    row = COUNTS[name]
    if criterion is Criterion.BASE_CHOICE:
        return row["base"] - 1, row["base"] + 1
    k = criterion.strength - 1
    a, b = row["tool_a"][k], row["tool_b"][k]
    return min(a, b), max(a, b) + 2


# ---------------------------------------------------------------------------
# Brute-force oracle, independent of the generator's search structures


class Oracle:
    """Enumerates every valid, maximal frame built from plain choices.

    Categories whose plain choices neither declare properties nor carry
    selectors cannot influence validity, so they are left out of the
    enumeration and treated as always-free slots.
    """

    def __init__(self, spec: CpSpec):
        self.spec = spec
        self.cats: list[tuple[tuple[int, int], list[ChoiceRef]]] = []
        for p, cat in spec.categories():
            refs = [ChoiceRef(p.id, cat.index, ch.index) for ch in cat.choices if not (ch.is_error or ch.is_single)]
            self.cats.append(((p.id, cat.index), refs))
        self.relevant = [
            i for i, (_, refs) in enumerate(self.cats)
            if any(spec.resolve(r).properties or spec.resolve(r).selector is not None for r in refs)
        ]
        self.selectors = {r: compile_expr(spec.typed[r].selector) for r in spec.refs() if spec.typed[r].selector is not None}

    def valid(self, refs: list[ChoiceRef]) -> bool:
        on = {prop for r in refs for prop in self.spec.resolve(r).properties}
        binding = {name: name in on for name in self.spec.property_names}
        return all(self.selectors[r](binding) is True for r in refs if r in self.selectors)

    @lru_cache(maxsize=None)
    def frames(self) -> list[dict[int, ChoiceRef]]:
        out = []
        slots = [self.cats[i][1] + [None] for i in self.relevant]
        for combo in itertools.product(*slots):
            refs = [r for r in combo if r is not None]
            if not self.valid(refs):
                continue
            maximal = all(
                not any(self.valid(refs + [c]) for c in self.cats[i][1])
                for i, r in zip(self.relevant, combo)
                if r is None
            )
            if maximal:
                out.append({i: r for i, r in zip(self.relevant, combo) if r is not None})
        return out

    def feasible(self, t: int) -> set[frozenset[ChoiceRef]]:
        t = min(t, len(self.cats))
        rel = set(self.relevant)
        out = set()
        for idx in itertools.combinations(range(len(self.cats)), t):
            for combo in itertools.product(*(self.cats[i][1] for i in idx)):
                fixed = {i: r for i, r in zip(idx, combo) if i in rel}
                if any(all(f.get(i) == r for i, r in fixed.items()) for f in self.frames()):
                    out.add(frozenset(combo))
        return out


def covered(frames: FrameSet, t: int) -> set[frozenset[ChoiceRef]]:
    out = set()
    for fr in frames:
        for combo in itertools.combinations(fr.choices, min(t, len(fr.choices))):
            out.add(frozenset(combo))
    return out


def check_specials(spec: CpSpec, frames: FrameSet) -> None:
    reported = {r for f in frames.findings for r in f.subject}
    uses = Counter(r for fr in frames for r in fr.choices)
    for ref, ch in spec.choices():
        if ref in reported:
            continue
        if ch.is_error:
            alone = [fr for fr in frames if fr.choices == (ref,)]
            assert uses[ref] == 1 and len(alone) == 1, f"error choice {ref} used {uses[ref]} times"
        elif ch.is_single:
            assert uses[ref] == 1, f"single choice {ref} used {uses[ref]} times"
