"""Acceptance run: one PASS/FAIL line per criterion.

The lines are printed by each test and repeated in the terminal summary (see
``conftest.pytest_terminal_summary``), so they survive output capturing.
"""

from __future__ import annotations

import time

import pytest
from click.testing import CliRunner

from catpart.cli import main
from catpart.expr import compile_expr, holds
from catpart.findings import Severity
from catpart.frames import Criterion, TestFrame, frame_is_valid, subsumption_audit
from catpart.model import ChoiceRef, load_spec
from catpart.solver import BoundedEngine, FrameConflict, Sat, TestCase, Unsat, build_problem, find_values
from catpart.verifier import check_coverage, check_overlap

from . import pipeline
from .conftest import FIXTURE_NAMES, FIXTURES, HAVE_Z3, fixture_spec
from .oracles import COVERING, Oracle, check_specials, covered, window
from .test_conformance import CASES, failures
from .test_verifier import LENGTH_AS_INTEGER, mutated_triangle

RESULTS: dict[int, str] = {}


def record(n: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


def test_criterion_1_fixture_replay():
    start = time.perf_counter()
    total = bad = 0
    problems = []
    for name in FIXTURE_NAMES:
        spec = fixture_spec(name)
        if not pipeline.report(name).passed:
            problems.append(f"{name} failed verification")
            continue
        for crit in Criterion:
            for outcome in pipeline.cases(name, crit):
                total += 1
                if not pipeline.case_holds(spec, outcome):
                    bad += 1
                    problems.append(f"{name}/{crit.value}/{'-|-'.join(map(str, outcome.frame.choices))}")
    elapsed = time.perf_counter() - start
    record(1, not problems and elapsed < 60, f"{total - bad}/{total} frames solved and validated in {elapsed:.1f}s {problems[:3] or ''}".rstrip())


def test_criterion_2_frame_counts():
    misses = []
    for name in FIXTURE_NAMES:
        for crit in Criterion:
            lo, hi = window(name, crit)
            n = len(pipeline.frames(name, crit))
            if not lo <= n <= hi:
                misses.append(f"{name}/{crit.value}={n} not in [{lo},{hi}]")
    exact = {"triangle": 10, "nextdate": 13, "taxi": 10, "grocery": 10}
    for name, want in exact.items():
        got = len(pipeline.frames(name, Criterion.BASE_CHOICE))
        if got != want:
            misses.append(f"{name}/base-choice={got} expected {want}")
    record(2, not misses, f"{len(FIXTURE_NAMES) * 4} counts checked; {'; '.join(misses) or 'all inside their windows'}")


def test_criterion_3_verification_checks():
    notes = []
    tri = fixture_spec("triangle")
    sa = tri.parameters[0]
    res = BoundedEngine().solve(build_problem(tri, (ChoiceRef(2638, 1, 1), ChoiceRef(2638, 1, 2))))
    a = isinstance(res, Unsat) and check_overlap(tri, sa, sa.categories[0], BoundedEngine()) == []
    notes.append(f"(a) {'ok' if a else 'bad'}")

    mut = mutated_triangle()
    found = check_overlap(mut, mut.parameters[0], mut.parameters[0].categories[0], BoundedEngine())
    b = bool(found) and found[0].severity is Severity.ERROR and all(
        holds(compile_expr(mut.typed_expression(ChoiceRef.parse(r))), found[0].witness) for r in found[0].subject
    )
    notes.append(f"(b) {'ok' if b else 'bad'}")

    gap = load_spec(LENGTH_AS_INTEGER)
    p = gap.parameters[0]
    warn = check_coverage(gap, p, p.categories[0], BoundedEngine())
    c = len(warn) == 1 and warn[0].severity is Severity.WARNING and warn[0].witness is not None
    notes.append(f"(c) {'ok' if c else 'bad'}")

    failed = [n for n in FIXTURE_NAMES if not pipeline.report(n).passed]
    notes.append(f"(d) {9 - len(failed)}/9 fixtures pass")
    record(3, a and b and c and not failed, ", ".join(notes))


def test_criterion_4_conflict_core():
    text = (FIXTURES / "triangle.cp").read_text().replace("SA>=SB+SC", "SA>SB+SC")
    spec = load_spec(text, "triangle-strict")
    triple = {ChoiceRef(2638, 2, 2), ChoiceRef(2640, 3, 2), ChoiceRef(2638, 3, 1)}
    frame = TestFrame(tuple(sorted(triple | {ChoiceRef(2638, 1, 1), ChoiceRef(2639, 1, 1), ChoiceRef(2639, 2, 2)})))
    engine = BoundedEngine()
    out = find_values(spec, frame, engine)
    core = set(out.core) if isinstance(out, FrameConflict) else set()
    again = engine.solve(build_problem(spec, tuple(sorted(core))), core=False) if core else None
    ok = core == triple and isinstance(again, Unsat)
    exprs = ", ".join(sorted(str(r) for r in core)) or type(out).__name__
    record(4, ok, f"core = {{{exprs}}}; re-solved core is {again.verdict if again else 'n/a'}")


def test_criterion_5_coverage_properties():
    problems = []
    for name in FIXTURE_NAMES:
        spec = fixture_spec(name)
        oracle = Oracle(spec)
        for crit in Criterion:
            frames = pipeline.frames(name, crit)
            if crit in COVERING:
                missing = oracle.feasible(crit.strength) - covered(frames, crit.strength)
                if missing:
                    problems.append(f"{name}/{crit.value}: {len(missing)} uncovered tuples")
            if subsumption_audit(frames, spec):
                problems.append(f"{name}/{crit.value}: subsumption audit not empty")
            if not all(frame_is_valid(f, spec) for f in frames):
                problems.append(f"{name}/{crit.value}: invalid frame")
            try:
                check_specials(spec, frames)
            except AssertionError as exc:
                problems.append(f"{name}/{crit.value}: {exc}")
    record(5, not problems, "; ".join(problems) or "all tuples covered, audits empty, specials used once")


@pytest.mark.skipif(not HAVE_Z3, reason="z3 not on PATH")
def test_criterion_6_engine_agreement():
    disagree, seen = [], set()
    for name in FIXTURE_NAMES:
        spec = fixture_spec(name)
        smt = pipeline.smt_engine(name)
        for crit in Criterion:
            for outcome in pipeline.cases(name, crit):
                key = outcome.frame.choices
                if key in seen:
                    continue
                seen.add(key)
                prob = build_problem(spec, outcome.frame)
                res = smt.solve(prob, core=False)
                if res.verdict != ("sat" if isinstance(outcome, TestCase) else "unsat"):
                    disagree.append(f"{name}/{'-|-'.join(map(str, key))}: {res.verdict}")
                elif isinstance(res, Sat) and not all(holds(compile_expr(e), res.model) for _, e in prob.labeled_assertions):
                    disagree.append(f"{name}: model does not validate")
    record(6, not disagree, f"{len(seen) - len(disagree)}/{len(seen)} distinct frames agree {disagree[:3] or ''}".rstrip())


def test_criterion_7_expression_conformance():
    bad = [f"{c['fixture']} listing {c['listing']} case {c['case']}" for c in CASES if failures(c)]
    detail = f"{len(CASES) - len(bad)}/{len(CASES)} reference cases hold"
    if bad:
        detail += "; contradicted by their own labels: " + ", ".join(bad)
    record(7, len(CASES) >= 300 and not bad, detail)


def test_criterion_8_performance():
    slow = []
    worst = 0.0
    runner = CliRunner()
    for name in FIXTURE_NAMES:
        start = time.perf_counter()
        res = runner.invoke(main, ["stats", str(FIXTURES / f"{name}.cp")])
        elapsed = time.perf_counter() - start
        worst = max(worst, elapsed)
        if res.exit_code != 0 or elapsed >= 10:
            slow.append(f"{name} {elapsed:.1f}s exit={res.exit_code}")
    record(8, not slow, f"slowest stats run {worst:.2f}s for all four criteria {slow or ''}".rstrip())
