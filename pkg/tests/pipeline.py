"""verify, frames and cases over the fixtures, cached for the whole session."""

from __future__ import annotations

from functools import lru_cache

from catpart.expr import compile_expr, holds
from catpart.frames import Criterion, FrameSet, generate_frames
from catpart.model import CpSpec
from catpart.solver import BoundedEngine, FrameOutcome, TestCase, find_values, make_engine
from catpart.verifier import VerificationReport, verify

from .conftest import fixture_bounds, fixture_spec


@lru_cache(maxsize=None)
def report(name: str) -> VerificationReport:
    return verify(fixture_spec(name), BoundedEngine(fixture_bounds(name)))


@lru_cache(maxsize=None)
def frames(name: str, criterion: Criterion) -> FrameSet:
    return generate_frames(fixture_spec(name), criterion)


@lru_cache(maxsize=None)
def cases(name: str, criterion: Criterion) -> tuple[FrameOutcome, ...]:
    engine = BoundedEngine(fixture_bounds(name))
    spec = fixture_spec(name)
    return tuple(find_values(spec, fr, engine) for fr in frames(name, criterion))


@lru_cache(maxsize=None)
def smt_engine(name: str):
    return make_engine("smt", fixture_bounds(name))


def case_holds(spec: CpSpec, outcome: FrameOutcome) -> bool:
    if not isinstance(outcome, TestCase):
        return False
    return all(holds(compile_expr(spec.typed_expression(r)), outcome.values) for r in outcome.frame.choices)
