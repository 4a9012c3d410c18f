"""Turning test frames into concrete test cases."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, Union

from ..expr.types import render_value
from ..frames import TestFrame
from ..model import ChoiceRef, CpSpec
from .bounded import BoundedEngine
from .problem import (
    DEFAULT_ALPHABET,
    Bounds,
    EngineFailure,
    Sat,
    SolveProblem,
    SolveResult,
    Unknown,
    UnknownReason,
    Unsat,
    UnsupportedForBackend,
    make_problem,
)
from .smt import SmtEngine, emit_smtlib, find_solver


class Engine(Protocol):
    name: str

    def solve(self, problem: SolveProblem, core: bool = True) -> SolveResult: ...


def make_engine(kind: str = "bounded", bounds: Bounds | None = None, timeout_ms: int | None = 10_000, solver: str | None = None) -> Engine:
    bounds = bounds or Bounds()
    if kind == "bounded":
        return BoundedEngine(bounds, timeout_ms)
    if kind == "smt":
        return SmtEngine(bounds, timeout_ms, solver)
    raise ValueError(f"unknown engine {kind!r} (expected 'bounded' or 'smt')")


def build_problem(spec: CpSpec, frame: TestFrame | tuple[ChoiceRef, ...], alphabet: str = DEFAULT_ALPHABET) -> SolveProblem:
    """One labelled assertion per choice of the frame; labels are the choice references."""
    choices = frame.choices if isinstance(frame, TestFrame) else tuple(frame)
    return make_problem(
        spec.var_types,
        [(ref, spec.typed_expression(ref)) for ref in choices],
        {p.name: p.ptype.values for p in spec.all_params if p.ptype.kind == "Enumeration"},
        alphabet,
    )


@dataclass(frozen=True)
class TestCase:
    frame: TestFrame
    values: dict

    __test__ = False

    def rendered(self, spec: CpSpec) -> dict[str, str]:
        return {p.name: render_value(self.values[p.name], p.sem_type) for p in spec.all_params if p.name in self.values}


@dataclass(frozen=True)
class FrameConflict:
    """The frame's choices cannot hold together; ``core`` names a conflicting subset."""

    frame: TestFrame
    core: tuple[ChoiceRef, ...]
    bounds_relative: bool = False


@dataclass(frozen=True)
class Unsolved:
    frame: TestFrame
    reason: UnknownReason
    detail: str = ""


FrameOutcome = Union[TestCase, FrameConflict, Unsolved]


def find_values(spec: CpSpec, frame: TestFrame, engine: Engine, alphabet: str = DEFAULT_ALPHABET) -> FrameOutcome:
    result = engine.solve(build_problem(spec, frame, alphabet))
    if isinstance(result, Sat):
        return TestCase(frame, result.model)
    if isinstance(result, Unsat):
        return FrameConflict(frame, tuple(sorted(result.core)), result.bounds_relative)
    return Unsolved(frame, result.reason, result.detail)


__all__ = [
    "Bounds",
    "BoundedEngine",
    "DEFAULT_ALPHABET",
    "Engine",
    "EngineFailure",
    "FrameConflict",
    "FrameOutcome",
    "Sat",
    "SmtEngine",
    "SolveProblem",
    "SolveResult",
    "TestCase",
    "Unknown",
    "UnknownReason",
    "Unsat",
    "Unsolved",
    "UnsupportedForBackend",
    "build_problem",
    "emit_smtlib",
    "find_solver",
    "find_values",
    "make_engine",
    "make_problem",
]
