from __future__ import annotations

import json
import shutil
from functools import lru_cache
from pathlib import Path

import pytest

from catpart.model import CpSpec, load_spec
from catpart.solver import Bounds

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
DATA = Path(__file__).resolve().parent / "data"

FIXTURE_NAMES = sorted(p.stem for p in FIXTURES.glob("*.cp"))

# Integer ranges wide enough for the year and seconds-of-year domains.
INT_RANGES = {"nextdate": (-10, 3000), "daylight": (-10, 32_000_000)}

HAVE_Z3 = shutil.which("z3") is not None
needs_z3 = pytest.mark.skipif(not HAVE_Z3, reason="z3 not on PATH")


def fixture_bounds(name: str) -> Bounds:
    lo, hi = INT_RANGES.get(name, (-10, 1000))
    return Bounds(int_lo=lo, int_hi=hi)


@lru_cache(maxsize=None)
def fixture_spec(name: str) -> CpSpec:
    return load_spec((FIXTURES / f"{name}.cp").read_text(encoding="utf-8"), name)


@lru_cache(maxsize=None)
def fixture_cases() -> tuple[dict, ...]:
    return tuple(json.loads((DATA / "fixture_cases.json").read_text(encoding="utf-8")))


@pytest.fixture(scope="session")
def triangle() -> CpSpec:
    return fixture_spec("triangle")


@pytest.fixture(params=FIXTURE_NAMES)
def fixture_name(request) -> str:
    return request.param


def pytest_terminal_summary(terminalreporter):
    from .test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
