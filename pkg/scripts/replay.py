#!/usr/bin/env python3
"""Run verify, frames and cases over every fixture and validate each test case.

Each value set is checked against every choice expression of its frame with
the reference interpreter.  Exits non-zero on any unsolved or invalid case.
"""

from __future__ import annotations

import argparse
import time
from pathlib import Path

from catpart.expr import compile_expr, holds
from catpart.frames import Criterion, generate_frames
from catpart.model import load_spec
from catpart.solver import Bounds, TestCase, find_values, make_engine
from catpart.verifier import verify

ROOT = Path(__file__).resolve().parent.parent
INT_RANGES = {"nextdate": (-10, 3000), "daylight": (-10, 32_000_000)}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--fixtures", type=Path, default=ROOT / "fixtures")
    ap.add_argument("--engine", choices=["bounded", "smt"], default="bounded")
    args = ap.parse_args()

    failures = 0
    grand = time.perf_counter()
    for path in sorted(args.fixtures.glob("*.cp")):
        spec = load_spec(path.read_text(encoding="utf-8"), path.stem)
        lo, hi = INT_RANGES.get(path.stem, (-10, 1000))
        engine = make_engine(args.engine, Bounds(int_lo=lo, int_hi=hi))
        t0 = time.perf_counter()
        rep = verify(spec, engine)
        t1 = time.perf_counter()
        solved = total = 0
        for crit in Criterion:
            for fr in generate_frames(spec, crit):
                total += 1
                out = find_values(spec, fr, engine)
                if isinstance(out, TestCase) and all(
                    holds(compile_expr(spec.typed_expression(r)), out.values) for r in fr.choices
                ):
                    solved += 1
                else:
                    print(f"  {path.stem} {crit.value}: {'-|-'.join(map(str, fr.choices))} -> {type(out).__name__}")
        t2 = time.perf_counter()
        failures += (total - solved) + (not rep.passed)
        print(
            f"{path.stem:<14} verify={'pass' if rep.passed else 'FAIL'} ({len(rep.warnings)} warnings, {t1 - t0:.1f}s)"
            f"  cases={solved}/{total} ({t2 - t1:.1f}s)"
        )
    print(f"total {time.perf_counter() - grand:.1f}s, failures={failures}")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
