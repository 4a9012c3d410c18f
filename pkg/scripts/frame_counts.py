#!/usr/bin/env python3
"""Print frame counts per fixture and criterion next to the reference windows."""

from __future__ import annotations

import argparse
import json
import time
from pathlib import Path

from catpart.frames import Criterion, generate_frames
from catpart.model import load_spec

ROOT = Path(__file__).resolve().parent.parent


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fixtures", type=Path, default=ROOT / "fixtures")
    ap.add_argument("--reference", type=Path, default=ROOT / "tests" / "data" / "frame_counts.json")
    args = ap.parse_args()

    ref = json.loads(args.reference.read_text(encoding="utf-8"))
    print(f"{'fixture':<14}" + "".join(f"{c.value:>16}" for c in Criterion) + "   seconds")
    outside = 0
    for path in sorted(args.fixtures.glob("*.cp")):
        spec = load_spec(path.read_text(encoding="utf-8"), path.stem)
        row = ref.get(path.stem)
        cells = []
        start = time.perf_counter()
        for crit in Criterion:
            n = len(generate_frames(spec, crit))
            mark = ""
            if row:
                if crit is Criterion.BASE_CHOICE:
                    lo, hi = row["base"] - 1, row["base"] + 1
                else:
                    a, b = row["tool_a"][crit.strength - 1], row["tool_b"][crit.strength - 1]
                    lo, hi = min(a, b), max(a, b) + 2
                mark = f" [{lo}-{hi}]" + ("" if lo <= n <= hi else "!")
                outside += not lo <= n <= hi
            cells.append(f"{n}{mark}")
        print(f"{path.stem:<14}" + "".join(f"{c:>16}" for c in cells) + f"   {time.perf_counter() - start:.2f}")
    return 1 if outside else 0


if __name__ == "__main__":
    raise SystemExit(main())
