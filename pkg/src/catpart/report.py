"""Text and line-delimited JSON renderings of findings, frames and test cases.

Structured output is one JSON object per line.  Every object has a ``kind``
field; the schema lives in ``schema/output.schema.json`` at the repository
root and the parsers below invert the emitters exactly.
"""

from __future__ import annotations

import json
from typing import Iterable

from .expr.types import SemType, parse_value, render_value
from .findings import Finding, Severity
from .frames import FrameSet, Origin, TestFrame
from .model import ChoiceRef, CpSpec
from .solver import FrameConflict, FrameOutcome, TestCase, Unsolved
from .verifier import VerificationReport


def quote(text: str) -> str:
    return "'" + text.replace("\\", "\\\\").replace("'", "\\'") + "'"


def unquote(text: str) -> str:
    if len(text) < 2 or text[0] != "'" or text[-1] != "'":
        raise ValueError(f"not a quoted value: {text!r}")
    out, i, body = [], 0, text[1:-1]
    while i < len(body):
        if body[i] == "\\" and i + 1 < len(body):
            out.append(body[i + 1])
            i += 2
        else:
            out.append(body[i])
            i += 1
    return "".join(out)


def value_text(value, ty: SemType | None = None) -> str:
    return render_value(value, ty)


def values_line(spec: CpSpec, values: dict) -> str:
    parts = [f"{p.name} = {quote(value_text(values[p.name], p.sem_type))}" for p in spec.all_params if p.name in values]
    return "values: " + ", ".join(parts)


def parse_values_line(spec: CpSpec, line: str) -> dict:
    """Inverse of :func:`values_line` (values never contain an unescaped quote)."""
    body = line.removeprefix("values:").strip()
    out: dict = {}
    i = 0
    while i < len(body):
        eq = body.index(" = ", i)
        name = body[i:eq].strip().lstrip(",").strip()
        j = eq + 3
        k = j + 1
        while body[k] != "'":
            k += 2 if body[k] == "\\" else 1
        out[name] = parse_value(unquote(body[j : k + 1]), spec.var_types[name])
        i = k + 1
    return out


def describe(spec: CpSpec, frame: TestFrame) -> str:
    parts = []
    for ref in frame.choices:
        p = spec.param(ref.param_id)
        cat = spec.category(ref.category_key)
        parts.append(f"{p.name} = {cat.description} = {spec.resolve(ref).description}")
    return "|".join(parts)


# ---------------------------------------------------------------------------
# Text


def findings_text(report: VerificationReport) -> str:
    lines = []
    for f in report.findings:
        line = f"{f.severity.value}: [{f.check}] {f.subject_text()}: {f.detail}"
        if f.witness:
            line += " (witness: " + ", ".join(f"{k} = {quote(value_text(v))}" for k, v in sorted(f.witness.items())) + ")"
        lines.append(line)
    lines.append(f"passed={'true' if report.passed else 'false'} errors={len(report.errors)} warnings={len(report.warnings)}")
    return "\n".join(lines)


def frames_text(spec: CpSpec, frames: FrameSet) -> str:
    blocks = []
    for n, fr in enumerate(frames.frames, 1):
        blocks.append(f"Test Frame {n}:\n\nchoices: {fr.layout()}\n\n{describe(spec, fr)}\n")
    return "\n".join(blocks)


def outcome_text(spec: CpSpec, n: int, outcome: FrameOutcome) -> str:
    fr = outcome.frame
    head = f"Test Case {n}:\n\nchoices: {fr.layout()}\n\n{describe(spec, fr)}\n\n"
    if isinstance(outcome, TestCase):
        return head + values_line(spec, outcome.values) + "\n"
    if isinstance(outcome, FrameConflict):
        note = " (within search bounds)" if outcome.bounds_relative else ""
        return head + "unsolved: conflict between " + "-|-".join(map(str, outcome.core)) + note + "\n"
    return head + f"unsolved: {outcome.reason.value}" + (f" ({outcome.detail})" if outcome.detail else "") + "\n"


# ---------------------------------------------------------------------------
# Structured records


def finding_record(f: Finding) -> dict:
    rec = {"kind": "finding", "severity": f.severity.value, "check": f.check, "subject": list(f.subject), "detail": f.detail}
    if f.witness is not None:
        rec["witness"] = {k: render_value(v) for k, v in sorted(f.witness.items())}
    return rec


def finding_from_record(rec: dict, spec: CpSpec | None = None) -> Finding:
    witness = None
    if "witness" in rec:
        witness = {k: parse_value(v, spec.var_types[k]) if spec else v for k, v in rec["witness"].items()}
    return Finding(Severity(rec["severity"]), rec["check"], tuple(rec["subject"]), rec["detail"], witness)


def frame_record(fr: TestFrame, index: int, criterion: str) -> dict:
    return {
        "kind": "frame",
        "index": index,
        "criterion": criterion,
        "origin": fr.origin.value,
        "choices": [str(c) for c in fr.choices],
    }


def frame_from_record(rec: dict) -> TestFrame:
    return TestFrame(tuple(ChoiceRef.parse(c) for c in rec["choices"]), Origin(rec["origin"]))


def outcome_record(spec: CpSpec, outcome: FrameOutcome, index: int) -> dict:
    base = {"index": index, "choices": [str(c) for c in outcome.frame.choices]}
    if isinstance(outcome, TestCase):
        return {
            "kind": "case",
            **base,
            "values": {p.name: render_value(outcome.values[p.name], p.sem_type) for p in spec.all_params if p.name in outcome.values},
        }
    if isinstance(outcome, FrameConflict):
        return {"kind": "conflict", **base, "core": [str(c) for c in outcome.core], "bounds_relative": outcome.bounds_relative}
    return {"kind": "unknown", **base, "reason": outcome.reason.value, "detail": outcome.detail}


def outcome_from_record(spec: CpSpec, rec: dict) -> FrameOutcome:
    from .solver import UnknownReason

    frame = TestFrame(tuple(ChoiceRef.parse(c) for c in rec["choices"]))
    if rec["kind"] == "case":
        return TestCase(frame, {k: parse_value(v, spec.var_types[k]) for k, v in rec["values"].items()})
    if rec["kind"] == "conflict":
        return FrameConflict(frame, tuple(ChoiceRef.parse(c) for c in rec["core"]), rec["bounds_relative"])
    return Unsolved(frame, UnknownReason(rec["reason"]), rec["detail"])


def dumps(records: Iterable[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)


def loads(text: str) -> list[dict]:
    return [json.loads(line) for line in text.splitlines() if line.strip()]
