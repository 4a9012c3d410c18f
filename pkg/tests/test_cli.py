from __future__ import annotations

import json
import re

import jsonschema
import pytest
from click.testing import CliRunner

from catpart import report
from catpart.cli import main
from catpart.expr import compile_expr, holds
from catpart.frames import Criterion, generate_frames
from catpart.model import ChoiceRef
from catpart.solver import TestCase

from .conftest import FIXTURES, ROOT, fixture_spec, needs_z3

SCHEMA = json.loads((ROOT / "schema" / "output.schema.json").read_text(encoding="utf-8"))
TRIANGLE = str(FIXTURES / "triangle.cp")


def invoke(*args: str):
    return CliRunner().invoke(main, list(args), catch_exceptions=False)


@pytest.fixture
def mutated(tmp_path):
    path = tmp_path / "mutated.cp"
    path.write_text((FIXTURES / "triangle.cp").read_text().replace("      SA<=0\n", "      SA<=1\n", 1))
    return str(path)


def validate_records(text: str) -> list[dict]:
    recs = report.loads(text)
    for rec in recs:
        jsonschema.validate(rec, SCHEMA)
    return recs


class TestExitCodes:
    def test_verify_clean(self):
        res = invoke("verify", TRIANGLE)
        assert res.exit_code == 0
        assert res.output.strip().endswith("passed=true errors=0 warnings=0")

    def test_verify_findings(self, mutated):
        res = invoke("verify", mutated)
        assert res.exit_code == 1
        assert "Error: [overlap]" in res.output

    def test_frames_gated_by_verification(self, mutated):
        assert invoke("frames", mutated).exit_code == 1
        forced = invoke("frames", mutated, "--force")
        assert forced.exit_code == 0 and "Test Frame 1:" in forced.output

    def test_missing_file(self, tmp_path):
        assert invoke("verify", str(tmp_path / "absent.cp")).exit_code == 2

    def test_parse_error(self, tmp_path):
        bad = tmp_path / "bad.cp"
        bad.write_text("Parameter(1): x of type Integer\n  Category 1 - c\n    *Ch 1.1: a\n      x >\n")
        res = invoke("verify", str(bad))
        assert res.exit_code == 2
        assert "line 4" in res.output

    def test_solver_not_found(self):
        res = invoke("verify", TRIANGLE, "--engine", "external", "--solver", "/nonexistent/z3")
        assert res.exit_code == 3

    def test_bad_option_value(self):
        assert invoke("frames", TRIANGLE, "--int-range", "oops").exit_code == 2
        assert invoke("frames", TRIANGLE, "--criterion", "seven-way").exit_code == 2


class TestText:
    def test_frames_layout(self, triangle):
        res = invoke("frames", TRIANGLE, "-c", "base-choice")
        assert res.exit_code == 0
        blocks = re.findall(r"Test Frame (\d+):\n\nchoices: (.+)\n\n(.+)\n", res.output)
        assert len(blocks) == 10
        n, layout, desc = blocks[0]
        refs = [ChoiceRef.parse(c) for c in layout.split("-|-")]
        assert len(refs) == 9
        assert desc.split("|")[0] == "SA = Values for SA = Strictly positive"
        assert res.output.rstrip().endswith("criterion=base-choice frames=10")

    def test_cases_values_validate(self, triangle):
        res = invoke("cases", TRIANGLE, "-c", "each-choice")
        assert res.exit_code == 0
        cases = re.findall(r"choices: (.+)\n\n.+\n\n(values: .+)\n", res.output)
        assert len(cases) == len(generate_frames(triangle, Criterion.EACH_CHOICE))
        for layout, line in cases:
            values = report.parse_values_line(triangle, line)
            for c in layout.split("-|-"):
                assert holds(compile_expr(triangle.typed_expression(ChoiceRef.parse(c))), values)
        assert re.search(r"solved=\d+ unsolved=0 time=", res.output)

    def test_stats_row(self):
        res = invoke("stats", str(FIXTURES / "tcas.cp"))
        assert res.exit_code == 0
        assert "row: TCAS 10 23 59 28" in res.output

    def test_quote_round_trip(self):
        for text in ["", "it's", "a\\b", "'"]:
            assert report.unquote(report.quote(text)) == text


class TestStructured:
    def test_verify_records(self, mutated):
        res = invoke("verify", mutated, "--format", "structured")
        recs = validate_records(res.output)
        assert recs[-1] == {"kind": "verification", "passed": False, "errors": 1, "warnings": 0}
        finding = report.finding_from_record(recs[0], fixture_spec("triangle"))
        assert finding.witness is not None and finding.witness["SA"] == 1

    def test_frames_records_round_trip(self, triangle):
        res = invoke("frames", TRIANGLE, "-c", "pairwise", "--format", "structured")
        recs = validate_records(res.output)
        frames = [report.frame_from_record(r) for r in recs if r["kind"] == "frame"]
        expected = generate_frames(triangle, Criterion.PAIRWISE)
        assert [f.choices for f in frames] == [f.choices for f in expected]
        assert [f.origin for f in frames] == [f.origin for f in expected]
        assert recs[-1]["kind"] == "summary" and recs[-1]["frames"] == len(expected)

    def test_cases_records_round_trip(self):
        spec = fixture_spec("intset")
        res = invoke("cases", str(FIXTURES / "intset.cp"), "-c", "base-choice", "--format", "structured")
        recs = validate_records(res.output)
        outcomes = [report.outcome_from_record(spec, r) for r in recs if r["kind"] == "case"]
        assert outcomes and all(isinstance(o, TestCase) for o in outcomes)
        for o, rec in zip(outcomes, (r for r in recs if r["kind"] == "case")):
            assert report.outcome_record(spec, o, rec["index"]) == rec

    def test_stats_records(self):
        recs = validate_records(invoke("stats", TRIANGLE, "--format", "structured").output)
        assert [r["criterion"] for r in recs] == [c.value for c in Criterion]


@needs_z3
def test_external_engine_cases():
    res = invoke("cases", str(FIXTURES / "char_search.cp"), "-c", "pairwise", "--engine", "external")
    assert res.exit_code == 0
    assert "unsolved=0" in res.output
