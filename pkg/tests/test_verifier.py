from __future__ import annotations

import pytest

from catpart.expr import compile_expr, holds
from catpart.findings import Severity
from catpart.model import ChoiceRef, load_spec
from catpart.solver import BoundedEngine, Bounds, make_engine
from catpart.verifier import VerifyOptions, check_coverage, check_overlap, check_structure, verify

from . import pipeline
from .conftest import FIXTURE_NAMES, FIXTURES, fixture_bounds, fixture_spec, needs_z3


def bounded(name: str | None = None) -> BoundedEngine:
    return BoundedEngine(fixture_bounds(name) if name else Bounds())


def mutated_triangle():
    text = (FIXTURES / "triangle.cp").read_text().replace("      SA<=0\n", "      SA<=1\n", 1)
    return load_spec(text, "triangle-mutated")


LENGTH_AS_INTEGER = """\
Parameter(1): Len of type Integer
  Category 1 - Length
    Ch 1.1: Empty
      Len == 0
    *Ch 1.2: Non-empty
      Len >= 1
Parameter(2): K of type Integer
  Category 1 - K
    *Ch 1.1: Any
      K >= 0
    Ch 1.2: Negative
      K < 0
"""

LENGTH_AS_STRING = """\
Parameter(1): S of type String
  Category 1 - Length
    Ch 1.1: Empty
      S.length() == 0
    *Ch 1.2: Non-empty
      S.length() >= 1
Parameter(2): K of type Integer
  Category 1 - K
    *Ch 1.1: Any
      K >= 0
    Ch 1.2: Negative
      K < 0
"""


def test_disjoint_triangle_choices(triangle):
    sa = triangle.parameters[0]
    assert check_overlap(triangle, sa, sa.categories[0], bounded()) == []


def test_overlap_reported_with_witness():
    spec = mutated_triangle()
    sa = spec.parameters[0]
    (finding,) = check_overlap(spec, sa, sa.categories[0], bounded())
    assert finding.severity is Severity.ERROR and finding.check == "overlap"
    assert finding.subject == (str(ChoiceRef(2638, 1, 1)), str(ChoiceRef(2638, 1, 2)))
    for ref in (ChoiceRef(2638, 1, 1), ChoiceRef(2638, 1, 2)):
        assert holds(compile_expr(spec.typed_expression(ref)), finding.witness)
    assert not verify(spec, bounded()).passed


def test_length_gap_as_integer():
    spec = load_spec(LENGTH_AS_INTEGER)
    p = spec.parameters[0]
    (finding,) = check_coverage(spec, p, p.categories[0], bounded())
    assert finding.severity is Severity.WARNING
    assert finding.witness["Len"] < 0
    rep = verify(spec, bounded())
    assert rep.passed and rep.warnings


def test_length_gap_closed_by_string_type():
    spec = load_spec(LENGTH_AS_STRING)
    p = spec.parameters[0]
    assert check_coverage(spec, p, p.categories[0], bounded()) == []


def test_single_parameter_is_an_error():
    spec = load_spec("Parameter(1): x of type Integer\n  Category 1 - Only\n    *Ch 1.1: Any\n      x > 0\n")
    checks = {(f.severity, f.check) for f in check_structure(spec)}
    assert (Severity.ERROR, "structure") in checks
    assert not verify(spec, bounded()).passed


@pytest.mark.parametrize(
    "edit, check",
    [
        (lambda t: t.replace("*Ch 1.1: Any", "Ch 1.1: Any"), "structure"),
        (lambda t: t.replace("      K < 0\n", "      K < 0\n      [if ghost]\n"), "selector"),
        (lambda t: t.replace("      K < 0\n", "      K < \"a\"\n"), "type"),
    ],
    ids=["no-base", "undeclared-property", "ill-typed"],
)
def test_structural_defects(edit, check):
    spec = load_spec(edit(LENGTH_AS_STRING))
    assert check in {f.check for f in check_structure(spec) if f.is_error}


def test_duplicate_category_name():
    text = LENGTH_AS_STRING + "  Category 2 - K\n    *Ch 2.1: Small\n      K < 5\n    Ch 2.2: Large\n      K >= 5\n"
    assert any("duplicate category" in f.detail for f in check_structure(load_spec(text)))
    # The same description under another parameter is fine.
    assert check_structure(load_spec(LENGTH_AS_STRING.replace("Category 1 - K", "Category 1 - Length"))) == []


def test_one_choice_category():
    text = LENGTH_AS_STRING.replace("    Ch 1.2: Negative\n      K < 0\n", "")
    assert any("at least two choices" in f.detail for f in check_structure(load_spec(text)))


def test_conflicting_base_choices():
    text = LENGTH_AS_STRING.replace("      K >= 0\n", "      K >= 0 && S.length() == 0\n")
    rep = verify(load_spec(text), bounded(), VerifyOptions(coverage_warnings=False))
    base = [f for f in rep.errors if f.check == "base-values"]
    assert base and set(base[0].subject) == {"1Cat1Ch2", "2Cat1Ch1"}


def test_parallel_matches_serial(triangle):
    serial = verify(triangle, bounded())
    parallel = verify(triangle, bounded(), VerifyOptions(jobs=4))
    assert serial.findings == parallel.findings


@pytest.mark.slow
@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_fixture_verifies(name):
    rep = pipeline.report(name)
    assert rep.passed, [f for f in rep.errors]


@needs_z3
@pytest.mark.smt
@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_fixture_verifies_with_smt(name):
    rep = verify(fixture_spec(name), make_engine("smt", fixture_bounds(name)))
    assert rep.passed, [f for f in rep.errors]
