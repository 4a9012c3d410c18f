from __future__ import annotations

import pytest
from hypothesis import HealthCheck, given, settings

from catpart.model import (
    ChoiceRef,
    CpSpec,
    DslParseError,
    DuplicateId,
    DuplicateName,
    NotFound,
    Special,
    UnknownType,
    load_spec,
    resolve,
    save_spec,
    stable_id,
)

from .conftest import DATA, FIXTURE_NAMES, FIXTURES, fixture_spec
from .strategies import spec_texts

MINIMAL = """\
Parameter(7): x of type Integer
  Category 1 - Only
    *Ch 1.1: Positive
      x > 0
"""


def counts(spec: CpSpec) -> tuple[int, int, int]:
    cats = list(spec.categories())
    return len(spec.all_params), len(cats), sum(len(c.choices) for _, c in cats)


def test_triangle_shape(triangle):
    assert counts(triangle) == (3, 9, 18)
    assert [p.name for p in triangle.parameters] == ["SA", "SB", "SC"]


def test_tcas_shape():
    spec = fixture_spec("tcas")
    assert (len(spec.parameters), len(spec.env_vars)) == (11, 1)
    assert counts(spec)[1:] == (12, 39)
    assert spec.env_vars[0].is_env


def test_minimal_spec_parses():
    spec = load_spec(MINIMAL)
    assert counts(spec) == (1, 1, 1)


def test_annotations_in_any_order():
    text = MINIMAL + "    Ch 1.2: Other\n      x <= 0\n      [properties a b][error]\n"
    ch = load_spec(text).parameters[0].categories[0].choices[1]
    assert ch.special is Special.ERROR and set(ch.properties) == {"a", "b"}


def test_expression_may_wrap():
    text = MINIMAL.replace("x > 0\n", "x > 0 &&\n      x < 10\n")
    assert load_spec(text).parameters[0].categories[0].choices[0].expression is not None


def test_enumeration_values_declared():
    text = "Parameter(1): z of type Enumeration(Core, Suburb)\n  Category 1 - Zone\n    *Ch 1.1: Core\n      z == Core\n"
    spec = load_spec(text)
    assert spec.parameters[0].ptype.values == ("Core", "Suburb")


def test_missing_id_uses_stable_hash():
    spec = load_spec(MINIMAL.replace("Parameter(7)", "Parameter"))
    assert spec.parameters[0].id == stable_id("x")


class TestErrors:
    def test_duplicate_id(self):
        with pytest.raises(DuplicateId):
            load_spec(MINIMAL + MINIMAL.replace(": x ", ": y ").replace("x > 0", "y > 0"))

    def test_duplicate_name(self):
        with pytest.raises(DuplicateName):
            load_spec(MINIMAL + MINIMAL.replace("(7)", "(8)"))

    def test_unknown_type(self):
        with pytest.raises(UnknownType):
            load_spec("Parameter(1): a of type Foo\n")

    def test_bad_expression_position(self):
        with pytest.raises(DslParseError) as info:
            load_spec(MINIMAL.replace("x > 0", "x >"))
        err = info.value
        assert err.line == 4
        assert "IDENTIFIER" in err.expected

    def test_garbage_line(self):
        with pytest.raises(DslParseError):
            load_spec("hello world\n")


class TestResolve:
    def test_existing_choice(self, triangle):
        assert resolve(triangle, ChoiceRef(2638, 1, 1)).description == "Strictly positive"

    @pytest.mark.parametrize("ref", [ChoiceRef(2638, 0, 1), ChoiceRef(2638, 9, 1), ChoiceRef(1, 1, 1), ChoiceRef(2638, 1, 5)])
    def test_dangling(self, triangle, ref):
        with pytest.raises(NotFound):
            resolve(triangle, ref)

    def test_text_form(self):
        assert ChoiceRef.parse(str(ChoiceRef(2638, 2, 1))) == ChoiceRef(2638, 2, 1)


class TestSave:
    def test_golden_triangle(self, triangle):
        assert save_spec(triangle) == (DATA / "triangle.canonical.cp").read_text(encoding="utf-8")

    def test_empty_spec_is_header_only(self):
        assert save_spec(CpSpec("Empty", (), ())) == "Specification: Empty\n"

    def test_env_var_block(self):
        text = save_spec(fixture_spec("tcas"))
        assert "Variable(976751556): Positive_RA_Alt_Thresh of type Integer" in text

    @pytest.mark.parametrize("name", FIXTURE_NAMES)
    def test_fixture_round_trip(self, name):
        spec = fixture_spec(name)
        again = load_spec(save_spec(spec), name)
        assert again == spec
        assert save_spec(again) == save_spec(spec)

    def test_order_preserved(self):
        for path in FIXTURES.glob("*.cp"):
            spec = fixture_spec(path.stem)
            headers = [line.split(":")[1].split()[0] for line in path.read_text().splitlines() if line.startswith(("Parameter", "Variable"))]
            assert [p.name for p in spec.all_params] == headers


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(spec_texts())
def test_random_round_trip(text):
    spec = load_spec(text)
    assert load_spec(save_spec(spec)) == spec
