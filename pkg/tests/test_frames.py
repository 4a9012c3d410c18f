from __future__ import annotations

import pytest
from hypothesis import HealthCheck, given, settings

from catpart.frames import Criterion, Origin, frame_is_valid, generate_frames, subsumption_audit
from catpart.model import load_spec

from .conftest import FIXTURE_NAMES, fixture_spec
from .oracles import COVERING, Oracle, check_specials, covered, window
from .strategies import spec_texts


@pytest.mark.parametrize("criterion", list(Criterion), ids=lambda c: c.value)
@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_count_window(name, criterion):
    lo, hi = window(name, criterion)
    assert lo <= len(generate_frames(fixture_spec(name), criterion)) <= hi


@pytest.mark.parametrize("name, expected", [("triangle", 10), ("nextdate", 13), ("taxi", 10), ("grocery", 10)])
def test_base_choice_exact(name, expected):
    assert len(generate_frames(fixture_spec(name), Criterion.BASE_CHOICE)) == expected


@pytest.mark.parametrize("criterion", COVERING, ids=lambda c: c.value)
@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_covers_every_feasible_tuple(name, criterion):
    spec = fixture_spec(name)
    frames = generate_frames(spec, criterion)
    missing = Oracle(spec).feasible(criterion.strength) - covered(frames, criterion.strength)
    assert not missing, sorted(map(sorted, missing))[:5]


@pytest.mark.parametrize("criterion", list(Criterion), ids=lambda c: c.value)
@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_frames_are_valid_and_specials_behave(name, criterion):
    spec = fixture_spec(name)
    frames = generate_frames(spec, criterion)
    assert not [f for f in frames.findings if f.is_error]
    assert all(frame_is_valid(fr, spec) for fr in frames)
    assert subsumption_audit(frames, spec) == []
    check_specials(spec, frames)


def test_base_choice_layout(triangle):
    frames = generate_frames(triangle, Criterion.BASE_CHOICE)
    first = frames.frames[0]
    bases = {triangle.base_ref((p.id, c.index)) for p, c in triangle.categories()}
    assert set(first.choices) == bases
    errors = [fr for fr in frames if fr.origin is Origin.ERROR_SINGLETON]
    assert len(errors) == 3 and all(len(fr) == 1 for fr in errors)


def test_deterministic(triangle):
    a = generate_frames(triangle, Criterion.PAIRWISE)
    b = generate_frames(triangle, Criterion.PAIRWISE)
    assert [f.choices for f in a] == [f.choices for f in b]


def test_criterion_aliases():
    assert Criterion.parse("2") is Criterion.PAIRWISE
    assert Criterion.parse("Base") is Criterion.BASE_CHOICE
    with pytest.raises(ValueError):
        Criterion.parse("four-way")


@settings(max_examples=80, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(spec_texts())
def test_random_specs(text):
    spec = load_spec(text)
    oracle = Oracle(spec)
    for criterion in (Criterion.EACH_CHOICE, Criterion.PAIRWISE):
        frames = generate_frames(spec, criterion)
        assert all(frame_is_valid(fr, spec) for fr in frames)
        check_specials(spec, frames)
        missing = oracle.feasible(criterion.strength) - covered(frames, criterion.strength)
        assert not missing
    base = generate_frames(spec, Criterion.BASE_CHOICE)
    assert all(frame_is_valid(fr, spec) for fr in base)
