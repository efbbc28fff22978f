import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nfrgauge.dsl import parse, serialize
from nfrgauge.dsl.model import RequirementSpec

from conftest import FIXTURES
from specgen import random_spec


def roundtrip(spec):
    text = serialize(spec)
    result = parse(text)
    assert result.ok, [d.format() for d in result.diagnostics]
    return result.spec, text


@pytest.mark.parametrize("path", sorted(p.name for p in FIXTURES.glob("*.nfr")))
def test_fixture_roundtrip(path):
    spec = parse((FIXTURES / path).read_text()).spec
    again, text = roundtrip(spec)
    assert again == spec
    assert serialize(again) == text


def test_inf_shoulder_survives():
    text = ('project "p" {\n  linguistic v over x {\n    term lo: trapezoid(-inf, -inf, 1, 2);\n'
            '    term hi: trapezoid(1, 2, inf, inf);\n  }\n}\n')
    spec = parse(text).spec
    out = serialize(spec)
    assert "inf, inf" in out
    assert parse(out).spec.variable("v").term("hi").d == math.inf


def test_empty_project():
    spec = RequirementSpec(project="name")
    assert serialize(spec) == 'project "name" {}\n'
    assert parse(serialize(spec)).spec == spec


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_specs_roundtrip(seed):
    spec = random_spec(random.Random(seed))
    again, text = roundtrip(spec)
    assert again == spec
    assert serialize(again) == text
