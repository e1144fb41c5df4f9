"""Shared fixtures and hypothesis configuration for the test suite."""

from __future__ import annotations

import os

import pytest
from hypothesis import HealthCheck, settings

from defectlab import BaseField, parse_group, series_from_literal

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile(
    "thorough",
    deadline=None,
    max_examples=300,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("DEFECTLAB_HYPOTHESIS_PROFILE", "default"))


GROUP_LITERALS = ("Z", "Z[1/2]", "Z[1/3]", "Q", "QxZ", "QxZ[1/2]")


@pytest.fixture(params=GROUP_LITERALS)
def any_group(request):
    return parse_group(request.param)


@pytest.fixture
def rational_group():
    return parse_group("Q")


@pytest.fixture(params=(2, 3, 5))
def prime(request):
    return request.param


def abhyankar_field(p: int) -> BaseField:
    return BaseField.make("perfect_hull_rational_function", p)


def abhyankar_rhs(p: int):
    return series_from_literal(p, "t^-1")
