"""Shared fixtures for the test suite."""
from __future__ import annotations

import os
import random

import pytest

from sheafflow.quantale import (
    BooleanQuantale,
    FiniteChainQuantale,
    FinitePowersetQuantale,
    LawvereRealsQuantale,
    UnitIntervalQuantale,
)

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def fixture_path(name: str) -> str:
    return os.path.abspath(os.path.join(FIXTURES, name))


@pytest.fixture(name="fixture_path")
def _fixture_path_fixture():
    return fixture_path


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)


@pytest.fixture(params=["boolean", "chain3", "chain5", "powerset2"])
def finite_quantale(request):
    return {
        "boolean": BooleanQuantale(),
        "chain3": FiniteChainQuantale(3),
        "chain5": FiniteChainQuantale(5),
        "powerset2": FinitePowersetQuantale([0, 1]),
    }[request.param]


@pytest.fixture(params=["product", "lukasiewicz", "min", "lawvere"])
def float_quantale(request):
    if request.param == "lawvere":
        return LawvereRealsQuantale()
    return UnitIntervalQuantale(request.param)
