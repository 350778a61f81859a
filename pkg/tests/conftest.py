from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from contiguity import SimplicialComplex, parse_complex
from contiguity.formats import read_complex, read_map

FIXTURES = Path(__file__).resolve().parent.parent / "src" / "contiguity" / "fixtures"

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def fixture_complex(name: str) -> SimplicialComplex:
    return read_complex(FIXTURES / f"{name}.cplx")


def fixture_map(name: str):
    return read_map(FIXTURES / f"{name}.map")


@pytest.fixture
def boundary() -> SimplicialComplex:
    return parse_complex("a b\nb c\nc a")


@pytest.fixture
def fig3() -> SimplicialComplex:
    return fixture_complex("fig3")


@pytest.fixture
def delta2() -> SimplicialComplex:
    return parse_complex("a b c")
