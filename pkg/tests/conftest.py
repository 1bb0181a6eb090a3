from __future__ import annotations

import pytest

from benchlattice.data import fixture_path
from benchlattice.registry import load_registry, load_suite


@pytest.fixture(scope="session")
def sil_bench():
    (bench,) = load_registry(fixture_path("sil_bench.json"))
    return bench


@pytest.fixture(scope="session")
def vehicle_bench():
    (bench,) = load_registry(fixture_path("test_vehicle_bench.json"))
    return bench


@pytest.fixture(scope="session")
def fleet():
    return load_registry(fixture_path("fleet_bench.json"))


@pytest.fixture(scope="session")
def demo_suite():
    return load_suite(fixture_path("demo_suite.suite.json"))
