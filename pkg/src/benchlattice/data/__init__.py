"""Shipped example documents: two classified benches, a demo suite and a
bench-time budget."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

__all__ = ["fixture_path", "FIXTURES"]

FIXTURES = (
    "sil_bench.json",
    "test_vehicle_bench.json",
    "fleet_bench.json",
    "demo_suite.suite.json",
    "demo.budget.json",
)


def fixture_path(name: str) -> Path:
    """Filesystem path of a shipped document."""
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(FIXTURES)}")
    with resources.as_file(resources.files(__name__).joinpath(name)) as path:
        return Path(path)
