"""Derive, count and name test bench configurations.

A configuration picks, for every leaf dimension of a bench, which of the
available elements take part in a run: exactly one on ordinary leaves, any
non-empty subset on combinable leaves. Enumeration order is deterministic
(leaves in spoke order with the rightmost leaf varying fastest, choices per
leaf in element declaration order, subsets lexicographic by declaration
index), so configuration indices are stable, reportable handles.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Mapping

from .errors import CombinatorialLimitExceeded, ForeignConfiguration
from .taxonomy import (
    Element,
    Stage,
    TestBench,
    canonical_dimension_of,
    elements_by_dimension,
    leaf_dimensions,
)

__all__ = [
    "DEFAULT_CONFIGURATION_CAP",
    "CAP_ENV_VAR",
    "TestBenchConfiguration",
    "TestMethodName",
    "enumerate_configurations",
    "iter_configurations",
    "count_configurations",
    "classify_test_method",
    "configuration_cap",
    "require_same_bench",
]

DEFAULT_CONFIGURATION_CAP = 10**6
CAP_ENV_VAR = "BENCHLATTICE_CONFIG_CAP"


@dataclass(frozen=True)
class TestBenchConfiguration:
    """One composition of a bench's elements, one entry per leaf."""

    bench_id: str
    selection: Mapping[str, tuple[str, ...]]

    def selected_ids(self) -> tuple[str, ...]:
        return tuple(eid for ids in self.selection.values() for eid in ids)


class TestMethodName(Enum):
    SOFTWARE_IN_THE_LOOP = "software-in-the-loop"
    HARDWARE_IN_THE_LOOP = "hardware-in-the-loop"
    DRIVER_IN_THE_LOOP = "driver-in-the-loop"
    VEHICLE_IN_THE_LOOP = "vehicle-in-the-loop"
    TEST_VEHICLE = "test-vehicle"
    UNCLASSIFIED = "unclassified"


def configuration_cap(cap: int | None = None) -> int:
    """Effective enumeration cap: explicit argument, else the
    BENCHLATTICE_CONFIG_CAP environment variable, else the default."""
    if cap is not None:
        return cap
    env = os.environ.get(CAP_ENV_VAR)
    if env:
        return int(env)
    return DEFAULT_CONFIGURATION_CAP


def _nonempty_subsets(elements: tuple[Element, ...]) -> list[tuple[Element, ...]]:
    # Lexicographic by declaration-index tuple: (0), (0,1), (0,1,2), (0,2), (1), ...
    out: list[tuple[Element, ...]] = []

    def grow(prefix: tuple[Element, ...], start: int) -> None:
        for i in range(start, len(elements)):
            picked = prefix + (elements[i],)
            out.append(picked)
            grow(picked, i + 1)

    grow((), 0)
    return out


def _choices_per_leaf(bench: TestBench) -> list[tuple[str, list[tuple[Element, ...]]]]:
    grouped = elements_by_dimension(bench)
    choices = []
    for leaf in leaf_dimensions(bench):
        elems = grouped.get(leaf.id, ())
        if leaf.combinable:
            choices.append((leaf.id, _nonempty_subsets(elems)))
        else:
            choices.append((leaf.id, [(e,) for e in elems]))
    return choices


def count_configurations(bench: TestBench) -> int:
    """Closed-form configuration count; never materialises the product."""
    total = 1
    grouped = elements_by_dimension(bench)
    for leaf in leaf_dimensions(bench):
        n = len(grouped.get(leaf.id, ()))
        total *= (2**n - 1) if leaf.combinable else n
    return total


def iter_configurations(bench: TestBench) -> Iterator[TestBenchConfiguration]:
    """Stream configurations in deterministic order, without a cap."""
    choices = _choices_per_leaf(bench)
    leaf_ids = [leaf_id for leaf_id, _ in choices]
    for combo in itertools.product(*(options for _, options in choices)):
        yield TestBenchConfiguration(
            bench_id=bench.id,
            selection={
                leaf_id: tuple(e.id for e in picked)
                for leaf_id, picked in zip(leaf_ids, combo)
            },
        )


def enumerate_configurations(
    bench: TestBench, *, cap: int | None = None
) -> list[TestBenchConfiguration]:
    """All configurations of ``bench`` as a list.

    Raises :class:`CombinatorialLimitExceeded` before materialising anything
    when the count exceeds the cap (default 10^6, see
    :func:`configuration_cap`).
    """
    effective_cap = configuration_cap(cap)
    count = count_configurations(bench)
    if count > effective_cap:
        raise CombinatorialLimitExceeded(count, effective_cap)
    return list(iter_configurations(bench))


def require_same_bench(config: TestBenchConfiguration, bench: TestBench) -> None:
    """Raise :class:`ForeignConfiguration` unless ``config`` can have been
    derived from ``bench``."""
    if config.bench_id != bench.id:
        raise ForeignConfiguration(
            f"configuration belongs to bench {config.bench_id!r}, not {bench.id!r}"
        )
    leaf_ids = {leaf.id for leaf in leaf_dimensions(bench)}
    if set(config.selection) != leaf_ids:
        raise ForeignConfiguration(
            f"configuration leaves {sorted(config.selection)} do not match "
            f"bench leaves {sorted(leaf_ids)}"
        )
    grouped = elements_by_dimension(bench)
    combinable = {leaf.id: leaf.combinable for leaf in leaf_dimensions(bench)}
    for leaf_id, picked in config.selection.items():
        if not picked:
            raise ForeignConfiguration(f"empty selection on leaf {leaf_id!r}")
        if len(set(picked)) != len(picked):
            raise ForeignConfiguration(f"repeated elements selected on {leaf_id!r}")
        if not combinable[leaf_id] and len(picked) != 1:
            raise ForeignConfiguration(
                f"leaf {leaf_id!r} is not combinable but selects {len(picked)} elements"
            )
        available = {e.id for e in grouped.get(leaf_id, ())}
        missing = set(picked) - available
        if missing:
            raise ForeignConfiguration(
                f"selection on {leaf_id!r} names unknown elements {sorted(missing)}"
            )


def _selected_stages_by_canonical(
    config: TestBenchConfiguration, bench: TestBench
) -> dict[str, set[Stage]]:
    stages: dict[str, set[Stage]] = {}
    for leaf_id, picked in config.selection.items():
        canonical = canonical_dimension_of(bench, leaf_id)
        bucket = stages.setdefault(canonical, set())
        for eid in picked:
            bucket.add(bench.element(eid).stage)
    return stages


def classify_test_method(
    config: TestBenchConfiguration, bench: TestBench
) -> TestMethodName:
    """Name the conventional test method a configuration realises.

    First matching rule wins:

    1. every selected element real           -> test-vehicle
    2. every selected element simulated      -> software-in-the-loop
    3. test object real, all else simulated  -> hardware-in-the-loop
    4. driver/user real, all else simulated  -> driver-in-the-loop
    5. test object, vehicle dynamics and residual vehicle real while the
       movable objects include anything simulated or emulated
                                             -> vehicle-in-the-loop
    6. otherwise                             -> unclassified
    """
    require_same_bench(config, bench)
    by_canonical = _selected_stages_by_canonical(config, bench)
    all_stages = set().union(*by_canonical.values())

    if all_stages == {Stage.REAL}:
        return TestMethodName.TEST_VEHICLE
    if all_stages == {Stage.SIMULATED}:
        return TestMethodName.SOFTWARE_IN_THE_LOOP

    def only(dim: str, stage: Stage) -> bool:
        return by_canonical.get(dim, set()) == {stage}

    def rest_simulated(*excluded: str) -> bool:
        return all(
            stages == {Stage.SIMULATED}
            for dim, stages in by_canonical.items()
            if dim not in excluded
        )

    if only("test-object", Stage.REAL) and rest_simulated("test-object"):
        return TestMethodName.HARDWARE_IN_THE_LOOP
    if only("driver-user-behavior", Stage.REAL) and rest_simulated("driver-user-behavior"):
        return TestMethodName.DRIVER_IN_THE_LOOP

    anchors_real = all(
        only(dim, Stage.REAL)
        for dim in ("test-object", "vehicle-dynamics", "residual-vehicle")
    )
    movable = by_canonical.get("movable-objects", set())
    if anchors_real and (movable & {Stage.SIMULATED, Stage.EMULATED}):
        return TestMethodName.VEHICLE_IN_THE_LOOP
    return TestMethodName.UNCLASSIFIED
