"""Shared builders for tests: quick benches, random benches and random
solver instances."""

from __future__ import annotations

import random
from dataclasses import replace
from typing import Iterable, Mapping

from benchlattice.assignment import CapacityBudget
from benchlattice.taxonomy import (
    CANONICAL_DIMENSION_IDS,
    Characteristics,
    Element,
    Stage,
    TestBench,
    validate_bench,
)
from benchlattice.testcase import EvaluationCriterion, ObjectDescriptor, ScenarioLayers, TestCase

STAGES = (Stage.SIMULATED, Stage.EMULATED, Stage.REAL)


def make_element(
    eid: str,
    dimension: str,
    stage: Stage = Stage.SIMULATED,
    *,
    validated_for: Iterable[str] = ("safety-validation",),
    cost_rate: float = 5.0,
    time_factor: float = 0.25,
    setup_cost: float = 0.0,
) -> Element:
    return Element(
        id=eid,
        display_name=eid,
        dimension=dimension,
        stage=stage,
        characteristics=Characteristics(
            validated_for=frozenset(validated_for),
            cost_rate=cost_rate,
            time_factor=time_factor,
            setup_cost=setup_cost,
        ),
    )


def uniform_bench(
    bench_id: str = "bench",
    stage: Stage = Stage.SIMULATED,
    *,
    extra_elements: Iterable[Element] = (),
    combinable: Mapping[str, bool] | None = None,
    skip_dimensions: Iterable[str] = (),
    **characteristics,
) -> TestBench:
    """One element per canonical leaf at ``stage``, plus extras."""
    elements = [
        make_element(f"{dim}-el", dim, stage, **characteristics)
        for dim in CANONICAL_DIMENSION_IDS
        if dim not in set(skip_dimensions)
    ]
    raw = {
        "id": bench_id,
        "display_name": bench_id,
        "combinable": dict(combinable or {}),
        "elements": elements + list(extra_elements),
    }
    return validate_bench(raw)


def make_test_case(
    case_id: str = "cut-in",
    *,
    duration: float = 360.0,
    purpose: str = "safety-validation",
    movable: int = 2,
    conditions: tuple[str, ...] = ("rain",),
    criteria: tuple[EvaluationCriterion, ...] = (
        EvaluationCriterion(name="min-ttc", threshold=">= 1.0 s"),
    ),
) -> TestCase:
    return TestCase(
        id=case_id,
        scenario=ScenarioLayers(
            road_level="two-lane road",
            traffic_infrastructure="",
            temporary_manipulation="",
            movable_objects=tuple(
                ObjectDescriptor(type="car", count=1) for _ in range(movable)
            ),
            environment_conditions=conditions,
            nominal_duration=duration,
        ),
        evaluation_criteria=criteria,
        purpose=purpose,
    )


def scale_cost_rates(bench: TestBench, factor: float) -> TestBench:
    return replace(
        bench,
        elements=tuple(
            replace(
                elem,
                characteristics=replace(
                    elem.characteristics,
                    cost_rate=factor * elem.characteristics.cost_rate,
                ),
            )
            for elem in bench.elements
        ),
    )


def zero_setup_costs(bench: TestBench) -> TestBench:
    return replace(
        bench,
        elements=tuple(
            replace(elem, characteristics=replace(elem.characteristics, setup_cost=0.0))
            for elem in bench.elements
        ),
    )


# --- randomized generation ---------------------------------------------------

_RATES = (0.0, 5.0, 10.0, 25.0)
_TIME_FACTORS = (0.25, 0.5, 1.0, 2.0)
_SETUPS = (0.0, 1.0, 2.0)
_PURPOSES = ("safety-validation", "endurance")


def random_bench(
    rng: random.Random,
    bench_id: str = "bench",
    *,
    max_elements: int = 3,
    count_cap: int = 10_000,
    allow_substantiation: bool = True,
) -> TestBench:
    """A valid random bench: <= 11 leaves, <= ``max_elements`` elements per
    leaf, random combinable flags, configuration count <= ``count_cap``."""
    substantiations: dict[str, list[str]] = {}
    leaves = list(CANONICAL_DIMENSION_IDS)
    canonical_of = {leaf: leaf for leaf in leaves}
    if allow_substantiation and rng.random() < 0.4:
        parent = rng.choice([d for d in CANONICAL_DIMENSION_IDS if d != "test-object"])
        substantiations[parent] = [f"{parent}-a", f"{parent}-b"]
        index = leaves.index(parent)
        subs = [f"{parent}-a", f"{parent}-b"]
        leaves[index : index + 1] = subs
        del canonical_of[parent]
        for sub in subs:
            canonical_of[sub] = parent

    combinable = {leaf: rng.random() < 0.5 for leaf in leaves if rng.random() < 0.3}

    per_leaf = {leaf: rng.randint(1, max_elements) for leaf in leaves}

    def choices(leaf: str) -> int:
        # Mirrors the model: sub-leaves inherit their parent's default flag
        # (only movable objects defaults to combinable).
        n = per_leaf[leaf]
        flag = combinable.get(leaf, canonical_of[leaf] == "movable-objects")
        return (2**n - 1) if flag else n

    def total() -> int:
        product = 1
        for leaf in leaves:
            product *= choices(leaf)
        return product

    while total() > count_cap:
        widest = max(leaves, key=lambda leaf: (choices(leaf), leaf))
        per_leaf[widest] -= 1

    elements = []
    for leaf in leaves:
        for i in range(per_leaf[leaf]):
            validated = {p for p in _PURPOSES if rng.random() < 0.8}
            elements.append(
                {
                    "id": f"{leaf}-e{i}",
                    "dimension": leaf,
                    "stage": rng.choice(STAGES).value,
                    "validated_for": sorted(validated),
                    "cost_rate": rng.choice(_RATES),
                    "time_factor": rng.choice(_TIME_FACTORS),
                    "setup_cost": rng.choice(_SETUPS),
                }
            )
    return validate_bench(
        {
            "id": bench_id,
            "display_name": bench_id,
            "substantiations": substantiations,
            "combinable": combinable,
            "elements": elements,
        }
    )


def small_random_bench(rng: random.Random, bench_id: str) -> TestBench:
    """A bench with at most four configurations, for solver instances that
    must stay inside the exhaustive-oracle guard."""
    pattern = rng.choice(["single", "pair", "pair-combinable", "two-pairs", "triple"])
    wide = rng.sample(list(CANONICAL_DIMENSION_IDS), k=2)
    per_leaf = {dim: 1 for dim in CANONICAL_DIMENSION_IDS}
    combinable: dict[str, bool] = {"movable-objects": False}
    if pattern == "pair":
        per_leaf[wide[0]] = 2
    elif pattern == "pair-combinable":
        per_leaf[wide[0]] = 2
        combinable[wide[0]] = True
        combinable.setdefault("movable-objects", False)
    elif pattern == "two-pairs":
        per_leaf[wide[0]] = 2
        per_leaf[wide[1]] = 2
    elif pattern == "triple":
        per_leaf[wide[0]] = 3

    elements = []
    for dim in CANONICAL_DIMENSION_IDS:
        for i in range(per_leaf[dim]):
            validated = {"safety-validation"} if rng.random() < 0.9 else {"endurance"}
            elements.append(
                {
                    "id": f"{dim}-e{i}",
                    "dimension": dim,
                    "stage": rng.choice(STAGES).value,
                    "validated_for": sorted(validated),
                    "cost_rate": rng.choice(_RATES),
                    "time_factor": rng.choice(_TIME_FACTORS),
                    "setup_cost": rng.choice(_SETUPS),
                }
            )
    return validate_bench(
        {
            "id": bench_id,
            "display_name": bench_id,
            "combinable": combinable,
            "elements": elements,
        }
    )


def random_instance(rng: random.Random):
    """(suite, benches, overrides, budget) inside the exhaustive guard."""
    benches = [small_random_bench(rng, f"bench-{i}") for i in range(rng.randint(1, 2))]
    suite = []
    overrides = {}
    for i in range(rng.randint(1, 4)):
        case = make_test_case(
            f"case-{i}",
            duration=rng.choice((60.0, 120.0, 240.0, 360.0)),
            purpose="safety-validation" if rng.random() < 0.85 else "endurance",
            movable=rng.randint(0, 2),
            conditions=("rain",) if rng.random() < 0.5 else (),
        )
        suite.append(case)
        if rng.random() < 0.3:
            dim = rng.choice(list(CANONICAL_DIMENSION_IDS))
            allowed = frozenset(rng.sample(STAGES, k=rng.randint(1, 3)))
            overrides[case.id] = {dim: allowed}
    budget = None
    if rng.random() < 0.5:
        limits = {}
        for bench in benches:
            if rng.random() < 0.7:
                limits[bench.id] = rng.choice((90.0, 240.0, 720.0, 2000.0))
        if limits:
            budget = CapacityBudget(limits)
    return suite, benches, overrides, budget
