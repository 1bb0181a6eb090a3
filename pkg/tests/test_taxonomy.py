from __future__ import annotations

import random
from dataclasses import replace

import pytest

from benchlattice.errors import (
    AlreadySubstantiated,
    BenchValidationWarning,
    DuplicateId,
    ElementOnNonLeaf,
    EmptyLeaf,
    EmptySubNames,
    ParentHoldsElements,
    TaxonomyError,
    UnknownDimension,
)
from benchlattice.taxonomy import (
    CANONICAL_DIMENSION_IDS,
    Characteristics,
    DimensionKind,
    Stage,
    canonical_dimension_of,
    leaf_dimensions,
    new_bench,
    substantiate_dimension,
    validate_bench,
    with_elements,
)
from helpers import make_element, random_bench, uniform_bench


def test_exactly_three_stages_with_bijective_chart_index():
    assert len(Stage) == 3
    assert {stage.chart_index for stage in Stage} == {1, 2, 3}
    assert Stage.SIMULATED.chart_index == 1
    assert Stage.EMULATED.chart_index == 2
    assert Stage.REAL.chart_index == 3


def test_canonical_dimensions_present_and_ordered():
    bench = new_bench("draft")
    assert [n.id for n in bench.dimension_tree] == list(CANONICAL_DIMENSION_IDS)
    assert CANONICAL_DIMENSION_IDS[0] == "test-object"
    assert CANONICAL_DIMENSION_IDS[-1] == "residual-vehicle"
    assert len(CANONICAL_DIMENSION_IDS) == 10


def test_combinable_defaults():
    bench = new_bench("draft")
    flags = {n.id: n.combinable for n in bench.dimension_tree}
    assert flags.pop("movable-objects") is True
    assert not any(flags.values())


def test_combinable_override():
    bench = new_bench("draft", combinable_overrides={"scenery": True, "movable-objects": False})
    assert bench.node("scenery").combinable is True
    assert bench.node("movable-objects").combinable is False


def test_sil_fixture_shape(sil_bench):
    leaves = leaf_dimensions(sil_bench)
    assert len(leaves) == 11
    assert len(sil_bench.elements) == 12
    assert all(e.stage is Stage.SIMULATED for e in sil_bench.elements)
    vd = [e for e in sil_bench.elements if e.dimension == "vehicle-dynamics"]
    assert len(vd) == 2


def test_leaf_order_substitutes_subs_in_place(sil_bench):
    ids = [leaf.id for leaf in leaf_dimensions(sil_bench)]
    assert ids == [
        "test-object",
        "driver-user-behavior",
        "vehicle-dynamics",
        "radar",
        "camera",
        "scenery",
        "movable-objects",
        "environmental-conditions",
        "localization-sensor-system",
        "v2x-communication",
        "residual-vehicle",
    ]
    assert ids.index("radar") < ids.index("camera")


def test_leaf_order_unsubstantiated():
    bench = uniform_bench()
    assert [leaf.id for leaf in leaf_dimensions(bench)] == list(CANONICAL_DIMENSION_IDS)


def test_two_substantiations_give_twelve_leaves():
    bench = new_bench("draft")
    bench = substantiate_dimension(bench, "environment-sensor-system", ["radar", "camera"])
    bench = substantiate_dimension(bench, "vehicle-dynamics", ["lateral", "longitudinal"])
    assert len(leaf_dimensions(bench)) == 12


def test_substantiated_vehicle_dynamics_bench_validates():
    bench = new_bench("draft")
    bench = substantiate_dimension(bench, "vehicle-dynamics", ["lateral", "longitudinal"])
    elements = [
        make_element(f"{leaf.id}-el", leaf.id) for leaf in leaf_dimensions(bench)
    ]
    validated = validate_bench(with_elements(bench, elements))
    assert len(leaf_dimensions(validated)) == 11
    # Re-validation returns an identical value.
    assert validate_bench(validated) == validated


def test_substantiate_twice_rejected():
    bench = new_bench("draft")
    bench = substantiate_dimension(bench, "environment-sensor-system", ["radar"])
    with pytest.raises(AlreadySubstantiated):
        substantiate_dimension(bench, "environment-sensor-system", ["lidar"])


def test_substantiate_parent_with_elements_rejected():
    bench = with_elements(new_bench("draft"), [make_element("s", "scenery")])
    with pytest.raises(ParentHoldsElements):
        substantiate_dimension(bench, "scenery", ["static", "dynamic"])


def test_substantiate_empty_names_rejected():
    with pytest.raises(EmptySubNames):
        substantiate_dimension(new_bench("draft"), "scenery", [])


def test_substantiate_duplicate_names_rejected():
    with pytest.raises(DuplicateId):
        substantiate_dimension(new_bench("draft"), "scenery", ["a", "a"])


def test_substantiate_sub_dimension_rejected():
    bench = substantiate_dimension(new_bench("draft"), "scenery", ["a"])
    with pytest.raises(TaxonomyError):
        substantiate_dimension(bench, "a", ["deeper"])


def test_element_on_substantiated_parent_rejected():
    raw = {
        "id": "b",
        "substantiations": {"environment-sensor-system": ["radar", "camera"]},
        "elements": [make_element(f"{d}-el", d) for d in CANONICAL_DIMENSION_IDS],
    }
    with pytest.raises(ElementOnNonLeaf):
        validate_bench(raw)


def test_missing_leaf_element_rejected():
    elements = [
        make_element(f"{d}-el", d)
        for d in CANONICAL_DIMENSION_IDS
        if d != "v2x-communication"
    ]
    with pytest.raises(EmptyLeaf):
        validate_bench({"id": "b", "elements": elements})


def test_duplicate_element_id_rejected():
    elements = [make_element(f"{d}-el", d) for d in CANONICAL_DIMENSION_IDS]
    elements.append(make_element("scenery-el", "scenery"))
    with pytest.raises(DuplicateId):
        validate_bench({"id": "b", "elements": elements})


def test_unknown_dimension_rejected():
    elements = [make_element(f"{d}-el", d) for d in CANONICAL_DIMENSION_IDS]
    elements.append(make_element("x", "holodeck"))
    with pytest.raises(UnknownDimension):
        validate_bench({"id": "b", "elements": elements})


def test_validate_is_idempotent(sil_bench):
    assert validate_bench(sil_bench) == sil_bench


def test_test_object_substantiation_warns():
    bench = new_bench("draft")
    bench = substantiate_dimension(bench, "test-object", ["planner", "controller"])
    elements = [make_element(f"{leaf.id}-el", leaf.id) for leaf in leaf_dimensions(bench)]
    with pytest.warns(BenchValidationWarning):
        validate_bench(with_elements(bench, elements))


@pytest.mark.parametrize("seed", range(25))
def test_leaves_refine_canonical_partition(seed):
    bench = random_bench(random.Random(seed), f"rand-{seed}")
    leaves = leaf_dimensions(bench)
    canonical = [canonical_dimension_of(bench, leaf.id) for leaf in leaves]
    # Every leaf maps to exactly one canonical dimension, and together the
    # leaves cover all ten without overlap between distinct parents.
    assert set(canonical) == set(CANONICAL_DIMENSION_IDS)
    for leaf in leaves:
        node = bench.node(leaf.id)
        if node.kind is DimensionKind.SUB_DIMENSION:
            assert node.parent in CANONICAL_DIMENSION_IDS


def test_characteristics_invariants():
    with pytest.raises(TaxonomyError):
        Characteristics(cost_rate=-1.0)
    with pytest.raises(TaxonomyError):
        Characteristics(time_factor=0.0)
    with pytest.raises(TaxonomyError):
        Characteristics(setup_cost=-0.5)
    assert Characteristics(validated_for=()).validated_for == frozenset()


def test_elements_sorted_into_spoke_order(sil_bench):
    ranks = {leaf.id: i for i, leaf in enumerate(leaf_dimensions(sil_bench))}
    positions = [ranks[e.dimension] for e in sil_bench.elements]
    assert positions == sorted(positions)
    vd = [e.id for e in sil_bench.elements if e.dimension == "vehicle-dynamics"]
    assert vd == ["vd-single-track", "vd-double-track"]


def test_missing_canonical_dimension_rejected():
    bench = uniform_bench()
    broken = replace(
        bench,
        dimension_tree=tuple(n for n in bench.dimension_tree if n.id != "scenery"),
    )
    with pytest.raises(TaxonomyError):
        validate_bench(broken)
