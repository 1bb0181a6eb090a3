"""Test cases and the per-dimension requirements derived from them.

A test case couples a scenario (structured into five layers: road level,
traffic infrastructure, temporary manipulations, movable objects,
environment conditions) with evaluation criteria and a purpose tag. From it
we derive a requirement profile: which dimensions a bench configuration must
cover and which stages are admissible per dimension. Stages form a nominal
scale, so requirements are expressed as admissible *sets*, never as
thresholds on an ordering.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .errors import (
    ContradictoryOverride,
    MissingLayer,
    NoEvaluationCriteria,
    NonPositiveDuration,
    TestCaseError,
)
from .taxonomy import CANONICAL_DIMENSION_IDS, Stage

__all__ = [
    "ObjectDescriptor",
    "EvaluationCriterion",
    "ScenarioLayers",
    "TestCase",
    "DimensionRequirement",
    "RequirementProfile",
    "ALWAYS_REQUIRED_DIMENSIONS",
    "CONDITIONAL_SENSOR_DIMENSIONS",
    "validate_test_case",
    "derive_requirement_profile",
]

ALL_STAGES = frozenset(Stage)

#: Required for every test case, whatever the scenario contains.
ALWAYS_REQUIRED_DIMENSIONS = frozenset(
    {"test-object", "vehicle-dynamics", "driver-user-behavior", "residual-vehicle"}
)

#: Required only when evaluation criteria or overrides reference them.
CONDITIONAL_SENSOR_DIMENSIONS = frozenset(
    {"environment-sensor-system", "localization-sensor-system", "v2x-communication"}
)


@dataclass(frozen=True)
class ObjectDescriptor:
    type: str
    count: int = 1


@dataclass(frozen=True)
class EvaluationCriterion:
    name: str
    threshold: str


@dataclass(frozen=True)
class ScenarioLayers:
    road_level: str
    traffic_infrastructure: str = ""
    temporary_manipulation: str = ""
    movable_objects: tuple[ObjectDescriptor, ...] = ()
    environment_conditions: tuple[str, ...] = ()
    nominal_duration: float = 60.0


@dataclass(frozen=True)
class TestCase:
    id: str
    scenario: ScenarioLayers
    evaluation_criteria: tuple[EvaluationCriterion, ...]
    purpose: str


@dataclass(frozen=True)
class DimensionRequirement:
    admissible_stages: frozenset[Stage]
    required: bool


@dataclass(frozen=True)
class RequirementProfile:
    """Per-dimension admissibility requirements of one test case.

    Keys are canonical dimension ids, plus explicit sub-dimension ids when
    overrides name one; a bench leaf is governed by its own entry if present,
    else by its canonical parent's entry.
    """

    entries: Mapping[str, DimensionRequirement]
    purpose: str
    nominal_duration: float

    def governing(self, leaf_id: str, canonical_id: str) -> DimensionRequirement | None:
        if leaf_id in self.entries:
            return self.entries[leaf_id]
        return self.entries.get(canonical_id)


RawTestCase = Union[Mapping[str, object], TestCase]

_LAYER_FIELDS = (
    "road_level",
    "traffic_infrastructure",
    "temporary_manipulation",
    "movable_objects",
    "environment_conditions",
)


def validate_test_case(raw: RawTestCase) -> TestCase:
    """Build and validate a test case from a parsed suite fragment (or
    re-check an existing value)."""
    tc = _build_from_mapping(raw) if isinstance(raw, Mapping) else raw
    if not tc.scenario.road_level.strip():
        raise MissingLayer(f"test case {tc.id!r}: road_level must not be blank")
    if not tc.evaluation_criteria:
        raise NoEvaluationCriteria(f"test case {tc.id!r} has no evaluation criteria")
    if not (tc.scenario.nominal_duration > 0):
        raise NonPositiveDuration(
            f"test case {tc.id!r}: nominal_duration must be > 0, "
            f"got {tc.scenario.nominal_duration}"
        )
    if not tc.purpose.strip():
        raise TestCaseError(f"test case {tc.id!r}: purpose must not be blank")
    return tc


def _build_from_mapping(raw: Mapping[str, object]) -> TestCase:
    scenario_raw = raw.get("scenario")
    if not isinstance(scenario_raw, Mapping):
        raise MissingLayer(f"test case {raw.get('id')!r} has no scenario")
    for layer in _LAYER_FIELDS:
        if layer not in scenario_raw:
            raise MissingLayer(
                f"test case {raw.get('id')!r}: scenario layer {layer!r} missing"
            )
    movable = tuple(
        obj
        if isinstance(obj, ObjectDescriptor)
        else ObjectDescriptor(type=str(obj["type"]), count=int(obj.get("count", 1)))
        for obj in scenario_raw["movable_objects"]  # type: ignore[index]
    )
    criteria = tuple(
        c
        if isinstance(c, EvaluationCriterion)
        else EvaluationCriterion(name=str(c["name"]), threshold=str(c.get("threshold", "")))
        for c in raw.get("evaluation_criteria", ())  # type: ignore[union-attr]
    )
    return TestCase(
        id=str(raw.get("id", "")),
        scenario=ScenarioLayers(
            road_level=str(scenario_raw["road_level"]),
            traffic_infrastructure=str(scenario_raw["traffic_infrastructure"]),
            temporary_manipulation=str(scenario_raw["temporary_manipulation"]),
            movable_objects=movable,
            environment_conditions=tuple(
                str(c) for c in scenario_raw["environment_conditions"]  # type: ignore[index]
            ),
            nominal_duration=float(scenario_raw.get("nominal_duration", 0.0)),
        ),
        evaluation_criteria=criteria,
        purpose=str(raw.get("purpose", "")),
    )


def _normalize(text: str) -> str:
    return "-".join(text.strip().lower().replace("_", " ").replace("-", " ").split())


def _criteria_reference(tc: TestCase, dim_id: str) -> bool:
    # A criterion references a dimension when the dimension id occurs in the
    # criterion's name or threshold text (word separators normalised).
    needle = _normalize(dim_id)
    for criterion in tc.evaluation_criteria:
        if needle in _normalize(criterion.name) or needle in _normalize(criterion.threshold):
            return True
    return False


StageOverrides = Mapping[str, Iterable[Stage]]


def derive_requirement_profile(
    tc: TestCase, overrides: StageOverrides | None = None
) -> RequirementProfile:
    """Map a test case onto per-dimension requirements.

    Scenario layers obligate dimensions as follows: road level, traffic
    infrastructure and temporary manipulations require the scenery; the
    movable-objects layer requires movable objects; the conditions layer
    requires environmental conditions. Test object, vehicle dynamics,
    driver/user behavior and residual vehicle are always required. Sensor and
    communication dimensions are required only when evaluation criteria or
    overrides reference them. Admissible stages default to all three and are
    narrowed only by explicit overrides; an override that empties the set of
    a required dimension raises :class:`ContradictoryOverride`.
    """
    tc = validate_test_case(tc)
    override_sets: dict[str, frozenset[Stage]] = {
        dim: frozenset(Stage(s) if not isinstance(s, Stage) else s for s in stages)
        for dim, stages in (overrides or {}).items()
    }

    scenario = tc.scenario
    layer_required = {
        "scenery": any(
            layer.strip()
            for layer in (
                scenario.road_level,
                scenario.traffic_infrastructure,
                scenario.temporary_manipulation,
            )
        ),
        "movable-objects": bool(scenario.movable_objects),
        "environmental-conditions": bool(scenario.environment_conditions),
    }

    entries: dict[str, DimensionRequirement] = {}
    for dim_id in CANONICAL_DIMENSION_IDS:
        if dim_id in ALWAYS_REQUIRED_DIMENSIONS:
            required = True
        elif dim_id in layer_required:
            required = layer_required[dim_id]
        elif dim_id in CONDITIONAL_SENSOR_DIMENSIONS:
            required = dim_id in override_sets or _criteria_reference(tc, dim_id)
        else:
            required = False
        entries[dim_id] = DimensionRequirement(
            admissible_stages=override_sets.get(dim_id, ALL_STAGES),
            required=required,
        )

    # Overrides naming a sub-dimension add an explicit, required entry.
    for dim_id in sorted(set(override_sets) - set(CANONICAL_DIMENSION_IDS)):
        entries[dim_id] = DimensionRequirement(
            admissible_stages=override_sets[dim_id], required=True
        )

    for dim_id, entry in entries.items():
        if entry.required and not entry.admissible_stages:
            raise ContradictoryOverride(
                f"override leaves no admissible stage for required dimension {dim_id!r}"
            )

    return RequirementProfile(
        entries=entries,
        purpose=tc.purpose,
        nominal_duration=scenario.nominal_duration,
    )
