"""Test bench classification, configuration enumeration and test case
assignment for automated-vehicle validation campaigns."""

from .assignment import (
    AdmissibilityReport,
    Assignment,
    AssignmentPlan,
    CapacityBudget,
    CostEstimate,
    ReasonCode,
    UnassignableCase,
    Violation,
    assign_exact,
    assign_greedy,
    check_admissibility,
    estimate_cost,
)
from .chart import ChartStyle, render_bench_chart, render_configuration_chart
from .configuration import (
    TestBenchConfiguration,
    TestMethodName,
    classify_test_method,
    count_configurations,
    enumerate_configurations,
    iter_configurations,
)
from .registry import (
    LoadedSuite,
    load_budget,
    load_registry,
    load_suite,
    save_plan,
    save_registry,
    save_suite,
)
from .taxonomy import (
    CANONICAL_DIMENSION_IDS,
    Characteristics,
    DimensionKind,
    DimensionNode,
    Element,
    Stage,
    TestBench,
    leaf_dimensions,
    new_bench,
    substantiate_dimension,
    validate_bench,
    with_elements,
)
from .testcase import (
    EvaluationCriterion,
    ObjectDescriptor,
    RequirementProfile,
    ScenarioLayers,
    TestCase,
    derive_requirement_profile,
    validate_test_case,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityReport",
    "Assignment",
    "AssignmentPlan",
    "CANONICAL_DIMENSION_IDS",
    "CapacityBudget",
    "Characteristics",
    "ChartStyle",
    "CostEstimate",
    "DimensionKind",
    "DimensionNode",
    "Element",
    "EvaluationCriterion",
    "LoadedSuite",
    "ObjectDescriptor",
    "ReasonCode",
    "RequirementProfile",
    "ScenarioLayers",
    "Stage",
    "TestBench",
    "TestBenchConfiguration",
    "TestCase",
    "TestMethodName",
    "UnassignableCase",
    "Violation",
    "assign_exact",
    "assign_greedy",
    "check_admissibility",
    "classify_test_method",
    "count_configurations",
    "derive_requirement_profile",
    "enumerate_configurations",
    "estimate_cost",
    "iter_configurations",
    "leaf_dimensions",
    "load_budget",
    "load_registry",
    "load_suite",
    "new_bench",
    "render_bench_chart",
    "render_configuration_chart",
    "save_plan",
    "save_registry",
    "save_suite",
    "substantiate_dimension",
    "validate_bench",
    "validate_test_case",
    "with_elements",
]
