"""File formats: bench registries, test suites, budgets and plans.

All documents are JSON with an explicit ``format_version``. Loading checks
the schema first and reports *every* finding with a path-like location
(``benches[0].elements[3].stage``) before raising; registries are written by
hand, so one round of fixes should suffice. Serialization is canonical
(sorted keys, two-space indent, trailing newline) and writes are atomic via
temp file + rename, so no partial files survive a failure.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping, Sequence

from .assignment import AssignmentPlan, CapacityBudget
from .errors import (
    BenchlatticeError,
    DocumentSyntaxError,
    SchemaError,
    ValidationError,
)
from .taxonomy import DimensionKind, Stage, TestBench, validate_bench
from .testcase import StageOverrides, TestCase, validate_test_case

__all__ = [
    "FORMAT_VERSION",
    "LoadedSuite",
    "load_registry",
    "save_registry",
    "load_suite",
    "save_suite",
    "load_budget",
    "save_budget",
    "save_plan",
    "write_text_atomic",
]

FORMAT_VERSION = "1"

_ID_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")
_STAGES = tuple(stage.value for stage in Stage)

Issue = tuple[str, str]


@dataclass(frozen=True)
class LoadedSuite:
    test_cases: tuple[TestCase, ...]
    overrides: Mapping[str, StageOverrides]


# --- primitives -------------------------------------------------------------


def write_text_atomic(path: str | Path, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never observe a
    partial document."""
    path = Path(path)
    fd, tmp_name = tempfile.mkstemp(dir=str(path.parent), prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def _dump(payload: Mapping[str, Any]) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _load_json(path: str | Path) -> Any:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(str(path), str(exc)) from exc


def _is_number(value: object) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


class _Checker:
    """Collects schema findings instead of failing fast."""

    def __init__(self) -> None:
        self.issues: list[Issue] = []

    def add(self, location: str, message: str) -> None:
        self.issues.append((location, message))

    def obj(self, value: object, location: str) -> dict[str, Any] | None:
        if not isinstance(value, dict):
            self.add(location, f"expected an object, got {type(value).__name__}")
            return None
        return value

    def array(self, value: object, location: str) -> list[Any] | None:
        if not isinstance(value, list):
            self.add(location, f"expected an array, got {type(value).__name__}")
            return None
        return value

    def text(self, value: object, location: str, *, identifier: bool = False) -> str | None:
        if not isinstance(value, str):
            self.add(location, f"expected a string, got {type(value).__name__}")
            return None
        if identifier and not _ID_RE.match(value):
            self.add(location, f"{value!r} is not a valid identifier")
            return None
        return value

    def number(
        self, value: object, location: str, *, minimum: float | None = None,
        exclusive: bool = False,
    ) -> float | None:
        if not _is_number(value):
            self.add(location, f"expected a number, got {type(value).__name__}")
            return None
        number = float(value)
        if minimum is not None:
            if exclusive and not number > minimum:
                self.add(location, f"must be > {minimum}, got {number}")
                return None
            if not exclusive and number < minimum:
                self.add(location, f"must be >= {minimum}, got {number}")
                return None
        return number

    def known_fields(self, value: dict[str, Any], location: str, allowed: set[str]) -> None:
        for key in sorted(set(value) - allowed):
            self.add(f"{location}.{key}", "unknown field")

    def version(self, doc: dict[str, Any], location: str = "format_version") -> None:
        version = doc.get("format_version")
        if version != FORMAT_VERSION:
            self.add(location, f"unsupported format_version {version!r}; expected {FORMAT_VERSION!r}")

    def raise_if_found(self) -> None:
        if self.issues:
            raise SchemaError(self.issues)


# --- bench registries --------------------------------------------------------

_BENCH_FIELDS = {"id", "display_name", "substantiations", "combinable", "elements"}
_ELEMENT_FIELDS = {
    "id",
    "display_name",
    "dimension",
    "stage",
    "validated_for",
    "cost_rate",
    "time_factor",
    "setup_cost",
    "extra",
}


def _check_element(check: _Checker, raw: object, location: str) -> None:
    entry = check.obj(raw, location)
    if entry is None:
        return
    check.known_fields(entry, location, _ELEMENT_FIELDS)
    # Characteristics are never defaulted in documents; only display_name
    # (falls back to the id) and the reserved extra map may be omitted.
    for required in _ELEMENT_FIELDS - {"display_name", "extra"}:
        if required not in entry:
            check.add(f"{location}.{required}", "required field missing")
    for key in ("id", "dimension"):
        if key in entry:
            check.text(entry[key], f"{location}.{key}", identifier=True)
    if "display_name" in entry:
        check.text(entry["display_name"], f"{location}.display_name")
    if "stage" in entry and entry["stage"] not in _STAGES:
        check.add(
            f"{location}.stage",
            f"expected one of {list(_STAGES)}, got {entry['stage']!r}",
        )
    if "validated_for" in entry:
        tags = check.array(entry["validated_for"], f"{location}.validated_for")
        for i, tag in enumerate(tags or ()):
            check.text(tag, f"{location}.validated_for[{i}]")
    if "cost_rate" in entry:
        check.number(entry["cost_rate"], f"{location}.cost_rate", minimum=0.0)
    if "time_factor" in entry:
        check.number(entry["time_factor"], f"{location}.time_factor", minimum=0.0, exclusive=True)
    if "setup_cost" in entry:
        check.number(entry["setup_cost"], f"{location}.setup_cost", minimum=0.0)
    if "extra" in entry:
        check.obj(entry["extra"], f"{location}.extra")


def _check_bench(check: _Checker, raw: object, location: str) -> dict[str, Any] | None:
    bench = check.obj(raw, location)
    if bench is None:
        return None
    check.known_fields(bench, location, _BENCH_FIELDS)
    if "id" not in bench:
        check.add(f"{location}.id", "required field missing")
    else:
        check.text(bench["id"], f"{location}.id", identifier=True)
    if "display_name" in bench:
        check.text(bench["display_name"], f"{location}.display_name")
    subs = bench.get("substantiations", {})
    subs_obj = check.obj(subs, f"{location}.substantiations")
    for parent, names in (subs_obj or {}).items():
        names_arr = check.array(names, f"{location}.substantiations.{parent}")
        if names_arr is not None and not names_arr:
            check.add(f"{location}.substantiations.{parent}", "must not be empty")
        for i, name in enumerate(names_arr or ()):
            check.text(name, f"{location}.substantiations.{parent}[{i}]")
    flags = check.obj(bench.get("combinable", {}), f"{location}.combinable")
    for dim, flag in (flags or {}).items():
        if not isinstance(flag, bool):
            check.add(f"{location}.combinable.{dim}", f"expected a boolean, got {flag!r}")
    elements = check.array(bench.get("elements", []), f"{location}.elements")
    for i, entry in enumerate(elements or ()):
        _check_element(check, entry, f"{location}.elements[{i}]")
    return bench


def load_registry(path: str | Path) -> list[TestBench]:
    """Load and validate every bench in a registry file.

    Raises :class:`DocumentSyntaxError` for malformed JSON,
    :class:`SchemaError` with every located finding for schema violations,
    and :class:`ValidationError` with (bench id, error) pairs when benches
    violate the domain invariants.
    """
    doc = _load_json(path)
    check = _Checker()
    root = check.obj(doc, "$")
    fragments: list[dict[str, Any]] = []
    if root is not None:
        check.known_fields(root, "$", {"format_version", "benches"})
        check.version(root)
        benches = check.array(root.get("benches"), "benches")
        seen_ids: set[str] = set()
        for i, raw in enumerate(benches or ()):
            fragment = _check_bench(check, raw, f"benches[{i}]")
            if fragment is None:
                continue
            bench_id = fragment.get("id")
            if isinstance(bench_id, str):
                if bench_id in seen_ids:
                    check.add(f"benches[{i}].id", f"duplicate bench id {bench_id!r}")
                seen_ids.add(bench_id)
            fragments.append(fragment)
    check.raise_if_found()

    loaded: list[TestBench] = []
    problems: list[tuple[str, BenchlatticeError]] = []
    for fragment in fragments:
        try:
            loaded.append(validate_bench(fragment))
        except BenchlatticeError as exc:
            problems.append((str(fragment.get("id")), exc))
    if problems:
        raise ValidationError(problems)
    return loaded


def bench_to_raw(bench: TestBench) -> dict[str, Any]:
    """Canonical registry fragment for one validated bench."""
    substantiations: dict[str, list[str]] = {}
    for node in bench.dimension_tree:
        if node.kind is DimensionKind.SUB_DIMENSION and node.parent is not None:
            substantiations.setdefault(node.parent, []).append(node.display_name)
    return {
        "id": bench.id,
        "display_name": bench.display_name,
        "substantiations": substantiations,
        "combinable": {node.id: node.combinable for node in bench.dimension_tree},
        "elements": [
            {
                "id": elem.id,
                "display_name": elem.display_name,
                "dimension": elem.dimension,
                "stage": elem.stage.value,
                "validated_for": sorted(elem.characteristics.validated_for),
                "cost_rate": elem.characteristics.cost_rate,
                "time_factor": elem.characteristics.time_factor,
                "setup_cost": elem.characteristics.setup_cost,
                "extra": dict(elem.characteristics.extra),
            }
            for elem in bench.elements
        ],
    }


def save_registry(benches: Sequence[TestBench], path: str | Path) -> None:
    """Write a canonical, byte-stable registry document."""
    payload = {
        "format_version": FORMAT_VERSION,
        "benches": [bench_to_raw(bench) for bench in benches],
    }
    write_text_atomic(path, _dump(payload))


# --- suites -------------------------------------------------------------------

_CASE_FIELDS = {"id", "purpose", "scenario", "evaluation_criteria", "overrides"}
_SCENARIO_FIELDS = {
    "road_level",
    "traffic_infrastructure",
    "temporary_manipulation",
    "movable_objects",
    "environment_conditions",
    "nominal_duration",
}


def _check_case(check: _Checker, raw: object, location: str) -> dict[str, Any] | None:
    case = check.obj(raw, location)
    if case is None:
        return None
    check.known_fields(case, location, _CASE_FIELDS)
    if "id" not in case:
        check.add(f"{location}.id", "required field missing")
    else:
        check.text(case["id"], f"{location}.id", identifier=True)
    if "purpose" in case:
        check.text(case["purpose"], f"{location}.purpose")
    scenario = check.obj(case.get("scenario", {}), f"{location}.scenario")
    if scenario is not None:
        check.known_fields(scenario, f"{location}.scenario", _SCENARIO_FIELDS)
        for key in ("road_level", "traffic_infrastructure", "temporary_manipulation"):
            if key in scenario:
                check.text(scenario[key], f"{location}.scenario.{key}")
        movable = check.array(
            scenario.get("movable_objects", []), f"{location}.scenario.movable_objects"
        )
        for i, obj in enumerate(movable or ()):
            entry = check.obj(obj, f"{location}.scenario.movable_objects[{i}]")
            if entry is None:
                continue
            check.known_fields(
                entry, f"{location}.scenario.movable_objects[{i}]", {"type", "count"}
            )
            if "type" in entry:
                check.text(entry["type"], f"{location}.scenario.movable_objects[{i}].type")
            if "count" in entry:
                check.number(
                    entry["count"],
                    f"{location}.scenario.movable_objects[{i}].count",
                    minimum=1,
                )
        conditions = check.array(
            scenario.get("environment_conditions", []),
            f"{location}.scenario.environment_conditions",
        )
        for i, tag in enumerate(conditions or ()):
            check.text(tag, f"{location}.scenario.environment_conditions[{i}]")
        if "nominal_duration" in scenario:
            check.number(scenario["nominal_duration"], f"{location}.scenario.nominal_duration")
    criteria = check.array(
        case.get("evaluation_criteria", []), f"{location}.evaluation_criteria"
    )
    for i, criterion in enumerate(criteria or ()):
        entry = check.obj(criterion, f"{location}.evaluation_criteria[{i}]")
        if entry is None:
            continue
        check.known_fields(
            entry, f"{location}.evaluation_criteria[{i}]", {"name", "threshold"}
        )
        if "name" not in entry:
            check.add(f"{location}.evaluation_criteria[{i}].name", "required field missing")
    overrides = check.obj(case.get("overrides", {}), f"{location}.overrides")
    for dim, stages in (overrides or {}).items():
        stages_arr = check.array(stages, f"{location}.overrides.{dim}")
        for i, stage in enumerate(stages_arr or ()):
            if stage not in _STAGES:
                check.add(
                    f"{location}.overrides.{dim}[{i}]",
                    f"expected one of {list(_STAGES)}, got {stage!r}",
                )
    return case


def load_suite(path: str | Path) -> LoadedSuite:
    """Load a test suite plus its per-test-case stage overrides."""
    doc = _load_json(path)
    check = _Checker()
    root = check.obj(doc, "$")
    fragments: list[dict[str, Any]] = []
    if root is not None:
        check.known_fields(root, "$", {"format_version", "test_cases"})
        check.version(root)
        cases = check.array(root.get("test_cases"), "test_cases")
        seen: set[str] = set()
        for i, raw in enumerate(cases or ()):
            fragment = _check_case(check, raw, f"test_cases[{i}]")
            if fragment is None:
                continue
            case_id = fragment.get("id")
            if isinstance(case_id, str):
                if case_id in seen:
                    check.add(f"test_cases[{i}].id", f"duplicate test case id {case_id!r}")
                seen.add(case_id)
            fragments.append(fragment)
    check.raise_if_found()

    test_cases: list[TestCase] = []
    overrides: dict[str, StageOverrides] = {}
    problems: list[tuple[str, BenchlatticeError]] = []
    for fragment in fragments:
        try:
            test_cases.append(validate_test_case(fragment))
        except BenchlatticeError as exc:
            problems.append((str(fragment.get("id")), exc))
            continue
        raw_overrides = fragment.get("overrides") or {}
        if raw_overrides:
            overrides[str(fragment["id"])] = {
                dim: frozenset(Stage(s) for s in stages)
                for dim, stages in raw_overrides.items()
            }
    if problems:
        raise ValidationError(problems)
    return LoadedSuite(test_cases=tuple(test_cases), overrides=overrides)


def save_suite(suite: LoadedSuite, path: str | Path) -> None:
    payload = {
        "format_version": FORMAT_VERSION,
        "test_cases": [
            {
                "id": tc.id,
                "purpose": tc.purpose,
                "scenario": {
                    "road_level": tc.scenario.road_level,
                    "traffic_infrastructure": tc.scenario.traffic_infrastructure,
                    "temporary_manipulation": tc.scenario.temporary_manipulation,
                    "movable_objects": [
                        {"type": obj.type, "count": obj.count}
                        for obj in tc.scenario.movable_objects
                    ],
                    "environment_conditions": list(tc.scenario.environment_conditions),
                    "nominal_duration": tc.scenario.nominal_duration,
                },
                "evaluation_criteria": [
                    {"name": c.name, "threshold": c.threshold}
                    for c in tc.evaluation_criteria
                ],
                "overrides": {
                    dim: sorted((s.value for s in stages), key=_STAGES.index)
                    for dim, stages in sorted(suite.overrides.get(tc.id, {}).items())
                },
            }
            for tc in suite.test_cases
        ],
    }
    write_text_atomic(path, _dump(payload))


# --- budgets -------------------------------------------------------------------


def load_budget(path: str | Path) -> CapacityBudget:
    doc = _load_json(path)
    check = _Checker()
    root = check.obj(doc, "$")
    limits: dict[str, float] = {}
    if root is not None:
        check.known_fields(root, "$", {"format_version", "max_bench_time"})
        check.version(root)
        table = check.obj(root.get("max_bench_time", {}), "max_bench_time")
        for bench_id, seconds in (table or {}).items():
            value = check.number(
                seconds, f"max_bench_time.{bench_id}", minimum=0.0, exclusive=True
            )
            if value is not None:
                limits[bench_id] = value
    check.raise_if_found()
    return CapacityBudget(max_bench_time=limits)


def save_budget(budget: CapacityBudget, path: str | Path) -> None:
    payload = {
        "format_version": FORMAT_VERSION,
        "max_bench_time": dict(sorted(budget.max_bench_time.items())),
    }
    write_text_atomic(path, _dump(payload))


# --- plans ----------------------------------------------------------------------


def _seconds(value: Fraction) -> float:
    return float(value)


def plan_to_raw(plan: AssignmentPlan) -> dict[str, Any]:
    return {
        "format_version": FORMAT_VERSION,
        "assignments": {
            tc_id: {
                "bench": a.bench_id,
                "config_index": a.config_index,
                "method": a.method.value,
                "selection": {leaf: list(ids) for leaf, ids in a.configuration.selection.items()},
                "execution_time_s": _seconds(a.cost.execution_time),
                "monetary_cost": float(a.cost.monetary_cost),
            }
            for tc_id, a in plan.assignments.items()
        },
        "unassignable": [
            {
                "test_case": case.test_case_id,
                "reason": case.reason,
                "reports": {
                    bench_id: {
                        "admissible": report.admissible,
                        "violations": [
                            {"dimension": v.dimension, "reason": v.reason.value}
                            for v in report.violations
                        ],
                    }
                    for bench_id, report in sorted(case.reports.items())
                },
            }
            for case in plan.unassignable
        ],
        "total_cost": float(plan.total_cost),
        "total_bench_time_s": {
            bench_id: _seconds(seconds)
            for bench_id, seconds in sorted(plan.total_bench_time.items())
        },
    }


def save_plan(plan: AssignmentPlan, path: str | Path) -> None:
    write_text_atomic(path, _dump(plan_to_raw(plan)))
