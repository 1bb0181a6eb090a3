"""Core domain model for test benches.

A test bench is described along ten canonical dimensions, each naming one
functionality the bench must provide (test object, driver/user behavior,
vehicle dynamics, ...). A dimension may be substantiated into sub-dimensions
(e.g. the environment sensor system into radar and camera), and every leaf
dimension holds one or more concrete elements, each classified on the
nominal scale simulated / emulated / real.

Values are immutable after validation; every operation that "modifies" a
bench returns a new value.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
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

__all__ = [
    "Stage",
    "DimensionKind",
    "DimensionNode",
    "Characteristics",
    "Element",
    "TestBench",
    "CANONICAL_DIMENSION_IDS",
    "new_bench",
    "with_elements",
    "substantiate_dimension",
    "validate_bench",
    "leaf_dimensions",
    "canonical_dimension_of",
    "elements_by_dimension",
]


class Stage(Enum):
    """Nominal classification of an element.

    The scale carries no order for matching purposes; ``chart_index`` exists
    only to place radar-chart rings (1 = simulated, 2 = emulated, 3 = real).
    """

    SIMULATED = "simulated"
    EMULATED = "emulated"
    REAL = "real"

    @property
    def chart_index(self) -> int:
        return _CHART_INDEX[self]

    @classmethod
    def from_name(cls, name: str) -> "Stage":
        try:
            return cls(name)
        except ValueError:
            raise TaxonomyError(
                f"unknown stage {name!r}; expected one of "
                f"{', '.join(s.value for s in cls)}"
            ) from None


_CHART_INDEX = {Stage.SIMULATED: 1, Stage.EMULATED: 2, Stage.REAL: 3}


class DimensionKind(Enum):
    CANONICAL = "canonical"
    SUB_DIMENSION = "sub-dimension"


# Canonical dimensions in their fixed presentation order. Only movable
# objects defaults to combinable: mixing real, emulated and simulated traffic
# objects in one run is the established practice; other dimensions pick
# exactly one element unless a bench overrides the flag.
_CANONICAL: tuple[tuple[str, str, bool], ...] = (
    ("test-object", "Test object", False),
    ("driver-user-behavior", "Driver / user behavior", False),
    ("vehicle-dynamics", "Vehicle dynamics", False),
    ("environment-sensor-system", "Environment sensor system", False),
    ("scenery", "Scenery", False),
    ("movable-objects", "Movable objects", True),
    ("environmental-conditions", "Environmental conditions", False),
    ("localization-sensor-system", "Localization sensor system", False),
    ("v2x-communication", "V2X communication", False),
    ("residual-vehicle", "Residual vehicle", False),
)

CANONICAL_DIMENSION_IDS: tuple[str, ...] = tuple(d[0] for d in _CANONICAL)

_CANONICAL_ORDER = {dim_id: i for i, (dim_id, _, _) in enumerate(_CANONICAL)}
_CANONICAL_COMBINABLE = {dim_id: flag for dim_id, _, flag in _CANONICAL}


@dataclass(frozen=True)
class DimensionNode:
    id: str
    display_name: str
    kind: DimensionKind
    parent: str | None = None
    combinable: bool = False

    def __post_init__(self) -> None:
        if self.kind is DimensionKind.SUB_DIMENSION and self.parent is None:
            raise TaxonomyError(f"sub-dimension {self.id!r} needs a parent")
        if self.kind is DimensionKind.CANONICAL and self.parent is not None:
            raise TaxonomyError(f"canonical dimension {self.id!r} cannot have a parent")


@dataclass(frozen=True)
class Characteristics:
    """Operational properties of one element.

    ``validated_for`` lists the purposes (free-form tags, compared by exact
    match) for which the element is known to produce usable results;
    ``cost_rate`` is charged per hour of execution time; ``time_factor``
    scales the scenario's nominal duration (< 1 runs faster than real time);
    ``setup_cost`` is charged once per run. ``extra`` is an open map reserved
    for further characteristics and is carried through serialization
    untouched.
    """

    validated_for: frozenset[str] = frozenset()
    cost_rate: float = 0.0
    time_factor: float = 1.0
    setup_cost: float = 0.0
    extra: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "validated_for", frozenset(self.validated_for))
        object.__setattr__(self, "extra", dict(self.extra))
        if self.cost_rate < 0:
            raise TaxonomyError(f"cost_rate must be >= 0, got {self.cost_rate}")
        if self.time_factor <= 0:
            raise TaxonomyError(f"time_factor must be > 0, got {self.time_factor}")
        if self.setup_cost < 0:
            raise TaxonomyError(f"setup_cost must be >= 0, got {self.setup_cost}")


@dataclass(frozen=True)
class Element:
    """One concrete implementation of a leaf dimension at one stage."""

    id: str
    display_name: str
    dimension: str
    stage: Stage
    characteristics: Characteristics = Characteristics()


@dataclass(frozen=True)
class TestBench:
    """A facility offering elements for every leaf dimension.

    Construct drafts with :func:`new_bench` and grow them with
    :func:`substantiate_dimension` / :func:`with_elements`; only
    :func:`validate_bench` guarantees the full invariants (complete canonical
    tree, resolvable references, no empty leaf, unique ids).
    """

    id: str
    display_name: str
    dimension_tree: tuple[DimensionNode, ...] = ()
    elements: tuple[Element, ...] = ()

    def node(self, dim_id: str) -> DimensionNode:
        for node in self.dimension_tree:
            if node.id == dim_id:
                return node
        raise UnknownDimension(f"bench {self.id!r} has no dimension {dim_id!r}")

    def element(self, element_id: str) -> Element:
        for elem in self.elements:
            if elem.id == element_id:
                return elem
        raise UnknownDimension(f"bench {self.id!r} has no element {element_id!r}")


def new_bench(
    bench_id: str,
    display_name: str | None = None,
    *,
    combinable_overrides: Mapping[str, bool] | None = None,
) -> TestBench:
    """Create an element-less draft bench with the canonical dimension tree."""
    overrides = dict(combinable_overrides or {})
    nodes = []
    for dim_id, label, default in _CANONICAL:
        nodes.append(
            DimensionNode(
                id=dim_id,
                display_name=label,
                kind=DimensionKind.CANONICAL,
                combinable=overrides.pop(dim_id, default),
            )
        )
    if overrides:
        raise UnknownDimension(
            f"combinable overrides for unknown dimensions: {sorted(overrides)}"
        )
    return TestBench(
        id=bench_id,
        display_name=display_name if display_name is not None else bench_id,
        dimension_tree=tuple(nodes),
    )


def with_elements(bench: TestBench, elements: Iterable[Element]) -> TestBench:
    """Return a copy of ``bench`` with ``elements`` appended (draft op)."""
    return replace(bench, elements=bench.elements + tuple(elements))


def _slug(name: str) -> str:
    return "-".join(name.strip().lower().split()).replace("_", "-")


def substantiate_dimension(
    bench: TestBench, parent: str, sub_names: Sequence[str]
) -> TestBench:
    """Refine a canonical leaf into sub-dimension leaves.

    The parent stops being a leaf and may no longer hold elements; each new
    sub-dimension inherits the parent's combinable flag. Depth is limited to
    one level.
    """
    if not sub_names:
        raise EmptySubNames(f"substantiating {parent!r} needs at least one name")
    parent_node = bench.node(parent)
    if parent_node.kind is not DimensionKind.CANONICAL:
        raise TaxonomyError(
            f"{parent!r} is a sub-dimension; only canonical dimensions can be substantiated"
        )
    if any(node.parent == parent for node in bench.dimension_tree):
        raise AlreadySubstantiated(f"dimension {parent!r} already has sub-dimensions")
    if any(elem.dimension == parent for elem in bench.elements):
        raise ParentHoldsElements(
            f"dimension {parent!r} holds elements; move them to sub-dimensions first"
        )

    existing = {node.id for node in bench.dimension_tree}
    subs = []
    for name in sub_names:
        sub_id = _slug(name)
        if not sub_id:
            raise EmptySubNames(f"blank sub-dimension name for parent {parent!r}")
        if sub_id in existing:
            raise DuplicateId(f"sub-dimension id {sub_id!r} already exists")
        existing.add(sub_id)
        subs.append(
            DimensionNode(
                id=sub_id,
                display_name=name,
                kind=DimensionKind.SUB_DIMENSION,
                parent=parent,
                combinable=parent_node.combinable,
            )
        )
    return replace(bench, dimension_tree=_canonical_tree_order(bench.dimension_tree + tuple(subs)))


def _canonical_tree_order(nodes: Iterable[DimensionNode]) -> tuple[DimensionNode, ...]:
    """Canonical dimension order, each parent directly followed by its subs
    in declaration order."""
    nodes = list(nodes)
    order = {node.id: i for i, node in enumerate(nodes)}

    def key(node: DimensionNode) -> tuple[int, int, int]:
        anchor = node.parent if node.parent is not None else node.id
        canonical_rank = _CANONICAL_ORDER.get(anchor, len(_CANONICAL))
        is_sub = 1 if node.parent is not None else 0
        return (canonical_rank, is_sub, order[node.id])

    return tuple(sorted(nodes, key=key))


def leaf_dimensions(bench: TestBench) -> tuple[DimensionNode, ...]:
    """The bench's leaves: canonical order, sub-dimensions replacing their
    parent in place (declaration order). Stable across runs."""
    nodes = _canonical_tree_order(bench.dimension_tree)
    parents_with_children = {node.parent for node in nodes if node.parent is not None}
    return tuple(node for node in nodes if node.id not in parents_with_children)


def canonical_dimension_of(bench: TestBench, leaf_id: str) -> str:
    """Map a leaf id to its canonical dimension id (itself if canonical)."""
    node = bench.node(leaf_id)
    return node.parent if node.parent is not None else node.id


def elements_by_dimension(bench: TestBench) -> dict[str, tuple[Element, ...]]:
    """Elements grouped per leaf, leaves in spoke order, elements in
    declaration order."""
    grouped: dict[str, list[Element]] = {node.id: [] for node in leaf_dimensions(bench)}
    for elem in bench.elements:
        grouped.setdefault(elem.dimension, []).append(elem)
    return {dim: tuple(elems) for dim, elems in grouped.items()}


RawBench = Union[Mapping[str, object], TestBench]


def validate_bench(raw: RawBench) -> TestBench:
    """Build and validate a test bench.

    Accepts either an already-constructed :class:`TestBench` (possibly a
    draft) or a parsed registry fragment with the keys ``id``,
    ``display_name``, ``substantiations``, ``combinable`` and ``elements``.
    Returns a bench in canonical ordering; validating a valid bench returns
    an equal value.
    """
    bench = _build_from_mapping(raw) if isinstance(raw, Mapping) else raw

    nodes = _canonical_tree_order(bench.dimension_tree)
    _check_tree(bench.id, nodes)

    leaf_ids = [node.id for node in leaf_dimensions(replace(bench, dimension_tree=nodes))]
    leaf_rank = {dim_id: i for i, dim_id in enumerate(leaf_ids)}
    non_leaves = {node.id for node in nodes} - set(leaf_ids)

    seen_elements: set[str] = set()
    for elem in bench.elements:
        if elem.id in seen_elements:
            raise DuplicateId(f"duplicate element id {elem.id!r} in bench {bench.id!r}")
        seen_elements.add(elem.id)
        if elem.dimension in non_leaves:
            raise ElementOnNonLeaf(
                f"element {elem.id!r} sits on substantiated dimension {elem.dimension!r}"
            )
        if elem.dimension not in leaf_rank:
            raise UnknownDimension(
                f"element {elem.id!r} references unknown dimension {elem.dimension!r}"
            )

    populated = {elem.dimension for elem in bench.elements}
    for leaf_id in leaf_ids:
        if leaf_id not in populated:
            raise EmptyLeaf(
                f"leaf dimension {leaf_id!r} of bench {bench.id!r} holds no element"
            )

    if any(node.parent == "test-object" for node in nodes):
        warnings.warn(
            f"bench {bench.id!r} substantiates the test-object dimension",
            BenchValidationWarning,
            stacklevel=2,
        )

    ordered_elements = tuple(
        sorted(
            enumerate(bench.elements),
            key=lambda pair: (leaf_rank[pair[1].dimension], pair[0]),
        )
    )
    return replace(
        bench,
        dimension_tree=nodes,
        elements=tuple(elem for _, elem in ordered_elements),
    )


def _check_tree(bench_id: str, nodes: tuple[DimensionNode, ...]) -> None:
    seen: set[str] = set()
    for node in nodes:
        if node.id in seen:
            raise DuplicateId(f"duplicate dimension id {node.id!r} in bench {bench_id!r}")
        seen.add(node.id)
    for dim_id in CANONICAL_DIMENSION_IDS:
        if dim_id not in seen:
            raise TaxonomyError(
                f"bench {bench_id!r} misses canonical dimension {dim_id!r}"
            )
    for node in nodes:
        if node.parent is None:
            continue
        if node.parent not in _CANONICAL_ORDER:
            raise TaxonomyError(
                f"sub-dimension {node.id!r} hangs off non-canonical {node.parent!r}; "
                "substantiation depth is one level"
            )
        if node.parent not in seen:
            raise UnknownDimension(
                f"sub-dimension {node.id!r} references missing parent {node.parent!r}"
            )


def _build_from_mapping(raw: Mapping[str, object]) -> TestBench:
    bench_id = str(raw.get("id", ""))
    display_name = str(raw.get("display_name", bench_id))
    substantiations = raw.get("substantiations") or {}
    combinable = dict(raw.get("combinable") or {})  # type: ignore[arg-type]

    canonical_overrides = {
        k: bool(v) for k, v in combinable.items() if k in _CANONICAL_COMBINABLE
    }
    bench = new_bench(bench_id, display_name, combinable_overrides=canonical_overrides)
    for parent, subs in substantiations.items():  # type: ignore[union-attr]
        bench = substantiate_dimension(bench, str(parent), list(subs))  # type: ignore[arg-type]

    sub_overrides = {k: v for k, v in combinable.items() if k not in canonical_overrides}
    if sub_overrides:
        known = {node.id for node in bench.dimension_tree}
        unknown = sorted(set(sub_overrides) - known)
        if unknown:
            raise UnknownDimension(f"combinable overrides for unknown dimensions: {unknown}")
        bench = replace(
            bench,
            dimension_tree=tuple(
                replace(node, combinable=bool(sub_overrides[node.id]))
                if node.id in sub_overrides
                else node
                for node in bench.dimension_tree
            ),
        )

    elements = []
    for entry in raw.get("elements") or ():  # type: ignore[union-attr]
        if isinstance(entry, Element):
            elements.append(entry)
            continue
        elements.append(
            Element(
                id=str(entry["id"]),
                display_name=str(entry.get("display_name", entry["id"])),
                dimension=str(entry["dimension"]),
                stage=Stage.from_name(str(entry["stage"])),
                characteristics=Characteristics(
                    validated_for=frozenset(entry.get("validated_for", ())),
                    cost_rate=float(entry.get("cost_rate", 0.0)),
                    time_factor=float(entry.get("time_factor", 1.0)),
                    setup_cost=float(entry.get("setup_cost", 0.0)),
                    extra=dict(entry.get("extra", {})),
                ),
            )
        )
    return with_elements(bench, elements)
