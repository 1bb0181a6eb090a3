"""Command-line planning tool.

Subcommands: ``validate`` a registry, ``enumerate`` or ``classify`` the
configurations of a bench, ``chart`` a bench or configuration as SVG, and
``assign`` a test suite to configurations. Exit codes: 0 success, 1 domain
failure (including plans with unassignable test cases), 2 usage errors or a
refused ``--exact`` instance. Configuration indices always refer to the
deterministic enumeration order printed by ``enumerate``.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from typing import Sequence

from .assignment import AssignmentPlan, assign_exact, assign_greedy
from .chart import render_bench_chart, render_configuration_chart
from .configuration import (
    classify_test_method,
    count_configurations,
    enumerate_configurations,
)
from .errors import BenchlatticeError, InstanceTooLarge
from .registry import (
    load_budget,
    load_registry,
    load_suite,
    save_plan,
    write_text_atomic,
)
from .taxonomy import TestBench, leaf_dimensions

__all__ = ["run", "main"]


def _load_benches(path: str) -> list[TestBench]:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        benches = load_registry(path)
    for warning in caught:
        print(f"warning: {warning.message}", file=sys.stderr)
    return benches


def _find_bench(benches: Sequence[TestBench], bench_id: str) -> TestBench:
    for bench in benches:
        if bench.id == bench_id:
            return bench
    known = ", ".join(bench.id for bench in benches) or "none"
    raise BenchlatticeError(f"no bench {bench_id!r} in registry (available: {known})")


def _config_at(bench: TestBench, index: int):
    configs = enumerate_configurations(bench)
    if not 0 <= index < len(configs):
        raise BenchlatticeError(
            f"bench {bench.id!r} has {len(configs)} configurations; "
            f"index {index} is out of range"
        )
    return configs[index]


def cmd_validate(args: argparse.Namespace) -> int:
    benches = _load_benches(args.registry)
    for bench in benches:
        leaves = leaf_dimensions(bench)
        print(
            f"{bench.id}: {len(leaves)} leaf dimensions, "
            f"{len(bench.elements)} elements, "
            f"{count_configurations(bench)} configurations"
        )
    print(f"OK: {len(benches)} bench(es) valid")
    return 0


def cmd_enumerate(args: argparse.Namespace) -> int:
    benches = _load_benches(args.registry)
    bench = _find_bench(benches, args.bench)
    if args.count_only:
        print(count_configurations(bench))
        return 0
    configs = enumerate_configurations(bench)
    for index, config in enumerate(configs):
        method = classify_test_method(config, bench)
        selection = " ".join(
            f"{leaf}={'+'.join(ids)}" for leaf, ids in config.selection.items()
        )
        print(f"{index}\t{method.value}\t{selection}")
    return 0


def cmd_chart(args: argparse.Namespace) -> int:
    benches = _load_benches(args.registry)
    bench = _find_bench(benches, args.bench)
    if args.config is None:
        svg = render_bench_chart(bench)
    else:
        svg = render_configuration_chart(_config_at(bench, args.config), bench)
    write_text_atomic(args.output, svg)
    print(f"wrote {args.output}")
    return 0


def cmd_classify(args: argparse.Namespace) -> int:
    benches = _load_benches(args.registry)
    bench = _find_bench(benches, args.bench)
    config = _config_at(bench, args.config)
    print(classify_test_method(config, bench).value)
    return 0


def _print_summary(plan: AssignmentPlan) -> None:
    rows = [("test case", "bench", "config", "method", "cost", "time [s]")]
    for tc_id, assignment in plan.assignments.items():
        rows.append(
            (
                tc_id,
                assignment.bench_id,
                str(assignment.config_index),
                assignment.method.value,
                f"{float(assignment.cost.monetary_cost):.2f}",
                f"{float(assignment.cost.execution_time):.2f}",
            )
        )
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    for row in rows:
        print("  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip())
    for case in plan.unassignable:
        print(f"{case.test_case_id}  UNASSIGNABLE ({case.reason})")
        for bench_id, report in sorted(case.reports.items()):
            if report.admissible:
                print(f"    {bench_id}: admissible, but no bench time left")
            else:
                findings = ", ".join(
                    f"{v.reason.value} on {v.dimension}" for v in report.violations
                )
                print(f"    {bench_id}: {findings}")
    print(f"total cost: {float(plan.total_cost):.2f}")
    if plan.total_bench_time:
        spent = " ".join(
            f"{bench_id}={float(seconds):.2f}s"
            for bench_id, seconds in sorted(plan.total_bench_time.items())
        )
        print(f"bench time: {spent}")


def cmd_assign(args: argparse.Namespace) -> int:
    benches = _load_benches(args.registry)
    suite = load_suite(args.suite)
    budget = load_budget(args.budget) if args.budget else None
    solver = assign_exact if args.exact else assign_greedy
    try:
        plan = solver(
            suite.test_cases, benches, budget, overrides=suite.overrides
        )
    except InstanceTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    save_plan(plan, args.output)
    _print_summary(plan)
    print(f"wrote {args.output}")
    return 1 if plan.unassignable else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="benchlattice",
        description=(
            "Classify test benches, enumerate their configurations and assign "
            "test cases to the cheapest admissible configuration."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="load a registry and report every bench")
    p.add_argument("registry")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("enumerate", help="list or count a bench's configurations")
    p.add_argument("registry")
    p.add_argument("--bench", required=True)
    p.add_argument("--count-only", action="store_true")
    p.set_defaults(handler=cmd_enumerate)

    p = sub.add_parser("chart", help="render a bench or configuration radar chart")
    p.add_argument("registry")
    p.add_argument("--bench", required=True)
    p.add_argument("--config", type=int, default=None)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_chart)

    p = sub.add_parser("classify", help="print a configuration's test method")
    p.add_argument("registry")
    p.add_argument("--bench", required=True)
    p.add_argument("--config", type=int, required=True)
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("assign", help="assign a suite to configurations")
    p.add_argument("registry")
    p.add_argument("suite")
    p.add_argument("--budget", default=None)
    p.add_argument("--exact", action="store_true")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_assign)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    """Execute one CLI invocation; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.handler(args)
    except BenchlatticeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> int:
    return run()


if __name__ == "__main__":
    sys.exit(main())
