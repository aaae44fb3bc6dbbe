"""Command-line interface for the lazyshelf planners."""
from __future__ import annotations

import argparse
from dataclasses import replace
from pathlib import Path
import sys
from typing import Sequence

from .bench.harness import load_suite, run_suite, write_csv
from .bench.render import render_svg
from .config import configure_logging, load_config
from .core.world import sample_instance
from .engine import solve_instance
from .errors import RearrangementError, SamplingExhausted
from .monotone import SOLVERS
from .perts import POLICIES
from .plan import load_plan, replay_plan, save_plan
from .resource_plan import SolveLimits
from .storage.instances import load_instance, load_world, save_instance

DEFAULT_INSTANCE_DIR = Path("data/instances")


def _handle_generate(args: argparse.Namespace) -> int:
    world = load_world(args.world)
    out = Path(args.out)
    written = 0
    for index in range(args.count):
        seed = args.seed + index
        try:
            instance = sample_instance(world, args.n, seed)
        except SamplingExhausted as exc:
            print(f"Skipped seed {seed}: {exc}")
            continue
        save_instance(instance, out / f"{instance.instance_id}.json")
        written += 1
    print(f"Wrote {written} instances with {args.n} objects into {out}")
    return 0


def _handle_solve(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    instance = load_instance(args.instance)
    limits = SolveLimits(max_seconds=args.budget) if args.budget is not None else None
    report = solve_instance(
        instance,
        solver=args.solver,
        policy=args.policy,
        config=config,
        limits=limits,
        seed=args.seed,
    )
    counters = report.counters
    label = report.solver if report.policy is None else f"{report.policy}/{report.solver}"
    if report.solved and report.plan is not None:
        print(
            f"{instance.instance_id or args.instance}: solved by {label} with {len(report.plan)} actions, "
            f"{report.buffers_used} buffers, {counters.get('planner_calls', 0)} planner calls"
        )
        if args.plan:
            save_plan(report.plan, args.plan)
            print(f"Plan written to {args.plan}")
    else:
        print(
            f"{instance.instance_id or args.instance}: not solved by {label} "
            f"({counters.get('planner_calls', 0)} planner calls)"
        )
    if report.stop_reason:
        print(f"Solve stopped early: {report.stop_reason.reason} ({report.stop_reason.detail})")
    return 0 if report.solved else 1


def _handle_bench(args: argparse.Namespace) -> int:
    spec = load_suite(args.suite)
    if args.config:
        spec = replace(spec, config=load_config(args.config))
    result = run_suite(spec)
    write_csv(result.records, args.csv)
    for row in result.summary.values():
        policy = row.policy or "-"
        print(
            f"{row.solver:6} {policy:12} n={row.n:<3} success={row.success_rate:6.1%} "
            f"total={row.mean_total_ms:10.3f}ms verify={row.mean_verify_ms:10.3f}ms "
            f"calls={row.mean_planner_calls:8.1f} buffers={row.mean_buffers:5.2f}"
        )
    print(f"Wrote {len(result.records)} records to {args.csv}")
    if result.interrupted:
        print("Bench stopped early: interrupted (partial records kept)")
    return 0


def _handle_render(args: argparse.Namespace) -> int:
    instance = load_instance(args.instance)
    plan = load_plan(args.plan) if args.plan else None
    if plan is not None:
        report = replay_plan(plan, instance)
        for problem in report.problems:
            print(f"Warning: {problem}")
    render_svg(instance, plan, args.out)
    print(f"Rendered {instance.instance_id or args.instance} into {args.out}")
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--config",
        default=None,
        help="Optional path to a planner configuration JSON file",
    )
    parser.add_argument(
        "--log-level",
        default="WARNING",
        help="Logging level for diagnostics on stderr",
    )


def build_parser() -> argparse.ArgumentParser:
    """Build the CLI argument parser."""

    parser = argparse.ArgumentParser(prog="lazyshelf")
    subparsers = parser.add_subparsers(dest="command", required=True)

    generate_parser = subparsers.add_parser("generate", help="Sample random instances")
    generate_parser.add_argument(
        "--world",
        default=None,
        help="Path to a world JSON file (defaults to the bundled desk world)",
    )
    generate_parser.add_argument("--n", type=int, required=True, help="Objects per instance")
    generate_parser.add_argument("--count", type=int, default=1, help="Number of instances")
    generate_parser.add_argument("--seed", type=int, default=0, help="Seed of the first instance")
    generate_parser.add_argument(
        "--out",
        default=str(DEFAULT_INSTANCE_DIR),
        help="Directory receiving the instance files",
    )
    _add_common(generate_parser)
    generate_parser.set_defaults(func=_handle_generate)

    solve_parser = subparsers.add_parser("solve", help="Solve one instance")
    solve_parser.add_argument("--instance", required=True, help="Path to the instance JSON")
    solve_parser.add_argument(
        "--solver",
        choices=sorted(SOLVERS),
        default="lrs",
        help="Monotone solver, also the local solver under --policy",
    )
    solve_parser.add_argument(
        "--policy",
        choices=POLICIES,
        default=None,
        help="Run perturbation search with this concatenation policy",
    )
    solve_parser.add_argument(
        "--budget",
        type=float,
        default=None,
        help="Stop solving after this many seconds",
    )
    solve_parser.add_argument("--seed", type=int, default=0, help="Perturbation search seed")
    solve_parser.add_argument("--plan", default=None, help="Write the solution plan JSON here")
    _add_common(solve_parser)
    solve_parser.set_defaults(func=_handle_solve)

    bench_parser = subparsers.add_parser("bench", help="Run an experiment suite")
    bench_parser.add_argument("--suite", required=True, help="Path to the suite JSON")
    bench_parser.add_argument("--csv", required=True, help="Output path for the run records")
    _add_common(bench_parser)
    bench_parser.set_defaults(func=_handle_bench)

    render_parser = subparsers.add_parser("render", help="Render a scene and optional plan as SVG")
    render_parser.add_argument("--instance", required=True, help="Path to the instance JSON")
    render_parser.add_argument("--plan", default=None, help="Optional plan JSON to draw")
    render_parser.add_argument("--out", required=True, help="Output SVG path")
    _add_common(render_parser)
    render_parser.set_defaults(func=_handle_render)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Run the lazyshelf CLI."""

    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        configure_logging(args.log_level)
        return args.func(args)
    except RearrangementError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
