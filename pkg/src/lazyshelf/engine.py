"""Solver facade used by the CLI and the benchmark harness."""
from __future__ import annotations

from dataclasses import dataclass, field
import logging
from typing import Any, Dict, Optional

from .config import PlannerConfig
from .core.models import Instance
from .core.world import validate_instance
from .manipulation.oracle import EdgeVerifier
from .monotone import UNCACHED_SOLVERS, SolveContext, get_solver
from .perts import ConcatPolicy, PerturbationSearch
from .plan import Plan, plan_from_branch
from .resource_plan import MONOTONE_SECONDS, NONMONOTONE_SECONDS, SolveLimits, StopReason

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolveReport:
    """Result of one solver run on one instance."""

    solver: str
    policy: Optional[str]
    solved: bool
    plan: Optional[Plan]
    counters: Dict[str, Any] = field(default_factory=dict)
    stop_reason: Optional[StopReason] = None

    @property
    def buffers_used(self) -> int:
        return self.plan.buffers_used if self.plan is not None else 0


def default_limits(policy: Optional[str]) -> SolveLimits:
    return SolveLimits(max_seconds=NONMONOTONE_SECONDS if policy else MONOTONE_SECONDS)


def make_context(
    instance: Instance,
    solver: str,
    *,
    config: Optional[PlannerConfig] = None,
    limits: Optional[SolveLimits] = None,
) -> SolveContext:
    """A fresh run context; the edge cache is off for solvers that count every query."""

    config = (config or PlannerConfig()).with_overrides(local_solver=solver)
    verifier = EdgeVerifier(
        instance.world,
        config=config,
        cache=config.edge_cache and solver not in UNCACHED_SOLVERS,
    )
    return SolveContext(instance, config=config, limits=limits, verifier=verifier)


def solve_instance(
    instance: Instance,
    *,
    solver: str = "lrs",
    policy: Optional[str] = None,
    config: Optional[PlannerConfig] = None,
    limits: Optional[SolveLimits] = None,
    seed: int = 0,
    validate: bool = True,
) -> SolveReport:
    """Solve monotonically with ``solver``, or with perturbation search when ``policy`` is set."""

    get_solver(solver)
    if validate:
        validate_instance(instance)
    context = make_context(instance, solver, config=config, limits=limits or default_limits(policy))

    if policy is None:
        outcome = get_solver(solver)(instance.start, instance, context)
        counters = outcome.counters.to_dict()
        counters["buffers_used"] = 0
        plan = None
        if outcome.solved and outcome.solution_branch is not None:
            plan = plan_from_branch(outcome.solution_branch, counters)
        return SolveReport(solver, None, outcome.solved, plan, counters, outcome.stop_reason)

    policy = ConcatPolicy(policy).value
    result = PerturbationSearch(instance, context, policy=policy, seed=seed).run()
    return SolveReport(solver, policy, result.solved, result.plan, result.counters.to_dict(), result.stop_reason)


__all__ = ["SolveReport", "default_limits", "make_context", "solve_instance"]
