"""Run context and outcome types shared by the monotone solvers."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
import time
from typing import Callable, Dict, List, Optional

import numpy as np

from ..config import PlannerConfig
from ..core.models import Arrangement, Instance, ObjectId
from ..core.world import StateCodec, build_grid
from ..manipulation.oracle import EdgeOracle, EdgeVerifier
from ..resource_plan import ResourceGuard, SolveLimits, StopReason
from .tree import SearchTree, TreeNode


@dataclass
class SolveCounters:
    planner_calls: int = 0
    verify_time: float = 0.0
    other_time: float = 0.0
    nodes: int = 0
    trimmed_nodes: int = 0
    forward_check_rejections: int = 0
    edges_verified: int = 0
    edges_rejected: int = 0

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


@dataclass
class SolveOutcome:
    tree: SearchTree
    solved: bool
    solution_branch: Optional[List[TreeNode]] = None
    counters: SolveCounters = field(default_factory=SolveCounters)
    stop_reason: Optional[StopReason] = None

    @property
    def goal_node(self) -> Optional[TreeNode]:
        return self.solution_branch[-1] if self.solution_branch else None


class SolveContext:
    """Everything a solver run needs besides the task: the oracle, the clock and settings.

    One context is used for one run (or one global-planner run) and is not shared
    between threads.
    """

    def __init__(
        self,
        instance: Instance,
        *,
        config: Optional[PlannerConfig] = None,
        limits: Optional[SolveLimits] = None,
        verifier: Optional[EdgeOracle] = None,
        guard: Optional[ResourceGuard] = None,
    ) -> None:
        self.instance = instance
        self.config = config or PlannerConfig()
        self.grid = build_grid(instance.world)
        self.codec = StateCodec(instance, self.grid)
        self.verifier = verifier or EdgeVerifier(instance.world, config=self.config)
        self.guard = guard or ResourceGuard(limits or SolveLimits())
        self.guard.start()
        self._rng = np.random.default_rng(self.config.expansion_seed)

    def expansion_order(self, task: Instance, arrangement: Arrangement) -> List[ObjectId]:
        """Objects not at their task goal, ascending or shuffled per the configuration."""

        pending = task.not_at_goal(arrangement)
        if self.config.expansion_order == "random" and len(pending) > 1:
            return [pending[int(i)] for i in self._rng.permutation(len(pending))]
        return pending

    def enforce(self, tree: SearchTree) -> None:
        self.guard.enforce(planner_calls=self.verifier.stats.planner_calls, nodes=len(tree))


class RunMeter:
    """Turns oracle statistics and wall time into per-run counters."""

    def __init__(self, context: SolveContext, clock: Callable[[], float] = time.perf_counter) -> None:
        self._stats = context.verifier.stats
        self._clock = clock
        self._started = clock()
        self._calls = self._stats.planner_calls
        self._verified = self._stats.edges_verified
        self._rejected = self._stats.edges_rejected
        self._verify_time = self._stats.wall_time

    def finish(self, counters: SolveCounters, tree: SearchTree) -> SolveCounters:
        total = self._clock() - self._started
        counters.planner_calls = self._stats.planner_calls - self._calls
        counters.edges_verified = self._stats.edges_verified - self._verified
        counters.edges_rejected = self._stats.edges_rejected - self._rejected
        counters.verify_time = self._stats.wall_time - self._verify_time
        counters.other_time = max(total - counters.verify_time, 0.0)
        counters.nodes = len(tree)
        counters.trimmed_nodes = tree.trimmed_nodes
        return counters


__all__ = ["RunMeter", "SolveContext", "SolveCounters", "SolveOutcome"]
