"""Eagerly verified monotone baselines: plain backtracking, memoised DFS, constraint-pruned DFS."""

from __future__ import annotations

import logging
from typing import Optional

from ..constraints import ConstraintStore, forward_checking, obtain_constraints
from ..core.models import Arrangement, Instance
from ..core.world import placement_collides
from ..errors import BudgetExceeded
from .base import RunMeter, SolveContext, SolveCounters, SolveOutcome
from .tree import EdgeStatus, SearchTree, TreeNode

logger = logging.getLogger(__name__)


class _EagerSearch:
    """Depth-first search that motion-plans every edge before descending into it.

    ``memoize`` keeps one node per arrangement so each state is expanded once;
    ``store`` adds forward checking before any planner call.
    """

    def __init__(
        self,
        tree: SearchTree,
        task: Instance,
        context: SolveContext,
        counters: SolveCounters,
        *,
        memoize: bool,
        store: Optional[ConstraintStore] = None,
    ) -> None:
        self.tree = tree
        self.task = task
        self.context = context
        self.counters = counters
        self.memoize = memoize
        self.store = store
        self.goal_key = tree.key_of(task.goal)

    def expand(self, node: TreeNode) -> Optional[TreeNode]:
        tree = self.tree
        for obj in self.context.expansion_order(self.task, node.arrangement):
            self.context.enforce(tree)
            if self.store is not None and not forward_checking(obj, node.arrangement, self.store, self.task):
                self.counters.forward_check_rejections += 1
                continue
            goal = self.task.goal[obj]
            if placement_collides(node.arrangement, obj, goal, self.task.world):
                continue
            arrangement = node.arrangement.moved(obj, goal)
            if self.memoize and tree.find(arrangement) is not None:
                continue
            paths = self.context.verifier.verify_edge(node.arrangement, arrangement)
            if paths is None:
                continue
            child = tree.add(node, arrangement, obj, status=EdgeStatus.VERIFIED, paths=paths)
            if child.key == self.goal_key:
                return child
            found = self.expand(child)
            if found is not None:
                return found
        return None


def _run(
    name: str,
    start: Arrangement,
    instance: Instance,
    context: SolveContext,
    *,
    memoize: bool,
    constrained: bool,
) -> SolveOutcome:
    task = instance.with_start(start)
    meter = RunMeter(context)
    tree = SearchTree(context.codec, start, unique=memoize)
    counters = SolveCounters()
    outcome = SolveOutcome(tree=tree, solved=False, counters=counters)
    goal_node: Optional[TreeNode] = tree.root if start == instance.goal else None
    if goal_node is None:
        try:
            store = None
            if constrained:
                store = obtain_constraints(
                    task, clause_budget=context.config.clause_budget, subsumption=context.config.subsumption
                )
            search = _EagerSearch(tree, task, context, counters, memoize=memoize, store=store)
            goal_node = search.expand(tree.root)
        except BudgetExceeded as exc:
            outcome.stop_reason = exc.stop_reason
            logger.warning("%s stopped: %s", name, exc.stop_reason.detail)
    if goal_node is not None:
        outcome.solved = True
        outcome.solution_branch = tree.root_path(goal_node)
    meter.finish(counters, tree)
    logger.info("%s solved=%s planner_calls=%d nodes=%d", name, outcome.solved, counters.planner_calls, counters.nodes)
    return outcome


def solve_mrs(start: Arrangement, instance: Instance, context: SolveContext) -> SolveOutcome:
    """Backtracking over object orderings, no memoisation and no constraints."""
    return _run("mrs", start, instance, context, memoize=False, constrained=False)


def solve_dfsdp(start: Arrangement, instance: Instance, context: SolveContext) -> SolveOutcome:
    """Depth-first search expanding each arrangement state at most once."""
    return _run("dfsdp", start, instance, context, memoize=True, constrained=False)


def solve_cirs(start: Arrangement, instance: Instance, context: SolveContext) -> SolveOutcome:
    """Memoised depth-first search pruned by forward checking."""
    return _run("cirs", start, instance, context, memoize=True, constrained=True)


__all__ = ["solve_cirs", "solve_dfsdp", "solve_mrs"]
