"""The lazy monotone solver: forward checking, deferred branch verification, backjumping."""

from __future__ import annotations

import logging
from typing import Optional

from ..constraints import ConstraintStore, forward_checking, obtain_constraints
from ..core.models import Arrangement, Instance
from ..core.world import placement_collides
from ..errors import BudgetExceeded
from .base import RunMeter, SolveContext, SolveCounters, SolveOutcome
from .tree import SearchMode, SearchTree, TreeNode, verify_branch

logger = logging.getLogger(__name__)


class _LocalGrowth:
    def __init__(
        self,
        tree: SearchTree,
        task: Instance,
        store: ConstraintStore,
        context: SolveContext,
        counters: SolveCounters,
    ) -> None:
        self.tree = tree
        self.task = task
        self.store = store
        self.context = context
        self.counters = counters
        self.goal_key = tree.key_of(task.goal)
        self.goal_node: Optional[TreeNode] = None

    def expand(self, node: TreeNode) -> bool:
        tree = self.tree
        world = self.task.world
        for obj in self.context.expansion_order(self.task, node.arrangement):
            self.context.enforce(tree)
            if not forward_checking(obj, node.arrangement, self.store, self.task):
                self.counters.forward_check_rejections += 1
                continue
            if tree.is_rejected(node, obj):
                continue
            goal = self.task.goal[obj]
            if placement_collides(node.arrangement, obj, goal, world):
                continue
            arrangement = node.arrangement.moved(obj, goal)
            existing = tree.find(arrangement)
            if existing is not None:
                tree.note_skip(node, existing)
                continue
            child = tree.add(node, arrangement, obj)
            if child.key == self.goal_key:
                check = verify_branch(tree, child, self.context.verifier)
                if check.success:
                    self.goal_node = child
                    return True
                tree.start_backjump(check.last)
            elif self.expand(child):
                return True
            # unwind until the frame of the last accessible node
            if tree.mode is SearchMode.BACKJUMPING:
                if tree.backjump_target is not node:
                    return False
                tree.reset_mode()
        return False


def grow_local_tree(
    tree: SearchTree,
    node: TreeNode,
    task: Instance,
    store: ConstraintStore,
    context: SolveContext,
    counters: Optional[SolveCounters] = None,
) -> Optional[TreeNode]:
    """Grow ``tree`` depth-first from ``node`` towards ``task.goal``.

    Returns the goal node once its whole root path is verified, ``None`` when the
    tree is exhausted. Nodes reopened by a trim are expanded again after the
    current pass unwinds.
    """

    growth = _LocalGrowth(tree, task, store, context, counters or SolveCounters())
    pending = [node]
    while pending:
        current = pending.pop(0)
        if current not in tree:
            continue
        if growth.expand(current):
            return growth.goal_node
        if tree.mode is SearchMode.BACKJUMPING:
            target = tree.backjump_target
            tree.reset_mode()
            if target is not None:
                tree.reopen(target)
        for reopened in tree.drain_reopened():
            if reopened not in pending:
                pending.append(reopened)
    return None


def lrs(start: Arrangement, instance: Instance, context: SolveContext) -> SolveOutcome:
    """Lazily solve the monotone task from ``start`` to ``instance.goal``."""

    task = instance.with_start(start)
    meter = RunMeter(context)
    tree = SearchTree(context.codec, start)
    counters = SolveCounters()
    outcome = SolveOutcome(tree=tree, solved=False, counters=counters)
    if start == instance.goal:
        outcome.solved = True
        outcome.solution_branch = [tree.root]
        meter.finish(counters, tree)
        return outcome
    try:
        store = obtain_constraints(
            task, clause_budget=context.config.clause_budget, subsumption=context.config.subsumption
        )
        goal_node = grow_local_tree(tree, tree.root, task, store, context, counters)
    except BudgetExceeded as exc:
        outcome.stop_reason = exc.stop_reason
        logger.warning("lazy solver stopped: %s", exc.stop_reason.detail)
        goal_node = None
    if goal_node is not None:
        outcome.solved = True
        outcome.solution_branch = tree.root_path(goal_node)
    meter.finish(counters, tree)
    logger.info(
        "lrs solved=%s planner_calls=%d nodes=%d trimmed=%d",
        outcome.solved,
        counters.planner_calls,
        counters.nodes,
        counters.trimmed_nodes,
    )
    return outcome


__all__ = ["grow_local_tree", "lrs"]
