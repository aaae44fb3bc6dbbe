"""Non-monotone planning by perturbation search over concatenated local trees."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
import logging
from typing import Callable, Deque, Dict, Optional, Tuple

import numpy as np

from .core.models import Arrangement, Instance, ObjectId, PositionGrid
from .core.geometry import Point2
from .core.world import free_positions
from .errors import BudgetExceeded
from .manipulation.oracle import EdgeOracle, EdgePaths
from .monotone import get_solver
from .monotone.base import RunMeter, SolveContext, SolveCounters
from .monotone.tree import EdgeKind, EdgeStatus, SearchTree, TreeNode, verify_branch
from .plan import Plan, plan_from_branch
from .resource_plan import StopReason

logger = logging.getLogger(__name__)


class ConcatPolicy(str, Enum):
    GREEDY = "greedy"
    CONSERVATIVE = "conservative"
    HYBRID = "hybrid"


POLICIES = tuple(policy.value for policy in ConcatPolicy)


@dataclass(frozen=True)
class Perturbation:
    at: TreeNode
    object: ObjectId
    buffer: Point2


@dataclass
class GlobalCounters(SolveCounters):
    perturbations: int = 0
    successful_perturbations: int = 0
    local_solves: int = 0
    buffers_used: int = 0


@dataclass
class GlobalOutcome:
    tree: SearchTree
    plan: Optional[Plan] = None
    counters: GlobalCounters = field(default_factory=GlobalCounters)
    stop_reason: Optional[StopReason] = None

    @property
    def solved(self) -> bool:
        return self.plan is not None


NodeSelector = Callable[[SearchTree, np.random.Generator], TreeNode]


def select_node(tree: SearchTree, rng: np.random.Generator) -> TreeNode:
    """A node drawn uniformly from the tree, in insertion order."""

    nodes = tree.nodes()
    return nodes[int(rng.integers(len(nodes)))]


def perturb_node(
    node: TreeNode,
    instance: Instance,
    grid: PositionGrid,
    verifier: EdgeOracle,
    rng: np.random.Generator,
    *,
    allow_goal_objects: bool = True,
) -> Optional[Tuple[Perturbation, Arrangement, EdgePaths]]:
    """One attempt at moving a random object to a random free grid buffer other than its goal."""

    arrangement = node.arrangement
    candidates = list(instance.objects)
    if not allow_goal_objects:
        candidates = instance.not_at_goal(arrangement)
    if not candidates:
        return None
    obj = candidates[int(rng.integers(len(candidates)))]
    goal = instance.goal[obj]
    buffers = [slot for slot in free_positions(arrangement, obj, grid, instance.world) if slot != goal]
    if not buffers:
        return None
    buffer = buffers[int(rng.integers(len(buffers)))]
    perturbed = arrangement.moved(obj, buffer)
    paths = verifier.verify_edge(arrangement, perturbed)
    if paths is None:
        return None
    return Perturbation(node, obj, buffer), perturbed, paths


def trace_back_path(tree: SearchTree, goal: TreeNode, stats: Optional[Dict[str, float]] = None) -> Plan:
    return plan_from_branch(tree.root_path(goal), stats)


class PerturbationSearch:
    """Grows a global tree from local solves, perturbing selected nodes into buffers."""

    def __init__(
        self,
        instance: Instance,
        context: SolveContext,
        *,
        policy: ConcatPolicy | str = ConcatPolicy.HYBRID,
        seed: int = 0,
        selector: NodeSelector = select_node,
    ) -> None:
        self.instance = instance
        self.context = context
        self.policy = ConcatPolicy(policy)
        self.rng = np.random.default_rng(seed)
        self.selector = selector
        self.local_solver = get_solver(context.config.local_solver)
        self.tree = SearchTree(context.codec, instance.start)
        self.goal_key = self.tree.key_of(instance.goal)
        self.counters = GlobalCounters()

    @property
    def verifier(self) -> EdgeOracle:
        return self.context.verifier

    def _admit(self, local: TreeNode) -> Tuple[EdgeStatus, Optional[EdgePaths]] | None:
        """Edge status to store for a local edge under the policy, ``None`` to drop its subtree."""

        if local.verified:
            return EdgeStatus.VERIFIED, local.edge_paths
        if self.policy is ConcatPolicy.GREEDY:
            return None
        if self.policy is ConcatPolicy.CONSERVATIVE:
            assert local.parent is not None
            paths = self.verifier.verify_edge(local.parent.arrangement, local.arrangement)
            if paths is None:
                return None
            return EdgeStatus.VERIFIED, paths
        return EdgeStatus.UNVERIFIED, None

    def _upgrade(self, existing: TreeNode, global_parent: TreeNode, local: TreeNode) -> None:
        """Keep a verified local edge that lands on an unverified global node."""

        assert local.edge_paths is not None and local.moved_object is not None
        if existing.parent is global_parent:
            self.tree.mark_verified(existing, local.edge_paths)
        elif self.tree.is_accessible(global_parent) and existing not in self.tree.root_path(global_parent):
            self.tree.reparent(existing, global_parent, local.moved_object, local.edge_paths, kind=local.edge_kind)
            logger.debug("moved %s under verified parent %d", existing, global_parent.node_id)

    def concatenate(self, local_tree: SearchTree, anchor: TreeNode) -> int:
        """Copy ``local_tree`` under ``anchor``, merging arrangements already present."""

        added = 0
        queue: Deque[Tuple[TreeNode, TreeNode]] = deque([(local_tree.root, anchor)])
        while queue:
            local_parent, global_parent = queue.popleft()
            for local in local_tree.children(local_parent):
                obj = local.moved_object
                assert obj is not None
                if self.tree.is_rejected(global_parent, obj):
                    continue
                existing = self.tree.find_key(local.key)
                if existing is not None:
                    if local.verified and not existing.verified and local.edge_paths is not None:
                        self._upgrade(existing, global_parent, local)
                    queue.append((local, existing))
                    continue
                admitted = self._admit(local)
                if admitted is None:
                    if self.policy is ConcatPolicy.CONSERVATIVE:
                        self.tree.reject_edge(global_parent, obj)
                    continue
                status, paths = admitted
                node = self.tree.add(
                    global_parent, local.arrangement, obj, status=status, kind=local.edge_kind, paths=paths
                )
                added += 1
                queue.append((local, node))
        return added

    def _local_solve(self, root: TreeNode) -> Optional[StopReason]:
        outcome = self.local_solver(root.arrangement, self.instance, self.context)
        self.counters.local_solves += 1
        self.counters.forward_check_rejections += outcome.counters.forward_check_rejections
        self.counters.trimmed_nodes += outcome.counters.trimmed_nodes
        self.concatenate(outcome.tree, root)
        return outcome.stop_reason

    def _accessible_goal(self) -> Optional[TreeNode]:
        goal = self.tree.find_key(self.goal_key)
        if goal is None:
            return None
        if self.tree.is_accessible(goal):
            return goal
        check = verify_branch(self.tree, goal, self.verifier)
        return goal if check.success else None

    def step(self) -> bool:
        """One outer iteration: select, verify, perturb, solve locally. True on a new buffer node."""

        node = self.selector(self.tree, self.rng)
        if not verify_branch(self.tree, node, self.verifier).success:
            return False
        self.counters.perturbations += 1
        result = perturb_node(
            node,
            self.instance,
            self.context.grid,
            self.verifier,
            self.rng,
            allow_goal_objects=self.context.config.allow_goal_perturbation,
        )
        if result is None:
            logger.debug("perturbation attempt %d failed", self.counters.perturbations)
            return False
        perturbation, arrangement, paths = result
        if self.tree.find(arrangement) is not None:
            return False
        pert_node = self.tree.add(
            node, arrangement, perturbation.object, status=EdgeStatus.VERIFIED, kind=EdgeKind.BUFFER, paths=paths
        )
        self.counters.successful_perturbations += 1
        logger.debug("perturbed %s into a buffer from node %d", perturbation.object, node.node_id)
        stop = self._local_solve(pert_node)
        if stop is not None:
            raise BudgetExceeded(stop)
        return True

    def run(self) -> GlobalOutcome:
        meter = RunMeter(self.context)
        outcome = GlobalOutcome(tree=self.tree, counters=self.counters)
        goal: Optional[TreeNode] = None
        try:
            stop = self._local_solve(self.tree.root)
            if stop is not None:
                raise BudgetExceeded(stop)
            goal = self._accessible_goal()
            while goal is None:
                self.context.guard.enforce(
                    planner_calls=self.verifier.stats.planner_calls,
                    nodes=len(self.tree),
                    perturbations=self.counters.perturbations,
                )
                if self.step():
                    goal = self._accessible_goal()
        except BudgetExceeded as exc:
            outcome.stop_reason = exc.stop_reason
            logger.warning("perturbation search stopped: %s", exc.stop_reason.detail)
        local_trimmed = self.counters.trimmed_nodes
        meter.finish(self.counters, self.tree)
        self.counters.trimmed_nodes += local_trimmed
        if goal is not None:
            outcome.plan = trace_back_path(self.tree, goal)
            self.counters.buffers_used = outcome.plan.buffers_used
            outcome.plan = Plan(outcome.plan.actions, self.counters.to_dict())
        logger.info(
            "perts policy=%s solved=%s perturbations=%d planner_calls=%d",
            self.policy.value,
            outcome.solved,
            self.counters.perturbations,
            self.counters.planner_calls,
        )
        return outcome


def perts_solve(
    instance: Instance,
    context: SolveContext,
    *,
    policy: ConcatPolicy | str = ConcatPolicy.HYBRID,
    seed: int = 0,
) -> GlobalOutcome:
    return PerturbationSearch(instance, context, policy=policy, seed=seed).run()


__all__ = [
    "ConcatPolicy",
    "GlobalCounters",
    "GlobalOutcome",
    "POLICIES",
    "Perturbation",
    "PerturbationSearch",
    "perts_solve",
    "perturb_node",
    "select_node",
    "trace_back_path",
]
