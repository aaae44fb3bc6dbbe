"""Edge verification: the motion-planning oracle behind every accessible tree edge."""

from __future__ import annotations

from dataclasses import dataclass
import logging
import time
from typing import Dict, Optional, Protocol, Tuple

from ..config import PlannerConfig
from ..core.geometry import Point2
from ..core.models import Arrangement, ObjectId, WorldSpec
from ..errors import MalformedEdge
from .grasps import generate_grasps
from .motion import (
    MotionPath,
    MotionPlanner,
    MotionStats,
    PickPlaceQuery,
    make_planner,
    plan_pick_and_place,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EdgePaths:
    """Verified paths for moving ``object`` between two arrangements."""

    object: ObjectId
    transit: MotionPath
    transfer: MotionPath


class EdgeOracle(Protocol):
    stats: MotionStats

    def verify_edge(self, parent: Arrangement, child: Arrangement) -> Optional[EdgePaths]:
        ...


def moved_object(parent: Arrangement, child: Arrangement) -> ObjectId:
    """The single object whose position differs; :class:`MalformedEdge` otherwise."""

    differing = parent.differing_objects(child)
    if len(differing) != 1:
        raise MalformedEdge(f"arrangements differ in {len(differing)} objects, expected 1")
    return differing[0]


class EdgeVerifier:
    """Plans pick-and-place paths for tree edges, counting and timing every planner call.

    Results are cached per (parent arrangement, object, target) for the life of the
    verifier, so an edge is never planned twice in one run.
    """

    def __init__(
        self,
        world: WorldSpec,
        planner: Optional[MotionPlanner] = None,
        *,
        config: Optional[PlannerConfig] = None,
        cache: Optional[bool] = None,
        stats: Optional[MotionStats] = None,
    ) -> None:
        config = config or PlannerConfig()
        self.world = world
        self.planner = planner or make_planner(config, world)
        self.stats = stats or MotionStats()
        self._use_cache = config.edge_cache if cache is None else cache
        self._cache: Dict[Tuple[Arrangement, ObjectId, Point2], Optional[EdgePaths]] = {}

    def verify_edge(self, parent: Arrangement, child: Arrangement) -> Optional[EdgePaths]:
        obj = moved_object(parent, child)
        target = child[obj]
        key = (parent, obj, target)
        if self._use_cache and key in self._cache:
            self.stats.cache_hits += 1
            return self._cache[key]

        started = time.perf_counter()
        solution = plan_pick_and_place(
            PickPlaceQuery(parent, obj, target),
            self.world,
            generate_grasps(self.world, parent[obj]),
            generate_grasps(self.world, target),
            planner=self.planner,
            stats=self.stats,
        )
        self.stats.wall_time += time.perf_counter() - started
        self.stats.planner_calls += 1

        if solution is None:
            self.stats.edges_rejected += 1
            logger.debug("edge rejected: %s to (%.3f, %.3f)", obj, target.x, target.y)
            result = None
        else:
            self.stats.edges_verified += 1
            result = EdgePaths(obj, solution.transit, solution.transfer)
        if self._use_cache:
            self._cache[key] = result
        return result


__all__ = ["EdgeOracle", "EdgePaths", "EdgeVerifier", "moved_object"]
