"""Pick-and-place motion planning: collision sweeps, grid A*, and a sampled roadmap."""

from __future__ import annotations

from dataclasses import dataclass, field
import heapq
import logging
import math
from typing import Dict, List, Optional, Protocol, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree

from ..config import PlannerConfig
from ..core.geometry import Point2, points_array, segment_distances
from ..core.models import Arrangement, ObjectId, WorldSpec
from ..core.world import placement_collides
from .grasps import GraspPose, grasp_is_free

logger = logging.getLogger(__name__)

TRANSIT = "transit"
TRANSFER = "transfer"
_BOX_EPS = 1e-9


@dataclass(frozen=True)
class MotionPath:
    """Gripper-centre trace of one phase of a pick-and-place."""

    waypoints: Tuple[Point2, ...]
    phase: str
    carried_object: Optional[ObjectId] = None

    def __post_init__(self) -> None:
        if self.phase not in (TRANSIT, TRANSFER):
            raise ValueError(f"Unknown path phase {self.phase!r}")
        if not self.waypoints:
            raise ValueError("A path needs at least one waypoint")

    @property
    def length(self) -> float:
        return sum(a.distance_to(b) for a, b in zip(self.waypoints, self.waypoints[1:]))


@dataclass
class MotionStats:
    """Counters for the expensive oracle over one solver run."""

    planner_calls: int = 0
    collision_checks: int = 0
    wall_time: float = 0.0
    edges_verified: int = 0
    edges_rejected: int = 0
    cache_hits: int = 0

    def snapshot(self) -> Dict[str, float]:
        return {
            "planner_calls": self.planner_calls,
            "collision_checks": self.collision_checks,
            "wall_time": self.wall_time,
            "edges_verified": self.edges_verified,
            "edges_rejected": self.edges_rejected,
            "cache_hits": self.cache_hits,
        }


@dataclass(frozen=True)
class PickPlaceQuery:
    arrangement: Arrangement
    object: ObjectId
    place_at: Point2

    def __post_init__(self) -> None:
        if self.object not in self.arrangement:
            raise KeyError(f"Unknown object {self.object}")


@dataclass(frozen=True)
class PickPlaceSolution:
    transit: MotionPath
    transfer: MotionPath
    pick_grasp: GraspPose
    place_grasp: GraspPose


class SweepChecker:
    """Checks straight moves of a disc body against static object discs and the walls.

    The body may leave the workspace only through the open front side, down to the
    staging row.
    """

    def __init__(
        self,
        world: WorldSpec,
        obstacles: np.ndarray,
        body_radius: float,
        stats: Optional[MotionStats] = None,
    ) -> None:
        self.world = world
        self.body_radius = body_radius
        self._obstacles = np.asarray(obstacles, dtype=float).reshape(-1, 2)
        self._clearance = body_radius + world.object_radius
        self._stats = stats
        area = world.workspace
        self.x_min = area.min.x + body_radius
        self.x_max = area.max.x - body_radius
        self.y_min = world.staging_point.y
        self.y_max = area.max.y - body_radius

    @property
    def obstacles(self) -> np.ndarray:
        return self._obstacles.copy()

    def _count(self, checks: int) -> None:
        if self._stats is not None:
            self._stats.collision_checks += checks

    def inside(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(points)
        return (
            (points[:, 0] >= self.x_min - _BOX_EPS)
            & (points[:, 0] <= self.x_max + _BOX_EPS)
            & (points[:, 1] >= self.y_min - _BOX_EPS)
            & (points[:, 1] <= self.y_max + _BOX_EPS)
        )

    def segments_free(self, starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
        """Boolean mask of collision-free sweeps, one per segment."""

        starts = np.atleast_2d(np.asarray(starts, dtype=float))
        ends = np.atleast_2d(np.asarray(ends, dtype=float))
        self._count(starts.shape[0])
        free = self.inside(starts) & self.inside(ends)
        if self._obstacles.shape[0]:
            distances = segment_distances(starts, ends, self._obstacles)
            free &= np.all(distances >= self._clearance, axis=1)
        return free

    def segment_free(self, a: Point2, b: Point2) -> bool:
        return bool(self.segments_free(np.array([a.as_tuple()]), np.array([b.as_tuple()]))[0])

    def points_free(self, points: np.ndarray) -> np.ndarray:
        return self.segments_free(points, points)


class MotionPlanner(Protocol):
    def find_path(self, start: Point2, goal: Point2, checker: SweepChecker) -> Optional[List[Point2]]:
        ...


def _astar(
    coords: np.ndarray,
    adjacency: Dict[int, List[int]],
    source: int,
    target: int,
) -> Optional[List[int]]:
    goal = coords[target]
    frontier: List[Tuple[float, int, int]] = [(0.0, 0, source)]
    best: Dict[int, float] = {source: 0.0}
    came_from: Dict[int, int] = {}
    counter = 0
    while frontier:
        _, _, node = heapq.heappop(frontier)
        if node == target:
            path = [node]
            while node in came_from:
                node = came_from[node]
                path.append(node)
            return path[::-1]
        cost = best[node]
        for nxt in adjacency.get(node, ()):
            step = float(np.hypot(*(coords[nxt] - coords[node])))
            candidate = cost + step
            if candidate < best.get(nxt, math.inf) - 1e-12:
                best[nxt] = candidate
                came_from[nxt] = node
                counter += 1
                estimate = candidate + float(np.hypot(*(goal - coords[nxt])))
                heapq.heappush(frontier, (estimate, counter, nxt))
    return None


def _connect(
    graph_coords: np.ndarray,
    free_pairs: np.ndarray,
    start: Point2,
    goal: Point2,
    start_links: Sequence[int],
    goal_links: Sequence[int],
    checker: SweepChecker,
) -> Optional[List[Point2]]:
    """Attach start and goal to a graph of free edges and search it."""

    count = graph_coords.shape[0]
    source, target = count, count + 1
    coords = np.vstack([graph_coords, [start.as_tuple(), goal.as_tuple()]])
    adjacency: Dict[int, List[int]] = {}
    for i, j in free_pairs:
        adjacency.setdefault(int(i), []).append(int(j))
        adjacency.setdefault(int(j), []).append(int(i))
    for anchor, links in ((source, start_links), (target, goal_links)):
        links = list(links)
        if not links:
            return None
        ends = graph_coords[links]
        mask = checker.segments_free(np.repeat(coords[anchor][None, :], len(links), axis=0), ends)
        for node, ok in zip(links, mask):
            if ok:
                adjacency.setdefault(anchor, []).append(node)
                adjacency.setdefault(node, []).append(anchor)
    route = _astar(coords, adjacency, source, target)
    if route is None:
        return None
    return [start] + [Point2(float(coords[i][0]), float(coords[i][1])) for i in route[1:-1]] + [goal]


class GridPlanner:
    """Deterministic 8-connected A* over a lattice of spacing ``grid_resolution / factor``."""

    def __init__(self, world: WorldSpec, factor: int = 4) -> None:
        self.world = world
        self.step = world.grid_resolution / factor
        self._lattices: Dict[float, Tuple[np.ndarray, np.ndarray]] = {}

    def _lattice(self, checker: SweepChecker) -> Tuple[np.ndarray, np.ndarray]:
        cached = self._lattices.get(checker.body_radius)
        if cached is not None:
            return cached
        step = self.step
        cols = int(math.floor((checker.x_max - checker.x_min) / step + 1e-9)) + 1
        rows = int(math.floor((checker.y_max - checker.y_min) / step + 1e-9)) + 1
        if cols < 1 or rows < 1:
            lattice = (np.zeros((0, 2)), np.zeros((0, 2), dtype=int))
            self._lattices[checker.body_radius] = lattice
            return lattice
        xs = checker.x_min + step * np.arange(cols)
        ys = checker.y_min + step * np.arange(rows)
        grid_x, grid_y = np.meshgrid(xs, ys)
        coords = np.column_stack([grid_x.ravel(), grid_y.ravel()])
        index = np.arange(rows * cols).reshape(rows, cols)
        pairs = [
            np.column_stack([index[:, :-1].ravel(), index[:, 1:].ravel()]),
            np.column_stack([index[:-1, :].ravel(), index[1:, :].ravel()]),
            np.column_stack([index[:-1, :-1].ravel(), index[1:, 1:].ravel()]),
            np.column_stack([index[:-1, 1:].ravel(), index[1:, :-1].ravel()]),
        ]
        edges = np.vstack([p for p in pairs if p.size]) if any(p.size for p in pairs) else np.zeros((0, 2), dtype=int)
        lattice = (coords, edges.astype(int))
        self._lattices[checker.body_radius] = lattice
        return lattice

    def _links(self, coords: np.ndarray, point: Point2) -> List[int]:
        if coords.shape[0] == 0:
            return []
        reach = self.step * math.sqrt(2.0) + 1e-9
        distances = np.hypot(coords[:, 0] - point.x, coords[:, 1] - point.y)
        return [int(i) for i in np.flatnonzero(distances <= reach)]

    def find_path(self, start: Point2, goal: Point2, checker: SweepChecker) -> Optional[List[Point2]]:
        if start == goal:
            return [start] if checker.points_free(np.array([start.as_tuple()]))[0] else None
        if checker.segment_free(start, goal):
            return [start, goal]
        coords, edges = self._lattice(checker)
        if edges.shape[0] == 0:
            return None
        mask = checker.segments_free(coords[edges[:, 0]], coords[edges[:, 1]])
        return _connect(
            coords, edges[mask], start, goal, self._links(coords, start), self._links(coords, goal), checker
        )


class RoadmapPlanner:
    """Sampled roadmap with PRM*-style r-disc connections, reused across queries."""

    def __init__(self, world: WorldSpec, samples: int = 2000, seed: int = 0) -> None:
        self.world = world
        self.samples = samples
        self.seed = seed
        self._roadmaps: Dict[float, Tuple[np.ndarray, np.ndarray, cKDTree, float]] = {}

    def _roadmap(self, checker: SweepChecker) -> Tuple[np.ndarray, np.ndarray, cKDTree, float]:
        cached = self._roadmaps.get(checker.body_radius)
        if cached is not None:
            return cached
        rng = np.random.default_rng(self.seed)
        width = max(checker.x_max - checker.x_min, 0.0)
        height = max(checker.y_max - checker.y_min, 0.0)
        coords = np.column_stack(
            [
                rng.uniform(checker.x_min, checker.x_min + width, self.samples),
                rng.uniform(checker.y_min, checker.y_min + height, self.samples),
            ]
        )
        area = max(width * height, 1e-12)
        gamma = 2.0 * math.sqrt(1.5) * math.sqrt(area / math.pi)
        radius = gamma * math.sqrt(math.log(self.samples) / self.samples) if self.samples > 1 else math.hypot(width, height)
        tree = cKDTree(coords)
        pairs = tree.query_pairs(radius, output_type="ndarray")
        roadmap = (coords, np.asarray(pairs, dtype=int).reshape(-1, 2), tree, radius)
        self._roadmaps[checker.body_radius] = roadmap
        return roadmap

    def find_path(self, start: Point2, goal: Point2, checker: SweepChecker) -> Optional[List[Point2]]:
        if start == goal:
            return [start] if checker.points_free(np.array([start.as_tuple()]))[0] else None
        if checker.segment_free(start, goal):
            return [start, goal]
        coords, pairs, tree, radius = self._roadmap(checker)
        mask = checker.segments_free(coords[pairs[:, 0]], coords[pairs[:, 1]]) if pairs.size else np.zeros(0, bool)
        start_links = sorted(tree.query_ball_point(start.as_tuple(), radius))
        goal_links = sorted(tree.query_ball_point(goal.as_tuple(), radius))
        return _connect(coords, pairs[mask], start, goal, start_links, goal_links, checker)


def make_planner(config: PlannerConfig, world: WorldSpec) -> MotionPlanner:
    if config.planner == "roadmap":
        return RoadmapPlanner(world, samples=config.roadmap_samples, seed=config.roadmap_seed)
    return GridPlanner(world, factor=config.grid_factor)


def _obstacles(arrangement: Arrangement, moving: ObjectId) -> Dict[ObjectId, Point2]:
    return {obj: position for obj, position in arrangement.items() if obj != moving}


def plan_pick_and_place(
    query: PickPlaceQuery,
    world: WorldSpec,
    grasps_pick: Sequence[GraspPose],
    grasps_place: Sequence[GraspPose],
    *,
    planner: MotionPlanner,
    stats: Optional[MotionStats] = None,
) -> Optional[PickPlaceSolution]:
    """Plan staging -> pick (gripper alone) then pick -> place (carrying); ``None`` when impossible."""

    arrangement = query.arrangement
    obj = query.object
    if placement_collides(arrangement, obj, query.place_at, world):
        return None
    others = _obstacles(arrangement, obj)
    pick = next((g for g in grasps_pick if grasp_is_free(g, others, world)), None)
    if pick is None:
        logger.debug("no free grasp to pick %s", obj)
        return None
    place = next((g for g in grasps_place if grasp_is_free(g, others, world)), None)
    if place is None:
        logger.debug("no free grasp to place %s at (%.3f, %.3f)", obj, query.place_at.x, query.place_at.y)
        return None
    obstacles = points_array(others.values())
    transit_checker = SweepChecker(world, obstacles, world.gripper_radius, stats)
    transit = planner.find_path(world.staging_point, pick.target, transit_checker)
    if transit is None:
        return None
    transfer_checker = SweepChecker(world, obstacles, world.transfer_radius, stats)
    transfer = planner.find_path(pick.target, place.target, transfer_checker)
    if transfer is None:
        return None
    return PickPlaceSolution(
        transit=MotionPath(tuple(transit), TRANSIT),
        transfer=MotionPath(tuple(transfer), TRANSFER, carried_object=obj),
        pick_grasp=pick,
        place_grasp=place,
    )


def replay_paths(path: MotionPath, arrangement: Arrangement, moving: ObjectId, world: WorldSpec) -> bool:
    """Re-check every sweep of ``path`` against ``arrangement`` with ``moving`` lifted out."""

    radius = world.transfer_radius if path.phase == TRANSFER else world.gripper_radius
    checker = SweepChecker(world, points_array(_obstacles(arrangement, moving).values()), radius)
    points = points_array(path.waypoints)
    if points.shape[0] == 1:
        return bool(checker.points_free(points)[0])
    return bool(np.all(checker.segments_free(points[:-1], points[1:])))


__all__ = [
    "GridPlanner",
    "MotionPath",
    "MotionPlanner",
    "MotionStats",
    "PickPlaceQuery",
    "PickPlaceSolution",
    "RoadmapPlanner",
    "SweepChecker",
    "TRANSFER",
    "TRANSIT",
    "make_planner",
    "plan_pick_and_place",
    "replay_paths",
]
