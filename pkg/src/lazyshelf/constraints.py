"""Reachability constraints derived from grasp footprints, and forward checking.

A clause is a conjunction of occupancy literals. When any clause stored for an
object holds at an arrangement, every grasp of that object at one of its sites is
blocked there, so moving it is pointless. Extraction never calls the motion planner.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
import logging
from typing import AbstractSet, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from .core.geometry import Point2
from .core.models import Arrangement, Instance, ObjectId
from .errors import DnfBlowup
from .manipulation.grasps import blocked_by, generate_grasps, wall_blocked

logger = logging.getLogger(__name__)

DEFAULT_CLAUSE_BUDGET = 100_000


class LiteralKind(str, Enum):
    AT_START = "S"
    AT_GOAL = "G"


@dataclass(frozen=True, order=True)
class OccupancyLiteral:
    object: ObjectId
    kind: LiteralKind

    def holds(self, arrangement: Arrangement, instance: Instance) -> bool:
        reference = instance.start if self.kind is LiteralKind.AT_START else instance.goal
        return arrangement[self.object] == reference[self.object]

    def to_json(self) -> List[str]:
        return [self.kind.value, self.object]

    def __str__(self) -> str:
        return f"{self.kind.value}({self.object})"


def at_start(obj: ObjectId) -> OccupancyLiteral:
    return OccupancyLiteral(obj, LiteralKind.AT_START)


def at_goal(obj: ObjectId) -> OccupancyLiteral:
    return OccupancyLiteral(obj, LiteralKind.AT_GOAL)


@dataclass(frozen=True)
class BlockClause:
    literals: FrozenSet[OccupancyLiteral]
    elicited_from: Optional[ObjectId] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not self.literals:
            raise ValueError("A block clause needs at least one literal")

    @property
    def objects(self) -> FrozenSet[ObjectId]:
        return frozenset(literal.object for literal in self.literals)

    @property
    def all_goal(self) -> bool:
        return all(literal.kind is LiteralKind.AT_GOAL for literal in self.literals)

    def sorted_literals(self) -> Tuple[OccupancyLiteral, ...]:
        return tuple(sorted(self.literals))

    def __str__(self) -> str:
        return " & ".join(str(literal) for literal in self.sorted_literals())


@dataclass(frozen=True)
class ConstraintStore:
    per_object: Mapping[ObjectId, Tuple[BlockClause, ...]]
    unmovable: FrozenSet[ObjectId] = frozenset()

    def clauses(self, obj: ObjectId) -> Tuple[BlockClause, ...]:
        return self.per_object.get(obj, ())

    @property
    def total_clauses(self) -> int:
        return sum(len(clauses) for clauses in self.per_object.values())

    def is_empty(self) -> bool:
        return not self.unmovable and self.total_clauses == 0


def expand_blockers(
    grasp_blockers: Sequence[AbstractSet[OccupancyLiteral]],
    budget: int = DEFAULT_CLAUSE_BUDGET,
) -> List[FrozenSet[OccupancyLiteral]]:
    """Distribute an AND over grasps of ORs over blockers into DNF clauses.

    An empty input yields no clauses; an empty blocker set makes the conjunction
    unsatisfiable and also yields none.
    """

    if not grasp_blockers:
        return []
    clauses: List[FrozenSet[OccupancyLiteral]] = [frozenset()]
    for blockers in grasp_blockers:
        expanded: Dict[FrozenSet[OccupancyLiteral], None] = {}
        for clause in clauses:
            for literal in sorted(blockers):
                expanded.setdefault(clause | {literal}, None)
                if len(expanded) > budget:
                    raise DnfBlowup(f"more than {budget} clauses while expanding grasp blockers")
        clauses = list(expanded)
    return clauses


def _contradictory(literals: FrozenSet[OccupancyLiteral]) -> bool:
    starts = {literal.object for literal in literals if literal.kind is LiteralKind.AT_START}
    goals = {literal.object for literal in literals if literal.kind is LiteralKind.AT_GOAL}
    return bool(starts & goals)


def _clause_order(clause: BlockClause) -> Tuple[int, Tuple[Tuple[str, str], ...]]:
    return (len(clause.literals), tuple((lit.object, lit.kind.value) for lit in clause.sorted_literals()))


def _prune(clauses: Iterable[BlockClause], subsumption: bool) -> Tuple[BlockClause, ...]:
    unique: Dict[FrozenSet[OccupancyLiteral], BlockClause] = {}
    for clause in clauses:
        unique.setdefault(clause.literals, clause)
    ordered = sorted(unique.values(), key=_clause_order)
    if not subsumption:
        return tuple(ordered)
    kept: List[BlockClause] = []
    for clause in ordered:
        if not any(other.literals <= clause.literals for other in kept):
            kept.append(clause)
    return tuple(kept)


def _blocker_labels(instance: Instance, obj: ObjectId) -> Dict[OccupancyLiteral, Point2]:
    labels: Dict[OccupancyLiteral, Point2] = {}
    for other in instance.objects:
        if other == obj:
            continue
        start, goal = instance.start[other], instance.goal[other]
        if start == goal:
            labels[at_goal(other)] = goal
        else:
            labels[at_start(other)] = start
            labels[at_goal(other)] = goal
    return labels


def obtain_constraints(
    instance: Instance,
    *,
    clause_budget: int = DEFAULT_CLAUSE_BUDGET,
    subsumption: bool = True,
) -> ConstraintStore:
    """Collect blocking clauses for every object not already at its goal."""

    world = instance.world
    raw: Dict[ObjectId, List[BlockClause]] = {obj: [] for obj in instance.objects}
    unmovable = set()

    for obj in instance.objects:
        if instance.start[obj] == instance.goal[obj]:
            continue
        labels = _blocker_labels(instance, obj)
        for site in (instance.start[obj], instance.goal[obj]):
            factors: List[FrozenSet[OccupancyLiteral]] = []
            site_free = False
            for grasp in generate_grasps(world, site):
                if wall_blocked(grasp, world):
                    continue
                blockers = frozenset(blocked_by(grasp, labels, world))
                if not blockers:
                    site_free = True
                    break
                factors.append(blockers)
            if site_free:
                continue
            if not factors:
                unmovable.add(obj)
                continue
            for literals in expand_blockers(factors, clause_budget):
                if not _contradictory(literals):
                    raw[obj].append(BlockClause(literals))

    for obj in instance.objects:
        for clause in list(raw[obj]):
            if not clause.all_goal or clause.elicited_from is not None:
                continue
            for constraining in sorted(clause.objects):
                if instance.start[constraining] == instance.goal[constraining]:
                    continue
                literals = frozenset(
                    {at_goal(other) for other in clause.objects if other != constraining} | {at_start(obj)}
                )
                raw[constraining].append(BlockClause(literals, elicited_from=obj))

    per_object = {obj: _prune(clauses, subsumption) for obj, clauses in raw.items()}
    total = sum(len(clauses) for clauses in per_object.values())
    if total > clause_budget:
        raise DnfBlowup(f"{total} clauses exceed the budget of {clause_budget}")
    store = ConstraintStore(per_object=per_object, unmovable=frozenset(unmovable))
    logger.debug("obtained %d clauses, %d unmovable objects", total, len(unmovable))
    return store


def clause_satisfied(clause: BlockClause, arrangement: Arrangement, instance: Instance) -> bool:
    return all(literal.holds(arrangement, instance) for literal in clause.literals)


def violated_clause(
    obj: ObjectId, arrangement: Arrangement, store: ConstraintStore, instance: Instance
) -> Optional[BlockClause]:
    """The first stored clause of ``obj`` that holds at ``arrangement``, if any."""

    for clause in store.clauses(obj):
        if clause_satisfied(clause, arrangement, instance):
            return clause
    return None


def forward_checking(obj: ObjectId, arrangement: Arrangement, store: ConstraintStore, instance: Instance) -> bool:
    """``False`` when moving ``obj`` at ``arrangement`` is ruled out by a stored constraint."""

    if obj in store.unmovable:
        return False
    return violated_clause(obj, arrangement, store, instance) is None


def dump_constraints(store: ConstraintStore) -> Dict[str, object]:
    payload: Dict[str, object] = {
        obj: [[literal.to_json() for literal in clause.sorted_literals()] for clause in clauses]
        for obj, clauses in store.per_object.items()
    }
    if store.unmovable:
        payload["_unmovable"] = sorted(store.unmovable)
    return payload


__all__ = [
    "BlockClause",
    "ConstraintStore",
    "DEFAULT_CLAUSE_BUDGET",
    "LiteralKind",
    "OccupancyLiteral",
    "at_goal",
    "at_start",
    "clause_satisfied",
    "dump_constraints",
    "expand_blockers",
    "forward_checking",
    "obtain_constraints",
    "violated_clause",
]
