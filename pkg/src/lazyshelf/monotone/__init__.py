"""Monotone solvers sharing one search-tree substrate."""

from __future__ import annotations

from typing import Callable, Dict

from ..core.models import Arrangement, Instance
from .base import RunMeter, SolveContext, SolveCounters, SolveOutcome
from .eager import solve_cirs, solve_dfsdp, solve_mrs
from .lazy import grow_local_tree, lrs
from .tree import EdgeKind, EdgeStatus, SearchTree, TreeNode, verify_branch

LocalSolver = Callable[[Arrangement, Instance, SolveContext], SolveOutcome]

SOLVERS: Dict[str, LocalSolver] = {
    "mrs": solve_mrs,
    "dfsdp": solve_dfsdp,
    "cirs": solve_cirs,
    "lrs": lrs,
}

# Solvers whose planner-call counts assume every edge query reaches the planner.
UNCACHED_SOLVERS = frozenset({"mrs"})


def get_solver(name: str) -> LocalSolver:
    try:
        return SOLVERS[name]
    except KeyError:
        raise ValueError(f"Unknown solver {name!r}; expected one of {sorted(SOLVERS)}") from None


__all__ = [
    "EdgeKind",
    "EdgeStatus",
    "LocalSolver",
    "RunMeter",
    "SOLVERS",
    "SearchTree",
    "SolveContext",
    "SolveCounters",
    "SolveOutcome",
    "TreeNode",
    "UNCACHED_SOLVERS",
    "get_solver",
    "grow_local_tree",
    "lrs",
    "solve_cirs",
    "solve_dfsdp",
    "solve_mrs",
    "verify_branch",
]
