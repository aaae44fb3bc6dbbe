"""Resource governance for solver runs: wall-clock and work budgets."""
from __future__ import annotations

from dataclasses import dataclass
import time
from typing import Callable, Optional

from .errors import BudgetExceeded

MONOTONE_SECONDS = 100.0
NONMONOTONE_SECONDS = 240.0


@dataclass(frozen=True)
class SolveLimits:
    """Limits that control how much work a solver run may perform."""

    max_seconds: Optional[float] = MONOTONE_SECONDS
    max_planner_calls: Optional[int] = None
    max_nodes: Optional[int] = None
    max_perturbations: Optional[int] = None


@dataclass(frozen=True)
class StopReason:
    """Reason a solver run stopped early."""

    reason: str
    detail: str


class ResourceGuard:
    """Tracks elapsed time and work counters and stops a run at its limits."""

    def __init__(
        self,
        limits: SolveLimits,
        *,
        clock: Callable[[], float] = time.perf_counter,
    ) -> None:
        self._limits = limits
        self._clock = clock
        self._start_time: Optional[float] = None

    @property
    def limits(self) -> SolveLimits:
        return self._limits

    def start(self) -> None:
        """Start the wall clock. Calling it again on a running guard is a no-op."""

        if self._start_time is None:
            self._start_time = self._clock()

    def elapsed(self) -> float:
        if self._start_time is None:
            return 0.0
        return self._clock() - self._start_time

    def checkpoint(
        self,
        *,
        planner_calls: int = 0,
        nodes: int = 0,
        perturbations: int = 0,
    ) -> Optional[StopReason]:
        """Return a stop reason if any limit has been exceeded."""

        limits = self._limits
        if limits.max_planner_calls is not None and planner_calls >= limits.max_planner_calls:
            return StopReason(
                reason="max_planner_calls",
                detail=f"Made {planner_calls} planner calls (limit {limits.max_planner_calls}).",
            )
        if limits.max_nodes is not None and nodes >= limits.max_nodes:
            return StopReason(
                reason="max_nodes",
                detail=f"Tree holds {nodes} nodes (limit {limits.max_nodes}).",
            )
        if limits.max_perturbations is not None and perturbations >= limits.max_perturbations:
            return StopReason(
                reason="max_perturbations",
                detail=f"Attempted {perturbations} perturbations (limit {limits.max_perturbations}).",
            )
        if self._start_time is not None and limits.max_seconds is not None:
            elapsed = self._clock() - self._start_time
            if elapsed >= limits.max_seconds:
                return StopReason(
                    reason="max_seconds",
                    detail=f"Elapsed {elapsed:.4f}s (limit {limits.max_seconds:.4f}s).",
                )
        return None

    def enforce(self, *, planner_calls: int = 0, nodes: int = 0, perturbations: int = 0) -> None:
        """Raise :class:`BudgetExceeded` when :meth:`checkpoint` reports a stop."""

        stop = self.checkpoint(planner_calls=planner_calls, nodes=nodes, perturbations=perturbations)
        if stop is not None:
            raise BudgetExceeded(stop)


__all__ = [
    "MONOTONE_SECONDS",
    "NONMONOTONE_SECONDS",
    "ResourceGuard",
    "SolveLimits",
    "StopReason",
]
