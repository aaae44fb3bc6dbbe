"""Planner configuration and logging setup."""
from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace
import json
import logging
from pathlib import Path
from typing import Any, Mapping

from .errors import ConfigError

PLANNERS = ("grid", "roadmap")
EXPANSION_ORDERS = ("ascending", "random")
LOCAL_SOLVERS = ("mrs", "dfsdp", "cirs", "lrs")


@dataclass(frozen=True)
class PlannerConfig:
    """Tunables shared by the motion planner, the solvers and the global search."""

    planner: str = "grid"
    grid_factor: int = 4
    roadmap_samples: int = 2000
    roadmap_seed: int = 0
    expansion_order: str = "ascending"
    expansion_seed: int = 0
    clause_budget: int = 100_000
    subsumption: bool = True
    allow_goal_perturbation: bool = True
    local_solver: str = "lrs"
    edge_cache: bool = True

    def __post_init__(self) -> None:
        if self.planner not in PLANNERS:
            raise ConfigError(f"planner must be one of {PLANNERS}, got {self.planner!r}")
        if self.expansion_order not in EXPANSION_ORDERS:
            raise ConfigError(
                f"expansion_order must be one of {EXPANSION_ORDERS}, got {self.expansion_order!r}"
            )
        if self.local_solver not in LOCAL_SOLVERS:
            raise ConfigError(f"local_solver must be one of {LOCAL_SOLVERS}, got {self.local_solver!r}")
        if self.grid_factor < 1:
            raise ConfigError("grid_factor must be at least 1")
        if self.roadmap_samples < 1:
            raise ConfigError("roadmap_samples must be at least 1")
        if self.clause_budget < 1:
            raise ConfigError("clause_budget must be at least 1")

    @classmethod
    def from_dict(cls, raw: Mapping[str, Any]) -> "PlannerConfig":
        known = {item.name for item in fields(cls)}
        for key in raw:
            if key not in known:
                raise ConfigError(f"Unknown planner setting: {key}")
        return cls(**dict(raw))

    def with_overrides(self, **changes: Any) -> "PlannerConfig":
        return replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def load_config(path: str | Path | None) -> PlannerConfig:
    """Load a planner configuration file, or the defaults when no path is given."""

    if path is None:
        return PlannerConfig()
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}") from exc
    if not isinstance(payload, dict):
        raise ConfigError(f"{path}: configuration must be a JSON object")
    return PlannerConfig.from_dict(payload)


def configure_logging(level: str | int = logging.WARNING) -> None:
    """Send library logs to stderr at the requested level."""

    if isinstance(level, str):
        name = level
        level = logging.getLevelName(name.upper())
        if not isinstance(level, int):
            raise ConfigError(f"Unknown log level: {name}")
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


__all__ = [
    "EXPANSION_ORDERS",
    "LOCAL_SOLVERS",
    "PLANNERS",
    "PlannerConfig",
    "configure_logging",
    "load_config",
]
