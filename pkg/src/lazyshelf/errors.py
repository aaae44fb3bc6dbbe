"""Exceptions raised by the planning library."""
from __future__ import annotations

from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from .resource_plan import StopReason


class RearrangementError(Exception):
    """Base class for every error raised by lazyshelf."""


class EmptyGrid(RearrangementError):
    """No candidate position fits inside the workspace."""


class SamplingExhausted(RearrangementError):
    """Rejection sampling ran out of rounds before placing every object."""


class PlacementCollision(RearrangementError):
    """A placement overlaps another object."""


class OutOfWorkspace(RearrangementError):
    """A placement leaves the workspace."""


class MalformedEdge(RearrangementError):
    """Two arrangements do not differ in exactly one object."""


class DnfBlowup(RearrangementError):
    """Constraint expansion produced more clauses than the configured budget."""


class BranchNotVerified(RearrangementError):
    """A plan was requested for a branch that still has unverified edges."""


class ParseError(RearrangementError, ValueError):
    """A persisted file does not match its schema."""

    def __init__(self, message: str, *, field: str, line: Optional[int] = None) -> None:
        location = f" (line {line})" if line is not None else ""
        super().__init__(f"{field}: {message}{location}")
        self.field = field
        self.line = line


class ConfigError(RearrangementError, ValueError):
    """A configuration file carries an unknown or invalid setting."""


class IOFailure(RearrangementError, OSError):
    """Writing an output artefact failed."""


class BudgetExceeded(RearrangementError):
    """Raised inside a search to unwind once a resource limit is reached."""

    def __init__(self, stop_reason: StopReason) -> None:
        super().__init__(f"{stop_reason.reason}: {stop_reason.detail}")
        self.stop_reason = stop_reason


__all__ = [
    "BranchNotVerified",
    "BudgetExceeded",
    "ConfigError",
    "DnfBlowup",
    "EmptyGrid",
    "IOFailure",
    "MalformedEdge",
    "OutOfWorkspace",
    "ParseError",
    "PlacementCollision",
    "RearrangementError",
    "SamplingExhausted",
]
