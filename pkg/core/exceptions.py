"""Exception hierarchy shared by the solver, verifier and CLI."""

from typing import Any, Dict, Optional


class FrontTrackingError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(FrontTrackingError):
    """Experiment configuration could not be loaded or validated."""


class GridError(FrontTrackingError):
    """Bad grid spacing or data that is not on the ε-grid."""


class DomainError(FrontTrackingError):
    """Window, point or box outside the domain, or an empty interval."""


class RangeError(FrontTrackingError):
    """A state index fell outside the tabulated range of a PLC flux."""


class DivergentTailError(FrontTrackingError):
    """L¹ distance requested between functions with different tails."""


class ConsistencyError(FrontTrackingError):
    """An internal invariant of the front tracker was broken."""


class QuadratureBudgetExceeded(FrontTrackingError):
    """Entropy quadrature needed more cells than the configured budget."""


class ArtifactError(FrontTrackingError):
    """A solver artifact on disk is missing or malformed."""


class EventBudgetExceeded(FrontTrackingError):
    """The tracker hit its event-count safety fuse."""

    def __init__(self, message: str, dump: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.dump = dump or {}
