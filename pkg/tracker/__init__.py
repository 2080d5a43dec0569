"""Wave front tracking engine for the autonomous initial-boundary value problem."""

from .models import (
    Domain, Front, Event, EventKind, EventRecord, Snapshot, Problem, GridData,
    FluxSegment, Solution, profile_from_snapshot, grid_profile_from_snapshot
)
from .engine import (
    BoundarySchedule, TrackerState, FrontTracker, init_state, next_event, apply_event,
    glimm_V, sharp, advance, prepare, data_tv, track, run, profile_at,
    termination_ledger, glimm_is_monotone
)

__all__ = [
    'Domain', 'Front', 'Event', 'EventKind', 'EventRecord', 'Snapshot', 'Problem',
    'GridData', 'FluxSegment', 'Solution', 'profile_from_snapshot',
    'grid_profile_from_snapshot', 'BoundarySchedule', 'TrackerState', 'FrontTracker',
    'init_state', 'next_event', 'apply_event', 'glimm_V', 'sharp', 'advance', 'prepare',
    'data_tv', 'track', 'run', 'profile_at', 'termination_ledger', 'glimm_is_monotone'
]
