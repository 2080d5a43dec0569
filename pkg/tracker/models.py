"""Data types of the front tracker: fronts, events, problems and solutions."""

import math
from bisect import bisect_right
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from core import DomainError
from flux import PLCFlux, SpaceTimeFlux
from stepfn import GridStepFunction, StepFunction


@dataclass(frozen=True)
class Domain:
    """Half-line [0, ∞) or segment [0, L]."""

    kind: str = 'half_line'
    length: Optional[float] = None

    def __post_init__(self):
        if self.kind not in ('half_line', 'segment'):
            raise DomainError(f"unknown domain kind {self.kind!r}")
        if self.kind == 'segment' and not (self.length is not None and self.length > 0):
            raise DomainError("a segment needs a positive length")

    @classmethod
    def half_line(cls) -> 'Domain':
        return cls('half_line', None)

    @classmethod
    def segment(cls, length: float) -> 'Domain':
        return cls('segment', float(length))

    @property
    def is_segment(self) -> bool:
        return self.kind == 'segment'

    @property
    def end(self) -> float:
        return self.length if self.is_segment else math.inf


@dataclass(frozen=True)
class Front:
    """A discontinuity between grid states, x(t) = x0 + speed·(t − t0)."""

    id: int
    x0: float
    t0: float
    left: int
    right: int
    speed: float

    def position(self, t: float) -> float:
        return self.x0 + self.speed * (t - self.t0)

    @property
    def strength(self) -> int:
        return abs(self.right - self.left)

    def shifted(self, dt: float) -> 'Front':
        return replace(self, t0=self.t0 + dt)


class EventKind(Enum):
    DATUM_JUMP_LEFT = 'boundary_datum_jump_left'
    DATUM_JUMP_RIGHT = 'boundary_datum_jump_right'
    BOUNDARY_HIT_LEFT = 'boundary_hit_left'
    BOUNDARY_HIT_RIGHT = 'boundary_hit_right'
    COLLISION = 'collision'

    @property
    def priority(self) -> int:
        """Tie-break order at equal times: datum jumps, then boundary hits, then collisions."""
        if self in (EventKind.DATUM_JUMP_LEFT, EventKind.DATUM_JUMP_RIGHT):
            return 0
        if self in (EventKind.BOUNDARY_HIT_LEFT, EventKind.BOUNDARY_HIT_RIGHT):
            return 1
        return 2


@dataclass(frozen=True)
class Event:
    time: float
    kind: EventKind
    position: float
    front_ids: Tuple[int, ...] = ()


@dataclass(frozen=True)
class Snapshot:
    """Configuration right after an event: fronts in order and the trace at x = 0+."""

    time: float
    fronts: Tuple[Front, ...]
    trace: int

    def shifted(self, dt: float) -> 'Snapshot':
        return Snapshot(self.time + dt, tuple(f.shifted(dt) for f in self.fronts), self.trace)


@dataclass(frozen=True)
class EventRecord:
    """Log line of one (possibly merged) event."""

    time: float
    kinds: Tuple[str, ...]
    position: float
    v_pre: int
    v_post: int
    sharp_pre: float
    sharp_post: float
    fronts_pre: int
    fronts_post: int
    fans: Tuple[Tuple[float, Tuple[Tuple[int, int, float], ...]], ...]
    fronts: Tuple[Front, ...] = ()
    trace: int = 0

    def to_dict(self, eps: float) -> Dict[str, Any]:
        return {
            'time': self.time,
            'kinds': list(self.kinds),
            'position': self.position,
            'V_pre': self.v_pre * eps,
            'V_post': self.v_post * eps,
            'sharp_pre': self.sharp_pre,
            'sharp_post': self.sharp_post,
            'fronts_pre': self.fronts_pre,
            'fronts_post': self.fronts_post,
            'fans': [[x, [list(w) for w in waves]] for x, waves in self.fans],
            'trace': self.trace,
            'fronts': [[f.id, f.x0, f.t0, f.left, f.right, f.speed] for f in self.fronts],
        }

    def shifted(self, dt: float) -> 'EventRecord':
        return replace(self, time=self.time + dt, fronts=tuple(f.shifted(dt) for f in self.fronts))


@dataclass(frozen=True)
class Problem:
    """An IBVP as posed: exact flux, raw data, domain, grid spacing and horizon."""

    flux: SpaceTimeFlux
    u_o: StepFunction
    u_b: StepFunction
    domain: Domain = field(default_factory=Domain.half_line)
    eps: float = 1.0
    horizon: float = 1.0
    u_b2: Optional[StepFunction] = None


@dataclass(frozen=True)
class GridData:
    """Quantized data of a problem plus the quantities the bounds are stated in."""

    eps: float
    u_o: GridStepFunction
    u_b: GridStepFunction
    u_b2: Optional[GridStepFunction]
    jump_left: float
    jump_right: float
    hull: Tuple[float, float]

    @property
    def hull_indices(self) -> Tuple[int, int]:
        return int(round(self.hull[0] / self.eps)), int(round(self.hull[1] / self.eps))


@dataclass(frozen=True)
class FluxSegment:
    """The PLC flux a solution obeys on [t_start, t_end]."""

    t_start: float
    t_end: float
    flux: PLCFlux


@dataclass
class Solution:
    """Wave front tracking solution: snapshots after every event plus logs."""

    domain: Domain
    eps: float
    horizon: float
    data: GridData
    segments: List[FluxSegment]
    snapshots: List[Snapshot]
    events: List[EventRecord]
    glimm: List[Tuple[float, int]] = field(default_factory=list)
    sharp: List[Tuple[float, float]] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)
    problem: Optional[Problem] = None

    @property
    def snapshot_times(self) -> List[float]:
        return [s.time for s in self.snapshots]

    def snapshot_at(self, t: float) -> Snapshot:
        if t < 0 or t > self.horizon * (1 + 1e-15) + 1e-15:
            raise DomainError(f"time {t} outside [0, {self.horizon}]")
        i = bisect_right(self.snapshot_times, t) - 1
        return self.snapshots[max(i, 0)]

    def fronts_at(self, t: float) -> Tuple[Front, ...]:
        return self.snapshot_at(t).fronts

    def flux_at(self, t: float) -> PLCFlux:
        for segment in self.segments:
            if segment.t_start <= t < segment.t_end:
                return segment.flux
        return self.segments[-1].flux

    def profile_at(self, t: float) -> StepFunction:
        return profile_from_snapshot(self.snapshot_at(t), t, self.domain, self.eps)

    def grid_profile_at(self, t: float) -> GridStepFunction:
        return grid_profile_from_snapshot(self.snapshot_at(t), t, self.domain, self.eps)

    @property
    def final_profile(self) -> StepFunction:
        return self.profile_at(self.horizon)

    def state_indices(self) -> List[int]:
        """Every grid state any snapshot takes."""
        states = []
        for snap in self.snapshots:
            states.append(snap.trace)
            states.extend(f.right for f in snap.fronts)
        return states

    def max_speed(self, t_end: Optional[float] = None) -> float:
        """‖Df^ε‖ over the hull cells, maximized over flux segments starting before t_end."""
        lo, hi = self.data.hull_indices
        t_end = self.horizon if t_end is None else t_end
        return max(
            (seg.flux.max_abs_slope(lo, hi) for seg in self.segments if seg.t_start <= t_end),
            default=0.0,
        )


def _positions(snapshot: Snapshot, t: float, domain: Domain) -> List[float]:
    out = []
    running = 0.0
    for f in snapshot.fronts:
        x = min(max(f.position(t), 0.0), domain.end)
        running = max(running, x)
        out.append(running)
    return out


def grid_profile_from_snapshot(snapshot: Snapshot, t: float, domain: Domain, eps: float) -> GridStepFunction:
    """u^ε(t, ·) on the grid, fronts advected linearly from the snapshot."""
    xs = _positions(snapshot, t, domain)
    ks = [snapshot.trace] + [f.right for f in snapshot.fronts]
    step = StepFunction.make(xs, ks, start=0.0, end=domain.end)
    return GridStepFunction.make(eps, step.breakpoints, [int(k) for k in step.values], 0.0, domain.end)


def profile_from_snapshot(snapshot: Snapshot, t: float, domain: Domain, eps: float) -> StepFunction:
    return grid_profile_from_snapshot(snapshot, t, domain, eps).to_step()
