"""Event-driven wave front tracking on the half-line or a segment."""

import heapq
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Set, Tuple

from config import Settings, get_settings
from core import ConsistencyError, DomainError, EventBudgetExceeded, RangeError, get_logger
from flux import PLCFlux, plc_approximate, sup_du_norm
from riemann import (
    WaveFan, left_trace_after, right_trace_after, solve_boundary_left,
    solve_boundary_right, solve_riemann
)
from stepfn import GridStepFunction, quantize, quantize_boundary, range_hull, tv
from .models import (
    Domain, Event, EventKind, EventRecord, FluxSegment, Front, GridData, Problem,
    Snapshot, Solution
)

logger = get_logger(__name__)


@dataclass
class BoundarySchedule:
    """Grid boundary datum on [0, T) read as a queue of jumps."""

    times: Tuple[float, ...]
    indices: Tuple[int, ...]
    cursor: int = 0

    @classmethod
    def from_grid(cls, datum: GridStepFunction, horizon: float) -> 'BoundarySchedule':
        times = tuple(x for x in datum.breakpoints if x < horizon)
        return cls(times, datum.indices[:len(times) + 1])

    @property
    def current(self) -> int:
        return self.indices[self.cursor]

    @property
    def future_jumps(self) -> int:
        return len(self.times) - self.cursor

    @property
    def remaining_tv(self) -> int:
        ks = self.indices[self.cursor:]
        return sum(abs(b - a) for a, b in zip(ks, ks[1:]))

    @property
    def norm(self) -> int:
        return max(abs(k) for k in self.indices)

    def consume_until(self, t: float) -> int:
        """Advance past every jump at or before t; returns how many were consumed."""
        consumed = 0
        while self.cursor < len(self.times) and self.times[self.cursor] <= t:
            self.cursor += 1
            consumed += 1
        return consumed


class TrackerState:
    """Mutable front configuration between two events.

    Fronts are kept sorted by position; `trace` is the grid state at x = 0+
    and the state at x = L− is the right state of the last front (or the
    trace when there are none). All state arithmetic is on integer indices.
    """

    def __init__(self, flux: PLCFlux, u_o: GridStepFunction, u_b: GridStepFunction,
                 domain: Domain, horizon: float, u_b2: Optional[GridStepFunction] = None,
                 hull_indices: Optional[Tuple[int, int]] = None,
                 settings: Optional[Settings] = None):
        self.settings = settings or get_settings()
        self.logger = get_logger(self.__class__.__name__)
        if domain.is_segment and u_b2 is None:
            raise DomainError("a segment needs boundary data at x = L")
        if domain.is_segment and u_o.end != domain.end:
            raise DomainError(f"initial datum ends at {u_o.end}, segment at {domain.end}")

        self.flux = flux
        self.domain = domain
        self.horizon = float(horizon)
        self.eps = flux.eps
        self.tau = self.settings.event_tau(self.horizon)
        self.clock = 0.0

        self.left = BoundarySchedule.from_grid(u_b, self.horizon)
        self.right = BoundarySchedule.from_grid(u_b2, self.horizon) if domain.is_segment else None

        grids = [u_o, u_b] + ([u_b2] if domain.is_segment else [])
        lo = min(g.index_range[0] for g in grids)
        hi = max(g.index_range[1] for g in grids)
        self.hull_lo, self.hull_hi = hull_indices if hull_indices is not None else (lo, hi)
        if not (flux.contains(lo) and flux.contains(hi)):
            raise RangeError(f"data states [{lo}, {hi}] not covered by PLC range [{flux.k_min}, {flux.k_max}]")

        norm_o = max(abs(k) for k in u_o.indices)
        self.weight_left = 2 * (self.left.norm + norm_o)
        self.weight_right = 2 * (self.right.norm + norm_o) if self.right else 0

        self.fronts: List[Front] = []
        self.trace = u_o.indices[0]
        self.log: List[EventRecord] = []
        self.snapshots: List[Snapshot] = []
        self.glimm: List[Tuple[float, int]] = []
        self.sharp_trace: List[Tuple[float, float]] = []
        self._heap: List[Tuple[Any, ...]] = []
        self._seq = 0
        self._next_id = 0
        self._index: Dict[int, int] = {}

        self._glue_initial(u_o)

    # -- construction ------------------------------------------------------

    def _new_front(self, x: float, t: float, left: int, right: int, speed: float) -> Front:
        front = Front(self._next_id, float(x), float(t), int(left), int(right), float(speed))
        self._next_id += 1
        return front

    def _fan_fronts(self, fan: WaveFan, x: float, t: float) -> List[Front]:
        return [self._new_front(x, t, w.left, w.right, w.speed) for w in fan]

    def _glue_initial(self, u_o: GridStepFunction) -> None:
        fronts: List[Front] = []
        ks = u_o.indices
        for x, l, r in zip(u_o.breakpoints, ks, ks[1:]):
            fronts.extend(self._fan_fronts(solve_riemann(self.flux, l, r), x, 0.0))

        fan = solve_boundary_left(self.flux, self.left.current, self.trace)
        self.trace = left_trace_after(fan, self.trace)
        fronts = self._fan_fronts(fan, 0.0, 0.0) + fronts

        if self.right is not None:
            trace_r = ks[-1]
            fan_r = solve_boundary_right(self.flux, trace_r, self.right.current)
            fronts.extend(self._fan_fronts(fan_r, self.domain.end, 0.0))

        self.fronts = fronts
        self._reindex()
        for i, front in enumerate(self.fronts):
            self._schedule_front(i, include_pair=True)
        for i, t in enumerate(self.left.times):
            self._push(t, EventKind.DATUM_JUMP_LEFT, 0.0, ('left', i))
        if self.right is not None:
            for i, t in enumerate(self.right.times):
                self._push(t, EventKind.DATUM_JUMP_RIGHT, self.domain.end, ('right', i))
        self._check_range(self.fronts)
        self._record_snapshot()

    # -- queue -------------------------------------------------------------

    def _push(self, t: float, kind: EventKind, x: float, payload: Tuple[Any, ...]) -> None:
        self._seq += 1
        heapq.heappush(self._heap, (t, kind.priority, x, self._seq, kind, payload))

    def _reindex(self) -> None:
        self._index = {f.id: i for i, f in enumerate(self.fronts)}

    def _schedule_pair(self, a: Front, b: Front) -> None:
        if not a.speed > b.speed:
            return
        gap = max(b.position(self.clock) - a.position(self.clock), 0.0)
        t = self.clock + gap / (a.speed - b.speed)
        if t <= self.horizon:
            self._push(t, EventKind.COLLISION, a.position(t), (a.id, b.id))

    def _schedule_front(self, i: int, include_pair: bool = False) -> None:
        front = self.fronts[i]
        if include_pair and i + 1 < len(self.fronts):
            self._schedule_pair(front, self.fronts[i + 1])
        if i == 0 and front.speed < 0:
            t = self.clock + max(front.position(self.clock), 0.0) / -front.speed
            if t <= self.horizon:
                self._push(t, EventKind.BOUNDARY_HIT_LEFT, 0.0, (front.id,))
        if self.right is not None and i == len(self.fronts) - 1 and front.speed > 0:
            t = self.clock + max(self.domain.end - front.position(self.clock), 0.0) / front.speed
            if t <= self.horizon:
                self._push(t, EventKind.BOUNDARY_HIT_RIGHT, self.domain.end, (front.id,))

    def _valid(self, kind: EventKind, payload: Tuple[Any, ...]) -> bool:
        if kind is EventKind.COLLISION:
            a, b = payload
            return a in self._index and self._index.get(b) == self._index[a] + 1
        if kind is EventKind.BOUNDARY_HIT_LEFT:
            return self._index.get(payload[0]) == 0
        if kind is EventKind.BOUNDARY_HIT_RIGHT:
            return self._index.get(payload[0]) == len(self.fronts) - 1
        schedule = self.left if payload[0] == 'left' else self.right
        return schedule.cursor == payload[1]

    # -- functionals -------------------------------------------------------

    @property
    def right_trace(self) -> int:
        return self.fronts[-1].right if self.fronts else self.trace

    def glimm_units(self) -> int:
        """V^ε / ε as an exact integer."""
        total = sum(f.strength for f in self.fronts)
        total += self.left.remaining_tv + abs(self.left.current - self.trace)
        if self.right is not None:
            total += self.right.remaining_tv + abs(self.right.current - self.right_trace)
        return total

    def glimm_V(self) -> float:
        """Glimm functional: TV of the profile, of the remaining boundary data and the boundary mismatch."""
        return self.glimm_units() * self.eps

    def sharp(self) -> float:
        """Weighted number of discontinuities."""
        value = len(self.fronts) + self.weight_left * self.left.future_jumps
        value += abs(self.left.current - self.trace)
        if self.right is not None:
            value += self.weight_right * self.right.future_jumps
            value += abs(self.right.current - self.right_trace)
        return float(value)

    # -- events ------------------------------------------------------------

    def next_event(self) -> Optional[Event]:
        """Earliest live event before the horizon, or None when the horizon is reached."""
        while self._heap:
            t, _, x, _, kind, payload = self._heap[0]
            if not self._valid(kind, payload):
                heapq.heappop(self._heap)
                continue
            if t > self.horizon:
                return None
            ids = () if kind.priority == 0 else payload
            return Event(max(t, self.clock), kind, x, tuple(ids))
        return None

    def _collect_merged(self, event: Event) -> List[Tuple[EventKind, Tuple[Any, ...]]]:
        """Pop the live entries closer than τ to the event in time and position."""
        merged, keep = [], []
        while self._heap and self._heap[0][0] <= event.time + self.tau:
            entry = heapq.heappop(self._heap)
            t, _, x, _, kind, payload = entry
            if not self._valid(kind, payload):
                continue
            if abs(x - event.position) <= self.tau:
                merged.append((kind, payload))
            else:
                keep.append(entry)
        for entry in keep:
            heapq.heappush(self._heap, entry)
        return merged

    def apply_event(self, event: Event) -> EventRecord:
        """Resolve everything happening at the event: collisions, boundary hits and datum jumps."""
        t = max(event.time, self.clock)
        v_pre, sharp_pre, n_pre = self.glimm_units(), self.sharp(), len(self.fronts)
        merged = self._collect_merged(event)
        kinds = sorted({kind.value for kind, _ in merged} | {event.kind.value})

        self.clock = t
        old_pairs = {(a.id, b.id) for a, b in zip(self.fronts, self.fronts[1:])}
        old_first = self.fronts[0].id if self.fronts else None
        old_last = self.fronts[-1].id if self.fronts else None
        fans: List[Tuple[float, Tuple[Tuple[int, int, float], ...]]] = []

        forced_pairs = {p for k, p in merged if k is EventKind.COLLISION}
        hits_left = {p[0] for k, p in merged if k is EventKind.BOUNDARY_HIT_LEFT}
        hits_right = {p[0] for k, p in merged if k is EventKind.BOUNDARY_HIT_RIGHT}
        jump_left = any(k is EventKind.DATUM_JUMP_LEFT for k, _ in merged)
        jump_right = any(k is EventKind.DATUM_JUMP_RIGHT for k, _ in merged)

        self._resolve_interior(t, forced_pairs, fans)
        self._resolve_left(t, jump_left, hits_left, fans)
        if self.right is not None:
            self._resolve_right(t, jump_right, hits_right, fans)

        self._reindex()
        new_pairs = list(zip(self.fronts, self.fronts[1:]))
        for a, b in new_pairs:
            if (a.id, b.id) not in old_pairs:
                self._schedule_pair(a, b)
        ends = set()
        if self.fronts and self.fronts[0].id != old_first:
            ends.add(0)
        if self.fronts and self.fronts[-1].id != old_last:
            ends.add(len(self.fronts) - 1)
        for i in sorted(ends):
            self._schedule_front(i)

        self._check_range(self.fronts)
        v_post = self.glimm_units()
        if v_post > v_pre:
            raise ConsistencyError(f"Glimm functional increased at t={t}: {v_pre * self.eps} -> {v_post * self.eps}")

        record = EventRecord(
            time=t, kinds=tuple(kinds), position=event.position,
            v_pre=v_pre, v_post=v_post, sharp_pre=sharp_pre, sharp_post=self.sharp(),
            fronts_pre=n_pre, fronts_post=len(self.fronts), fans=tuple(fans),
            fronts=tuple(self.fronts), trace=self.trace,
        )
        self.log.append(record)
        self._record_snapshot()
        return record

    def _positions(self, t: float) -> List[float]:
        return [min(max(f.position(t), 0.0), self.domain.end) for f in self.fronts]

    def _resolve_interior(self, t: float, forced: Set[Tuple[int, int]], fans: List) -> None:
        """Replace every run of co-located interacting fronts by one Riemann fan."""
        if len(self.fronts) < 2:
            return
        xs = self._positions(t)
        joins = []
        for i, (a, b) in enumerate(zip(self.fronts, self.fronts[1:])):
            close = xs[i + 1] - xs[i] <= self.tau and a.speed > b.speed
            joins.append((a.id, b.id) in forced or close)
        if not any(joins):
            return
        out: List[Front] = []
        i = 0
        n = len(self.fronts)
        while i < n:
            j = i
            while j < n - 1 and joins[j]:
                j += 1
            if j == i:
                out.append(self.fronts[i])
            else:
                x = min(max(sum(xs[i:j + 1]) / (j + 1 - i), 0.0), self.domain.end)
                fan = solve_riemann(self.flux, self.fronts[i].left, self.fronts[j].right)
                fans.append((x, tuple(tuple(w) for w in fan)))
                out.extend(self._fan_fronts(fan, x, t))
            i = j + 1
        self.fronts = out

    def _resolve_left(self, t: float, jumped: bool, hits: Set[int], fans: List) -> None:
        """Absorb the fronts sitting at x = 0 and emit the boundary fan of the current datum."""
        xs = self._positions(t)
        m = 0
        while m < len(xs) and xs[m] <= self.tau:
            m += 1
        if m == 0 and self.fronts and self.fronts[0].id in hits:
            m = 1
        absorbs = any(f.speed <= 0 for f in self.fronts[:m])
        if not (jumped or absorbs):
            return
        trace = self.fronts[m - 1].right if m else self.trace
        self.fronts = self.fronts[m:]
        self.left.consume_until(t + self.tau)
        fan = solve_boundary_left(self.flux, self.left.current, trace)
        self.trace = left_trace_after(fan, trace)
        if fan or m:
            fans.append((0.0, tuple(tuple(w) for w in fan)))
        self.fronts = self._fan_fronts(fan, 0.0, t) + self.fronts

    def _resolve_right(self, t: float, jumped: bool, hits: Set[int], fans: List) -> None:
        """Mirror of the left boundary at x = L."""
        end = self.domain.end
        xs = self._positions(t)
        m = len(xs)
        while m > 0 and xs[m - 1] >= end - self.tau:
            m -= 1
        if m == len(xs) and self.fronts and self.fronts[-1].id in hits:
            m -= 1
        absorbs = any(f.speed >= 0 for f in self.fronts[m:])
        if not (jumped or absorbs):
            return
        trace_r = self.fronts[m].left if m < len(self.fronts) else self.right_trace
        self.fronts = self.fronts[:m]
        self.right.consume_until(t + self.tau)
        fan = solve_boundary_right(self.flux, trace_r, self.right.current)
        if not self.fronts:
            self.trace = trace_r
        if fan or m < len(xs):
            fans.append((end, tuple(tuple(w) for w in fan)))
        self.fronts = self.fronts + self._fan_fronts(fan, end, t)
        if right_trace_after(fan, trace_r) != self.right_trace:
            raise ConsistencyError(f"right trace mismatch at t={t}")

    def _check_range(self, fronts: List[Front]) -> None:
        for f in fronts:
            for k in (f.left, f.right):
                if not self.hull_lo <= k <= self.hull_hi:
                    raise ConsistencyError(
                        f"front {f.id} state {k} left the hull [{self.hull_lo}, {self.hull_hi}]"
                    )

    def _record_snapshot(self) -> None:
        self.snapshots.append(Snapshot(self.clock, tuple(self.fronts), self.trace))
        self.glimm.append((self.clock, self.glimm_units()))
        self.sharp_trace.append((self.clock, self.sharp()))

    def dump(self) -> Dict[str, Any]:
        return {
            'clock': self.clock,
            'fronts': [[f.id, f.position(self.clock), f.left, f.right, f.speed] for f in self.fronts],
            'trace': self.trace,
            'events': len(self.log),
            'pending': len(self._heap),
        }


def init_state(flux: PLCFlux, u_o: GridStepFunction, u_b: GridStepFunction, domain: Domain,
               horizon: float, u_b2: Optional[GridStepFunction] = None,
               settings: Optional[Settings] = None) -> TrackerState:
    """Glue the initial Riemann fans at every jump of u_o and at the boundaries."""
    return TrackerState(flux, u_o, u_b, domain, horizon, u_b2=u_b2, settings=settings)


def next_event(state: TrackerState) -> Optional[Event]:
    return state.next_event()


def apply_event(state: TrackerState, event: Event) -> EventRecord:
    return state.apply_event(event)


def glimm_V(state: TrackerState) -> float:
    return state.glimm_V()


def sharp(state: TrackerState) -> float:
    return state.sharp()


def advance(state: TrackerState, max_events: Optional[int] = None) -> TrackerState:
    """Process events until the horizon; raises EventBudgetExceeded past the fuse."""
    limit = max_events or state.settings.max_events
    while True:
        event = state.next_event()
        if event is None:
            return state
        if len(state.log) >= limit:
            raise EventBudgetExceeded(
                f"more than {limit} events before t={state.horizon} (clock {state.clock})",
                dump=state.dump(),
            )
        state.apply_event(event)


def prepare(problem: Problem) -> GridData:
    """Quantize the data of a problem onto εℤ, keeping the boundary jumps bounded."""
    eps = problem.eps
    domain = problem.domain
    if problem.horizon <= 0:
        raise DomainError(f"horizon must be positive, got {problem.horizon}")
    if problem.u_o.start != 0.0 or problem.u_o.end != domain.end:
        raise DomainError(f"initial datum lives on [{problem.u_o.start}, {problem.u_o.end}], "
                          f"domain is [0, {domain.end}]")
    if problem.u_b.end < problem.horizon:
        raise DomainError(f"boundary datum ends at {problem.u_b.end} before the horizon {problem.horizon}")

    u_o = quantize(problem.u_o, eps)
    u_b, jump_left = quantize_boundary(problem.u_b, eps, u_o.indices[0], problem.u_o.values[0])
    u_b2, jump_right = None, 0.0
    windows: List[Any] = [problem.u_o, (problem.u_b, (0.0, problem.horizon)),
                          u_o.to_step(), (u_b.to_step(), (0.0, problem.horizon))]
    if domain.is_segment:
        if problem.u_b2 is None:
            raise DomainError("a segment needs boundary data at x = L")
        u_b2, jump_right = quantize_boundary(problem.u_b2, eps, u_o.indices[-1], problem.u_o.values[-1])
        windows += [(problem.u_b2, (0.0, problem.horizon)), (u_b2.to_step(), (0.0, problem.horizon))]
    hull = range_hull(windows)
    return GridData(eps, u_o, u_b, u_b2, jump_left, jump_right, hull)


def data_tv(data: GridData, horizon: float) -> float:
    """K: TV of the quantized data on [0, T] plus the initial boundary mismatches."""
    total = tv(data.u_o.to_step()) + tv(data.u_b.to_step(), (0.0, horizon)) + data.jump_left
    if data.u_b2 is not None:
        total += tv(data.u_b2.to_step(), (0.0, horizon)) + data.jump_right
    return total


def track(flux: PLCFlux, data: GridData, domain: Domain, horizon: float,
          settings: Optional[Settings] = None) -> Solution:
    """Run the tracker with a fixed PLC flux on grid data; no metadata beyond the logs."""
    state = TrackerState(flux, data.u_o, data.u_b, domain, horizon, u_b2=data.u_b2, settings=settings)
    advance(state)
    return Solution(
        domain=domain, eps=data.eps, horizon=float(horizon), data=data,
        segments=[FluxSegment(0.0, float(horizon), flux)],
        snapshots=state.snapshots, events=state.log,
        glimm=state.glimm, sharp=state.sharp_trace,
    )


class FrontTracker:
    """Solves autonomous IBVPs by wave front tracking."""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()
        self.logger = get_logger(self.__class__.__name__)

    def run(self, problem: Problem) -> Solution:
        """Quantize, build the PLC flux at t = 0 and track to the horizon."""
        if not problem.flux.is_autonomous:
            self.logger.warning("Flux depends on t; freezing it at t = 0 (use the dyadic solver instead)")
        data = prepare(problem)
        flux = plc_approximate(problem.flux, 0.0, problem.eps, data.hull)
        self.logger.debug(f"PLC flux on states [{flux.k_min}, {flux.k_max}] with eps={problem.eps}")

        solution = track(flux, data, problem.domain, problem.horizon, settings=self.settings)
        solution.problem = problem
        solution.metadata.update(self.constants(problem, data, solution))
        self.logger.info(
            f"Tracked to T={problem.horizon}: {len(solution.events)} events, "
            f"{len(solution.snapshots[-1].fronts)} fronts, V={solution.glimm[-1][1] * problem.eps:.6g}"
        )
        return solution

    def constants(self, problem: Problem, data: GridData, solution: Solution) -> Dict[str, float]:
        """Stability constants L, K and the time-Lipschitz constant C₁ of a run."""
        K = data_tv(data, problem.horizon)
        L = 1.0 + sup_du_norm(problem.flux, (0.0, problem.horizon), data.hull)
        C1 = solution.max_speed() * K
        return {'L': L, 'K': K, 'C1': C1, 'eps': problem.eps, 'T': problem.horizon}


def run(problem: Problem, settings: Optional[Settings] = None) -> Solution:
    return FrontTracker(settings).run(problem)


def profile_at(solution: Solution, t: float):
    return solution.profile_at(t)


def termination_ledger(records: List[EventRecord]) -> List[bool]:
    """Per event: ♯ did not increase, or V dropped by at least ε, or fronts were absorbed.

    ♯ can stay equal, for instance when a datum jump removes the boundary
    mismatch it adds as an entering front.
    """
    out = []
    for r in records:
        passed = (
            r.sharp_post <= r.sharp_pre
            or r.v_pre - r.v_post >= 1
            or (r.fronts_post < r.fronts_pre and r.v_post <= r.v_pre)
        )
        out.append(passed)
    return out


def glimm_is_monotone(solution: Solution) -> bool:
    values = [v for _, v in solution.glimm]
    return all(b <= a for a, b in zip(values, values[1:]))


__all__ = [
    'BoundarySchedule', 'TrackerState', 'FrontTracker', 'init_state', 'next_event',
    'apply_event', 'glimm_V', 'sharp', 'advance', 'prepare', 'data_tv', 'track', 'run',
    'profile_at', 'termination_ledger', 'glimm_is_monotone',
]
