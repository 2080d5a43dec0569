"""Dyadic time splitting: freeze f(t, ·) per slab and chain autonomous runs."""

from dataclasses import dataclass, replace
from typing import Any, Dict, List, Optional, Tuple

from config import Settings, get_settings
from core import DomainError, get_logger
from flux import plc_approximate, sup_du_norm, sup_dtdu_norm
from stepfn import GridStepFunction, StepFunction, range_hull, tv
from tracker import (
    EventRecord, FluxSegment, GridData, Problem, Snapshot, Solution, TrackerState,
    advance, grid_profile_from_snapshot, prepare
)

logger = get_logger(__name__)


@dataclass(frozen=True)
class SlabSchedule:
    """Slabs [T_n^i, T_n^{i+1}] with T_n^i = i·T/2ⁿ; slab i freezes the flux at T_n^i."""

    depth: int
    horizon: float

    def __post_init__(self):
        if self.depth < 0:
            raise DomainError(f"depth must be nonnegative, got {self.depth}")
        if not self.horizon > 0:
            raise DomainError(f"horizon must be positive, got {self.horizon}")

    @property
    def count(self) -> int:
        return 2 ** self.depth

    @property
    def endpoints(self) -> Tuple[float, ...]:
        return tuple(i * self.horizon / self.count for i in range(self.count + 1))

    @property
    def freeze_times(self) -> Tuple[float, ...]:
        return self.endpoints[:-1]

    def slabs(self) -> List[Tuple[int, float, float]]:
        ends = self.endpoints
        return [(i, ends[i], ends[i + 1]) for i in range(self.count)]


@dataclass(frozen=True)
class BoundConstants:
    """Stability constants of the time-dependent problem."""

    L: float
    K: float
    M: float
    O: float
    C: float
    hull: Tuple[float, float]
    horizon: float

    def cauchy_bound(self, depth: int) -> float:
        return self.O * 2.0 ** (-depth)

    def to_dict(self) -> Dict[str, Any]:
        return {'L': self.L, 'K': self.K, 'M': self.M, 'O': self.O, 'C': self.C,
                'hull': list(self.hull), 'T': self.horizon}


def data_hull(problem: Problem, t: Optional[float] = None) -> Tuple[float, float]:
    """𝓤_t: hull of u_o and the boundary data on [0, t]."""
    t = problem.horizon if t is None else t
    windows: List[Any] = [problem.u_o, (problem.u_b, (0.0, t))]
    if problem.domain.is_segment and problem.u_b2 is not None:
        windows.append((problem.u_b2, (0.0, t)))
    return range_hull(windows)


def data_total_variation(problem: Problem, t: Optional[float] = None) -> float:
    """tv(u_o) + tv(u_b; [0, t]) + |u_b(0+) − u_o(0+)|, plus the x = L terms on segments."""
    t = problem.horizon if t is None else t
    total = tv(problem.u_o) + _tv_upto(problem.u_b, t) + abs(problem.u_b.values[0] - problem.u_o.values[0])
    if problem.domain.is_segment and problem.u_b2 is not None:
        total += _tv_upto(problem.u_b2, t) + abs(problem.u_b2.values[0] - problem.u_o.values[-1])
    return total


def _tv_upto(u: StepFunction, t: float) -> float:
    return tv(u, (0.0, t)) if t > 0 else 0.0


def bound_constants(problem: Problem) -> BoundConstants:
    """L = 1 + ‖∂ᵤf‖, K, M = ‖∂ₜ∂ᵤf‖ over [0, T]×𝓤, O = ¼·L·K·M·T² and C = ‖∂ᵤf‖·K."""
    T = problem.horizon
    hull = data_hull(problem)
    du_norm = sup_du_norm(problem.flux, (0.0, T), hull)
    M = sup_dtdu_norm(problem.flux, (0.0, T), hull)
    K = data_total_variation(problem)
    L = 1.0 + du_norm
    return BoundConstants(L=L, K=K, M=M, O=0.25 * L * K * M * T * T, C=du_norm * K, hull=hull, horizon=T)


def shift_grid(datum: GridStepFunction, start: float, length: float) -> GridStepFunction:
    """Boundary datum on [start, start + length] relabelled to [0, length]."""
    end = start + length
    xs = [x - start for x in datum.breakpoints if start < x < end]
    ks = [datum.index_at(start)] + [k for x, k in zip(datum.breakpoints, datum.indices[1:]) if start < x < end]
    return GridStepFunction.make(datum.eps, xs, ks, 0.0, length)


def _jumps_from(datum: Optional[GridStepFunction], start: float, horizon: float) -> int:
    """Σ|jumps| (grid units) of a boundary datum at breakpoints in [start, horizon)."""
    if datum is None:
        return 0
    total = 0
    for i, x in enumerate(datum.breakpoints):
        if start <= x < horizon:
            total += abs(datum.indices[i + 1] - datum.indices[i])
    return total


class DyadicSolver:
    """Solves non-autonomous IBVPs by chaining autonomous front tracking over dyadic slabs."""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()
        self.logger = get_logger(self.__class__.__name__)

    def solve(self, problem: Problem, depth: int) -> Solution:
        """Composite u_n: slab i tracks with f(T_n^i, ·) from the previous slab's final profile."""
        schedule = SlabSchedule(depth, problem.horizon)
        data = prepare(problem)
        domain = problem.domain
        grids = [data.u_o, data.u_b] + ([data.u_b2] if data.u_b2 is not None else [])
        hull_indices = (min(g.index_range[0] for g in grids), max(g.index_range[1] for g in grids))

        segments: List[FluxSegment] = []
        snapshots: List[Snapshot] = []
        events: List[EventRecord] = []
        glimm: List[Tuple[float, int]] = []
        sharp: List[Tuple[float, float]] = []
        slab_glimm: List[Tuple[float, int]] = []

        u_o = data.u_o
        for i, start, end in schedule.slabs():
            length = end - start
            plc = plc_approximate(problem.flux, start, problem.eps, data.hull)
            u_b = shift_grid(data.u_b, start, length)
            u_b2 = shift_grid(data.u_b2, start, length) if data.u_b2 is not None else None
            state = TrackerState(plc, u_o, u_b, domain, length, u_b2=u_b2,
                                 hull_indices=hull_indices, settings=self.settings)
            slab_glimm.append((start, state.glimm_units() + self._offset(data, end, problem.horizon)))
            advance(state)

            offset = self._offset(data, end, problem.horizon)
            segments.append(FluxSegment(start, end, plc))
            snapshots.extend(s.shifted(start) for s in state.snapshots)
            events.extend(replace(r.shifted(start), v_pre=r.v_pre + offset, v_post=r.v_post + offset)
                          for r in state.log)
            glimm.extend((t + start, v + offset) for t, v in state.glimm)
            sharp.extend((t + start, s) for t, s in state.sharp_trace)

            u_o = grid_profile_from_snapshot(state.snapshots[-1], length, domain, problem.eps)
            self.logger.debug(f"Slab {i + 1}/{schedule.count} on [{start}, {end}]: {len(state.log)} events")

        final_v = glimm[-1][1]
        slab_glimm.append((problem.horizon, final_v))
        solution = Solution(
            domain=domain, eps=problem.eps, horizon=problem.horizon, data=data,
            segments=segments, snapshots=snapshots, events=events,
            glimm=glimm, sharp=sharp, problem=problem,
        )
        constants = bound_constants(problem)
        solution.metadata.update({
            'depth': depth,
            'slab_endpoints': list(schedule.endpoints),
            'slab_glimm': [(t, v * problem.eps) for t, v in slab_glimm],
            'L': constants.L, 'K': constants.K, 'M': constants.M, 'O': constants.O,
            'C': constants.C, 'C1': constants.C, 'eps': problem.eps, 'T': problem.horizon,
        })
        self.logger.info(f"Dyadic solve n={depth}: {schedule.count} slabs, {len(events)} events")
        return solution

    @staticmethod
    def _offset(data: GridData, end: float, horizon: float) -> int:
        """Boundary variation after a slab, which slab-local Glimm values leave out."""
        return _jumps_from(data.u_b, end, horizon) + _jumps_from(data.u_b2, end, horizon)


def dyadic_solve(problem: Problem, depth: int, settings: Optional[Settings] = None) -> Solution:
    return DyadicSolver(settings).solve(problem, depth)


def slab_chain_holds(solution: Solution) -> bool:
    """V_n^{i,ε} ≤ V_n^{i−1,ε} along the slab endpoints."""
    values = [v for _, v in solution.metadata.get('slab_glimm', [])]
    slack = 1e-12 * max([1.0] + [abs(v) for v in values])
    return all(b <= a + slack for a, b in zip(values, values[1:]))
