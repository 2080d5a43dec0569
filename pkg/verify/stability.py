"""Contraction, flux stability and time-Lipschitz checks on pairs of runs."""

from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

from config import Settings, get_settings
from core import get_logger
from flux import SpaceTimeFlux, sup_du_norm
from nonaut import DyadicSolver
from stepfn import GridStepFunction, l1_distance, restrict
from tracker import FrontTracker, GridData, Problem, Solution

logger = get_logger(__name__)


@dataclass(frozen=True)
class StabilityRow:
    t: float
    measured: float
    bound: float
    passed: bool

    @property
    def margin(self) -> float:
        return self.bound - self.measured

    def as_row(self) -> List[float]:
        return [self.t, self.measured, self.bound, int(self.passed)]


def within(measured: float, bound: float, slack: Optional[float] = None) -> bool:
    """measured ≤ bound up to the relative slack."""
    slack = get_settings().bound_slack if slack is None else slack
    return measured <= bound + slack * max(1.0, abs(bound))


def solve(problem: Problem, depth: Optional[int] = None, settings: Optional[Settings] = None) -> Solution:
    """Autonomous tracker for t-independent fluxes without a depth, dyadic splitting otherwise."""
    if depth is None and problem.flux.is_autonomous:
        return FrontTracker(settings).run(problem)
    return DyadicSolver(settings).solve(problem, depth or 0)


def grid_hull(data: Sequence[GridData]) -> Tuple[float, float]:
    """State interval covering every grid value of the given data."""
    ks = []
    for d in data:
        for g in (d.u_o, d.u_b, d.u_b2):
            if g is not None:
                ks.extend(g.index_range)
    eps = data[0].eps
    return min(ks) * eps, max(ks) * eps


def _boundary_l1(a: Optional[GridStepFunction], b: Optional[GridStepFunction], t: float) -> float:
    if a is None or b is None or t <= 0:
        return 0.0
    return l1_distance(restrict(a.to_step(), (0.0, t)), restrict(b.to_step(), (0.0, t)))


def _jumps_upto(datum: Optional[GridStepFunction], t: float) -> float:
    """Variation of a grid boundary datum over jumps at times in (0, t]."""
    if datum is None:
        return 0.0
    total = sum(abs(datum.indices[i + 1] - datum.indices[i])
                for i, x in enumerate(datum.breakpoints) if x <= t)
    return total * datum.eps


def data_variation(data: GridData, t: float) -> float:
    """tv(u_o^ε) + tv(u_b^ε; [0, t]) + |u_b^ε(0+) − u_o^ε(0+)| (+ the x = L terms)."""
    ks = data.u_o.indices
    total = sum(abs(b - a) for a, b in zip(ks, ks[1:])) * data.eps
    total += _jumps_upto(data.u_b, t) + data.jump_left
    if data.u_b2 is not None:
        total += _jumps_upto(data.u_b2, t) + data.jump_right
    return total


def contraction_check(problem: Problem, other: Problem, times: Sequence[float],
                      depth: Optional[int] = None, settings: Optional[Settings] = None) -> List[StabilityRow]:
    """‖u(t) − w(t)‖₁ ≤ ‖u_o − w_o‖₁ + ‖∂ᵤf‖·‖u_b − w_b‖_{L¹(0,t)} (+ the x = L term)."""
    u = solve(problem, depth, settings)
    w = solve(replace(other, flux=problem.flux, eps=problem.eps, horizon=problem.horizon), depth, settings)
    hull = grid_hull([u.data, w.data])
    lipschitz = max(sup_du_norm(problem.flux, (0.0, problem.horizon), hull), u.max_speed(), w.max_speed())
    initial = l1_distance(u.data.u_o.to_step(), w.data.u_o.to_step())

    rows = []
    for t in times:
        measured = l1_distance(u.profile_at(t), w.profile_at(t))
        boundary = _boundary_l1(u.data.u_b, w.data.u_b, t) + _boundary_l1(u.data.u_b2, w.data.u_b2, t)
        bound = initial + lipschitz * boundary
        rows.append(StabilityRow(t, measured, bound, within(measured, bound)))
    _log_failures('contraction', rows)
    return rows


def flux_stability_check(f: SpaceTimeFlux, g: SpaceTimeFlux, problem: Problem, times: Sequence[float],
                         depth: Optional[int] = None, settings: Optional[Settings] = None) -> List[StabilityRow]:
    """‖u(t) − v(t)‖₁ ≤ max{1, ‖∂ᵤg‖}·‖∂ᵤ(f − g)‖·(tv terms up to t)·t for fluxes f and g.

    With a depth both runs use dyadic splitting at that depth.
    """
    u = solve(replace(problem, flux=f), depth, settings)
    v = solve(replace(problem, flux=g), depth, settings)
    hull = grid_hull([u.data])
    diff = f - g

    rows = []
    for t in times:
        measured = l1_distance(u.profile_at(t), v.profile_at(t))
        if t > 0:
            lip_g = max(1.0, sup_du_norm(g, (0.0, t), hull))
            bound = lip_g * sup_du_norm(diff, (0.0, t), hull) * data_variation(u.data, t) * t
        else:
            bound = 0.0
        rows.append(StabilityRow(t, measured, bound, within(measured, bound)))
    _log_failures('flux stability', rows)
    return rows


def lipschitz_check(solution: Solution, times: Sequence[float]) -> List[Tuple[float, float, float, float, bool]]:
    """‖u(t₁) − u(t₂)‖₁ ≤ C(t₂)·(t₂ − t₁) on every pair of the time grid.

    C(t₂) = ‖Df^ε‖ over the flux segments up to t₂ times the data variation up to t₂.
    """
    times = sorted(times)
    profiles = [solution.profile_at(t) for t in times]
    rows = []
    for j in range(len(times)):
        t2 = times[j]
        constant = solution.max_speed(t2) * data_variation(solution.data, t2)
        for i in range(j):
            t1 = times[i]
            measured = l1_distance(profiles[i], profiles[j])
            bound = constant * (t2 - t1)
            rows.append((t1, t2, measured, bound, within(measured, bound)))
    return rows


def _log_failures(name: str, rows: List[StabilityRow]) -> None:
    failures = [r for r in rows if not r.passed]
    if failures:
        worst = min(failures, key=lambda r: r.margin)
        logger.warning(f"{name}: {len(failures)} violations, worst at t={worst.t} "
                       f"({worst.measured:.6g} > {worst.bound:.6g})")
