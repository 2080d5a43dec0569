"""Consistency of stored profiles and fronts with front transport, and solution tampering."""

from dataclasses import replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from core import FrontTrackingError
from flux import PLCFlux
from riemann import oleinik_violation
from stepfn import StepFunction, l1_distance
from tracker import Snapshot, Solution, profile_from_snapshot

Profiles = List[Tuple[float, StepFunction]]


def profile_discrepancy(solution: Solution, profiles: Sequence[Tuple[float, StepFunction]]) -> float:
    """Largest L¹ distance between stored profiles and the profiles the fronts transport to.

    Infinite when a stored profile has a different domain or tail.
    """
    worst = 0.0
    for t, stored in profiles:
        rebuilt = solution.profile_at(t)
        try:
            worst = max(worst, l1_distance(stored, rebuilt))
        except FrontTrackingError:
            return float('inf')
    return worst


def front_checks(solution: Solution) -> Dict[str, float]:
    """Worst Rankine-Hugoniot defect, Oleinik violation and state mismatch over every stored front.

    A snapshot on a slab endpoint is checked against both adjacent frozen fluxes.
    `states` counts, in grid units, how far the trace and the right states of
    the fronts are from the left states of the fronts that follow them.
    """
    worst_rh = 0.0
    worst_oleinik = 0.0
    worst_states = 0
    for snapshot in solution.snapshots:
        lefts = [snapshot.trace] + [f.right for f in snapshot.fronts[:-1]]
        worst_states = max([worst_states] + [abs(k - f.left) for k, f in zip(lefts, snapshot.fronts)])
        fluxes = [s.flux for s in solution.segments if s.t_start <= snapshot.time <= s.t_end]
        for front in snapshot.fronts:
            try:
                rh, oleinik = min(_front_defects(flux, front.left, front.right, front.speed) for flux in fluxes)
            except FrontTrackingError:
                rh = oleinik = float('inf')
            worst_rh = max(worst_rh, rh)
            worst_oleinik = max(worst_oleinik, oleinik)
    return {'rankine_hugoniot': worst_rh, 'oleinik': worst_oleinik, 'states': float(worst_states)}


def _front_defects(flux: PLCFlux, left: int, right: int, speed: float) -> Tuple[float, float]:
    chord = flux.chord_speed(left, right)
    return abs(speed - chord) / max(1.0, abs(chord)), oleinik_violation(flux, left, right, speed)


def time_continuity(solution: Solution) -> float:
    """Largest L¹ jump of u(t, ·) across a snapshot time.

    Fronts only interact at isolated points, so the profile before and after
    an event agree; the first snapshot is compared with the quantized u_o.
    Infinite when the tails differ.
    """
    worst = 0.0
    previous = None
    for snapshot in solution.snapshots:
        t = snapshot.time
        before = (solution.data.u_o.to_step() if previous is None
                  else profile_from_snapshot(previous, t, solution.domain, solution.eps))
        after = profile_from_snapshot(snapshot, t, solution.domain, solution.eps)
        try:
            worst = max(worst, l1_distance(before, after))
        except FrontTrackingError:
            return float('inf')
        previous = snapshot
    return worst


def _shifted_state(flux: PLCFlux, k: int, step: int, avoid: Optional[int] = None) -> int:
    options = [c for c in (k + step, k - step) if c != avoid]
    for c in options:
        if flux.contains(c):
            return c
    return options[0]


def mutate_solution(solution: Solution, rng: np.random.Generator) -> Tuple[Solution, Tuple[float, float]]:
    """Copy of the solution with one stored snapshot tampered.

    Either a front speed is changed by half its size (at least 0.5), or the
    trace or the right state of a front is moved by ±ε. Returns the copy and
    the (t, x) where the tampering starts.
    """
    snapshots = list(solution.snapshots)
    i = int(rng.integers(len(snapshots)))
    snapshot = snapshots[i]
    t = snapshot.time
    fronts = list(snapshot.fronts)
    flux = solution.flux_at(t)
    step = 1 if rng.random() < 0.5 else -1

    if fronts and rng.random() < 0.5:
        j = int(rng.integers(len(fronts)))
        front = fronts[j]
        fronts[j] = replace(front, speed=front.speed + step * 0.5 * max(1.0, abs(front.speed)))
        tampered = Snapshot(t, tuple(fronts), snapshot.trace)
        x = front.position(t)
    else:
        j = int(rng.integers(len(fronts) + 1))
        if j == 0:
            tampered = Snapshot(t, snapshot.fronts, _shifted_state(flux, snapshot.trace, step))
            x = 0.0
        else:
            front = fronts[j - 1]
            fronts[j - 1] = replace(front, right=_shifted_state(flux, front.right, step, front.left))
            tampered = Snapshot(t, tuple(fronts), snapshot.trace)
            x = front.position(t)

    snapshots[i] = tampered
    return replace(solution, snapshots=snapshots), (t, x)
