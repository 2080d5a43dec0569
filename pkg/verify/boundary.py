"""Boundary entropy flux 𝓕ᵏ and admissibility of solution traces."""

from dataclasses import dataclass
from typing import Optional, Tuple, Union

from config import Settings, get_settings
from core import get_logger
from flux import PLCFlux, SpaceTimeFlux, eval_flux
from riemann import boundary_violation
from stepfn import GridStepFunction
from tracker import Solution

logger = get_logger(__name__)

FluxLike = Union[SpaceTimeFlux, PLCFlux]


def _value(f: FluxLike, t: float, u: float) -> float:
    if isinstance(f, PLCFlux):
        return f.evaluate(u)
    return eval_flux(f, t, u)


def boundary_distance(u: float, w: float, k: float) -> float:
    """Δᵏ(u, w): distance from u to the interval between w and k."""
    lo, hi = min(w, k), max(w, k)
    if u < lo:
        return lo - u
    if u > hi:
        return u - hi
    return 0.0


def boundary_flux_F(f: FluxLike, t: float, u: float, w: float, k: float, side: str = 'left') -> float:
    """The six-case boundary entropy flux 𝓕ᵏ(t, u, w) at trace u and datum w.

    At x = L the same cases are read with the flux reflected to −f.
    """
    sign = 1.0 if side == 'left' else -1.0

    def g(v: float) -> float:
        return sign * _value(f, t, v)

    if u <= w <= k:
        return g(w) - g(u)
    if w <= u <= k:
        return 0.0
    if w <= k <= u:
        return g(u) - g(k)
    if u <= k <= w:
        return g(k) - g(u)
    if k <= u <= w:
        return 0.0
    # k <= w <= u
    return g(u) - g(w)


@dataclass(frozen=True)
class AdmissibilityReport:
    side: str
    max_flux: float
    max_discrete: float
    worst_time: Optional[float]
    worst_k: Optional[int]
    checked: int

    @property
    def max_violation(self) -> float:
        return max(self.max_flux, self.max_discrete, 0.0)

    def passed(self, tolerance: float) -> bool:
        return self.max_violation <= tolerance

    def to_dict(self) -> dict:
        return {
            'side': self.side, 'max_flux': self.max_flux, 'max_discrete': self.max_discrete,
            'worst_time': self.worst_time, 'worst_k': self.worst_k, 'checked': self.checked,
        }


def _trace_and_datum(solution: Solution, i: int, side: str, datum: GridStepFunction) -> Tuple[int, int]:
    snapshot = solution.snapshots[i]
    if side == 'left':
        trace = snapshot.trace
    else:
        trace = snapshot.fronts[-1].right if snapshot.fronts else snapshot.trace
    return trace, datum.index_at(snapshot.time)


def boundary_admissibility(solution: Solution, side: str = 'left',
                           boundary: Optional[GridStepFunction] = None,
                           settings: Optional[Settings] = None) -> AdmissibilityReport:
    """max 𝓕ᵏ(t, trace, datum) over event intervals and grid k between trace and datum.

    Also re-checks the discrete chord inequality at the trace with the PLC flux.
    """
    settings = settings or get_settings()
    if side not in ('left', 'right'):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    if boundary is not None:
        datum = boundary
    else:
        datum = solution.data.u_b if side == 'left' else solution.data.u_b2
    if datum is None:
        return AdmissibilityReport(side, 0.0, 0.0, None, None, 0)

    eps = solution.eps
    worst, worst_discrete = 0.0, 0.0
    worst_time, worst_k, checked = None, None, 0
    for i, snapshot in enumerate(solution.snapshots):
        if snapshot.time >= solution.horizon and i > 0:
            continue
        trace, k_datum = _trace_and_datum(solution, i, side, datum)
        if trace == k_datum:
            continue
        flux = solution.flux_at(snapshot.time)
        lo, hi = min(trace, k_datum), max(trace, k_datum)
        for k in range(lo, hi + 1):
            value = boundary_flux_F(flux, snapshot.time, trace * eps, k_datum * eps, k * eps, side)
            checked += 1
            if worst_time is None or value > worst:
                worst, worst_time, worst_k = value, snapshot.time, k
        worst_discrete = max(worst_discrete, boundary_violation(flux, k_datum, trace, side))

    if worst_discrete > settings.admissibility_tolerance or worst > settings.admissibility_tolerance:
        logger.warning(f"Boundary {side}: max F^k {worst:.3e}, discrete violation {worst_discrete:.3e}")
    return AdmissibilityReport(side, worst, worst_discrete, worst_time, worst_k, checked)
