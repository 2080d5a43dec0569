"""Exact Riemann and boundary-Riemann solvers for PLC fluxes."""

from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Tuple

from core import RangeError
from flux import PLCFlux


class Wave(NamedTuple):
    """A jump between two grid states moving at its Rankine–Hugoniot speed."""
    left: int
    right: int
    speed: float


@dataclass(frozen=True)
class WaveFan:
    """Waves ordered by strictly increasing speed; states chain left to right."""

    waves: Tuple[Wave, ...] = ()

    def __len__(self) -> int:
        return len(self.waves)

    def __iter__(self):
        return iter(self.waves)

    def __bool__(self) -> bool:
        return bool(self.waves)

    @property
    def strength(self) -> int:
        """Σ|r − l| in grid units."""
        return sum(abs(w.right - w.left) for w in self.waves)

    def as_records(self) -> List[List[float]]:
        return [[w.left, w.right, w.speed] for w in self.waves]


def _cross(flux: PLCFlux, a: int, b: int, c: int) -> float:
    """z-component of (b − a) × (c − a) on the node polygon, x in grid units."""
    fa, fb, fc = flux.node(a), flux.node(b), flux.node(c)
    return (b - a) * (fc - fa) - (fb - fa) * (c - a)


def _lower_envelope(flux: PLCFlux, lo: int, hi: int) -> List[int]:
    """Vertices of the lower convex envelope of the nodes lo..hi (collinear ones dropped)."""
    hull: List[int] = []
    for k in range(lo, hi + 1):
        while len(hull) >= 2 and _cross(flux, hull[-2], hull[-1], k) <= 0:
            hull.pop()
        hull.append(k)
    return hull


def _upper_envelope(flux: PLCFlux, lo: int, hi: int) -> List[int]:
    """Vertices of the upper concave envelope of the nodes lo..hi."""
    hull: List[int] = []
    for k in range(lo, hi + 1):
        while len(hull) >= 2 and _cross(flux, hull[-2], hull[-1], k) >= 0:
            hull.pop()
        hull.append(k)
    return hull


def _check_states(flux: PLCFlux, *states: int) -> None:
    for k in states:
        if not flux.contains(k):
            raise RangeError(f"state index {k} outside PLC range [{flux.k_min}, {flux.k_max}]")


def solve_riemann(flux: PLCFlux, left: int, right: int) -> WaveFan:
    """Entropy fan between two grid states.

    left < right reads the waves off the lower convex envelope on [left, right],
    left > right off the upper concave envelope on [right, left].
    """
    _check_states(flux, left, right)
    if left == right:
        return WaveFan()
    if left < right:
        vertices = _lower_envelope(flux, left, right)
    else:
        vertices = list(reversed(_upper_envelope(flux, right, left)))
    waves = tuple(
        Wave(a, b, flux.chord_speed(a, b))
        for a, b in zip(vertices, vertices[1:])
    )
    return WaveFan(waves)


def solve_boundary_left(flux: PLCFlux, datum: int, trace: int) -> WaveFan:
    """Waves entering the domain at x = 0: the Riemann fan (datum, trace) with speeds > 0."""
    fan = solve_riemann(flux, datum, trace)
    return WaveFan(tuple(w for w in fan if w.speed > 0))


def solve_boundary_right(flux: PLCFlux, trace: int, datum: int) -> WaveFan:
    """Waves entering the domain at x = L: the Riemann fan (trace, datum) with speeds < 0."""
    fan = solve_riemann(flux, trace, datum)
    return WaveFan(tuple(w for w in fan if w.speed < 0))


def left_trace_after(fan: WaveFan, trace: int) -> int:
    """Trace u(t, 0+) once the entering waves of a left boundary fan have left."""
    return fan.waves[0].left if fan else trace


def right_trace_after(fan: WaveFan, trace: int) -> int:
    """Trace u(t, L−) once the entering waves of a right boundary fan have left."""
    return fan.waves[-1].right if fan else trace


def oleinik_violation(flux: PLCFlux, left: int, right: int, speed: Optional[float] = None) -> float:
    """Largest violation of the chord inequalities of an admissible jump (0 when admissible).

    Checks λ = RH speed and (f(r) − f(k))/(r − k) ≤ λ ≤ (f(k) − f(l))/(k − l)
    for every grid k strictly between the states.
    """
    lam = flux.chord_speed(left, right)
    worst = 0.0 if speed is None else abs(speed - lam)
    lo, hi = min(left, right), max(left, right)
    f_left, f_right = flux.node(left), flux.node(right)
    eps = flux.eps
    for k in range(lo + 1, hi):
        fk = flux.node(k)
        from_right = (f_right - fk) / ((right - k) * eps)
        to_left = (fk - f_left) / ((k - left) * eps)
        worst = max(worst, from_right - lam, lam - to_left)
    return worst


def boundary_violation(flux: PLCFlux, datum: int, trace: int, side: str = 'left') -> float:
    """Largest violation of the discrete boundary inequality at a trace (0 when admissible).

    Left: (f(trace) − f(k))/(trace − k) ≤ 0; right: (f(k) − f(trace))/(k − trace) ≥ 0,
    for every grid k in the interval between datum and trace, k ≠ trace.
    """
    if datum == trace:
        return 0.0
    lo, hi = min(datum, trace), max(datum, trace)
    f_trace = flux.node(trace)
    worst = 0.0
    for k in range(lo, hi + 1):
        if k == trace:
            continue
        slope = (f_trace - flux.node(k)) / ((trace - k) * flux.eps)
        worst = max(worst, slope if side == 'left' else -slope)
    return worst
