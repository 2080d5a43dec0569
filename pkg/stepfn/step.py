"""Piecewise-constant functions of one variable and their algebra."""

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from core import DivergentTailError, DomainError, interval_hull

Interval = Tuple[float, float]


@dataclass(frozen=True)
class StepFunction:
    """Right-continuous step function on [start, end], end possibly +inf.

    values[i] holds on [breakpoints[i-1], breakpoints[i]), with the
    conventions breakpoints[-1] = start and breakpoints[N] = end.
    """

    start: float
    end: float
    breakpoints: Tuple[float, ...]
    values: Tuple[float, ...]

    def __post_init__(self):
        if not self.start < self.end:
            raise DomainError(f"empty domain [{self.start}, {self.end}]")
        if len(self.values) != len(self.breakpoints) + 1:
            raise ValueError("need exactly one more value than breakpoints")
        previous = self.start
        for x in self.breakpoints:
            if not previous < x < self.end:
                raise ValueError(f"breakpoints must increase strictly inside the domain: {self.breakpoints}")
            previous = x
        if not all(math.isfinite(v) for v in self.values):
            raise ValueError("values must be finite")

    # -- construction ------------------------------------------------------

    @classmethod
    def make(cls, breakpoints: Iterable[float], values: Iterable[float],
             start: float = 0.0, end: float = math.inf) -> 'StepFunction':
        """Normalizing constructor: drops breakpoints outside the domain,
        keeps the last value at repeated breakpoints, merges equal pieces."""
        xs = [float(x) for x in breakpoints]
        vs = [float(v) for v in values]
        if len(vs) != len(xs) + 1:
            raise ValueError("need exactly one more value than breakpoints")
        out_x: List[float] = []
        out_v: List[float] = [vs[0]]
        for x, v in zip(xs, vs[1:]):
            if x <= start:
                out_v[0] = v
                continue
            if x >= end:
                break
            if out_x and x <= out_x[-1]:
                if x < out_x[-1]:
                    raise ValueError(f"breakpoints not sorted: {xs}")
                out_v[-1] = v
                continue
            out_x.append(x)
            out_v.append(v)
        merged_x: List[float] = []
        merged_v: List[float] = [out_v[0]]
        for x, v in zip(out_x, out_v[1:]):
            if v == merged_v[-1]:
                continue
            merged_x.append(x)
            merged_v.append(v)
        return cls(float(start), float(end), tuple(merged_x), tuple(merged_v))

    @classmethod
    def constant(cls, value: float, start: float = 0.0, end: float = math.inf) -> 'StepFunction':
        return cls(float(start), float(end), (), (float(value),))

    # -- queries -----------------------------------------------------------

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.end)

    def __call__(self, x: float) -> float:
        return self.values[bisect_right(self.breakpoints, x)]

    def pieces(self) -> List[Tuple[float, float, float]]:
        """(left, right, value) for every piece."""
        edges = (self.start,) + self.breakpoints + (self.end,)
        return [(edges[i], edges[i + 1], self.values[i]) for i in range(len(self.values))]

    def jumps(self) -> List[Tuple[float, float]]:
        """(position, signed jump) at every breakpoint."""
        return [(x, self.values[i + 1] - self.values[i]) for i, x in enumerate(self.breakpoints)]

    def values_in(self, window: Interval) -> List[float]:
        """Values of the pieces meeting the window; a point window gives the right limit."""
        a, b = _check_window(self, window)
        if a == b:
            return [self(a)]
        lo = bisect_right(self.breakpoints, a)
        hi = bisect_left(self.breakpoints, b)
        return list(self.values[lo:hi + 1])


def _check_window(u: StepFunction, window: Optional[Interval]) -> Interval:
    if window is None:
        return u.start, u.end
    a, b = float(window[0]), float(window[1])
    if a > b:
        raise DomainError(f"empty window [{a}, {b}]")
    if a < u.start or b > u.end:
        raise DomainError(f"window [{a}, {b}] outside domain [{u.start}, {u.end}]")
    return a, b


def tv(u: StepFunction, window: Optional[Interval] = None) -> float:
    """Total variation: sum of |jumps| at breakpoints strictly inside the window."""
    a, b = _check_window(u, window)
    total = 0.0
    for x, jump in u.jumps():
        if a < x < b:
            total += abs(jump)
    return total


def sup_norm(u: StepFunction, window: Optional[Interval] = None) -> float:
    return max(abs(v) for v in u.values_in(_check_window(u, window)))


def l1_norm(u: StepFunction) -> float:
    return l1_distance(u, StepFunction.constant(0.0, u.start, u.end))


def l1_distance(u: StepFunction, v: StepFunction) -> float:
    """Exact ∫|u - v| by a merged-breakpoint sweep."""
    if u.start != v.start or u.end != v.end:
        raise DomainError(f"domains differ: [{u.start}, {u.end}] vs [{v.start}, {v.end}]")
    if not u.bounded and u.values[-1] != v.values[-1]:
        raise DivergentTailError(f"tails differ on unbounded domain: {u.values[-1]} vs {v.values[-1]}")
    edges = sorted(set(u.breakpoints) | set(v.breakpoints))
    left = u.start
    total = 0.0
    for x in edges:
        total += abs(u(left) - v(left)) * (x - left)
        left = x
    if u.bounded:
        total += abs(u(left) - v(left)) * (u.end - left)
    return total


Windowed = Union[StepFunction, Tuple[StepFunction, Interval]]


def range_hull(fns: Sequence[Windowed]) -> Interval:
    """Closed convex hull of all values taken in the given windows."""
    if not fns:
        raise DomainError("range hull of an empty list")
    values: List[float] = []
    for item in fns:
        if isinstance(item, StepFunction):
            values.extend(item.values)
        else:
            fn, window = item
            values.extend(fn.values_in(window))
    return interval_hull(values)


def translate(u: StepFunction, shift: float) -> StepFunction:
    """(𝒯_t u)(τ) = u(t + τ), keeping the left end of the domain."""
    if shift < 0:
        raise DomainError(f"translation shift must be nonnegative, got {shift}")
    if shift == 0:
        return u
    origin = u.start + shift
    if origin >= u.end:
        raise DomainError(f"shift {shift} moves past the end of the domain")
    kept = [(x - shift, v) for x, v in zip(u.breakpoints, u.values[1:]) if x > origin]
    return StepFunction.make([x for x, _ in kept], [u(origin)] + [v for _, v in kept],
                             start=u.start, end=u.end - shift)


def restrict(u: StepFunction, window: Interval) -> StepFunction:
    """u restricted to a subwindow of its domain."""
    a, b = _check_window(u, window)
    if a == b:
        raise DomainError(f"cannot restrict to the point window [{a}, {b}]")
    inside = [(x, v) for x, v in zip(u.breakpoints, u.values[1:]) if a < x < b]
    return StepFunction.make([x for x, _ in inside], [u(a)] + [v for _, v in inside], start=a, end=b)


def trace(u: StepFunction, point: float, side: str) -> float:
    """One-sided limit at a point of the closed domain."""
    if side not in ('left', 'right'):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    if point < u.start or point > u.end:
        raise DomainError(f"point {point} outside [{u.start}, {u.end}]")
    if side == 'right':
        if point == u.end:
            raise DomainError("no right trace at the right end of the domain")
        return u(point)
    if point == u.start:
        raise DomainError("no left trace at the left end of the domain")
    return u.values[bisect_left(u.breakpoints, point)]
