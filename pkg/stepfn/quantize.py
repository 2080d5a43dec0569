"""Grid-valued step functions and the hysteretic bracket-clamp quantizer."""

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Optional, Tuple

from core import GridError, get_logger
from .step import StepFunction

logger = get_logger(__name__)

# Tolerance (in grid units) under which a value counts as already on εℤ.
_ON_GRID = 1e-9


@dataclass(frozen=True)
class GridStepFunction:
    """Step function whose values are indices[i]·eps exactly."""

    eps: float
    start: float
    end: float
    breakpoints: Tuple[float, ...]
    indices: Tuple[int, ...]

    def __post_init__(self):
        if not self.eps > 0:
            raise GridError(f"grid spacing must be positive, got {self.eps}")
        if len(self.indices) != len(self.breakpoints) + 1:
            raise ValueError("need exactly one more index than breakpoints")
        for a, b in zip(self.indices, self.indices[1:]):
            if a == b:
                raise ValueError("adjacent grid values must differ")

    @classmethod
    def make(cls, eps: float, breakpoints, indices, start: float = 0.0, end: float = math.inf) -> 'GridStepFunction':
        """Normalizing constructor that merges equal adjacent indices."""
        xs, ks = [], [int(indices[0])]
        for x, k in zip(breakpoints, list(indices)[1:]):
            if int(k) == ks[-1]:
                continue
            xs.append(float(x))
            ks.append(int(k))
        return cls(float(eps), float(start), float(end), tuple(xs), tuple(ks))

    @classmethod
    def from_step(cls, u: StepFunction, eps: float) -> 'GridStepFunction':
        """Exact conversion of data already on εℤ; raises GridError otherwise."""
        ks = [_exact_index(v, eps) for v in u.values]
        return cls.make(eps, u.breakpoints, ks, u.start, u.end)

    def to_step(self) -> StepFunction:
        return StepFunction(self.start, self.end, self.breakpoints, tuple(k * self.eps for k in self.indices))

    def index_at(self, x: float) -> int:
        return self.indices[bisect_right(self.breakpoints, x)]

    @property
    def index_range(self) -> Tuple[int, int]:
        return min(self.indices), max(self.indices)


def _exact_index(value: float, eps: float) -> int:
    r = value / eps
    k = round(r)
    if abs(r - k) > _ON_GRID * max(1.0, abs(r)):
        raise GridError(f"value {value} is not a multiple of eps={eps}")
    return int(k)


def _floor_ceil(value: float, eps: float) -> Tuple[int, int]:
    r = value / eps
    k = round(r)
    if abs(r - k) <= _ON_GRID * max(1.0, abs(r)):
        return int(k), int(k)
    return math.floor(r), math.ceil(r)


def _nearest_toward_zero(value: float, eps: float) -> int:
    lo, hi = _floor_ceil(value, eps)
    if lo == hi:
        return lo
    r = value / eps
    d_lo, d_hi = r - lo, hi - r
    if d_lo < d_hi:
        return lo
    if d_hi < d_lo:
        return hi
    return lo if abs(lo) < abs(hi) else hi


def clamp_index(k: int, lo: int, hi: int) -> int:
    return max(lo, min(hi, k))


def quantize(u: StepFunction, eps: float, clamp: Optional[float] = None,
             seed_index: Optional[int] = None) -> GridStepFunction:
    """Hysteretic bracket-clamp quantization onto εℤ.

    w₀ is the grid value nearest v₀ (ties toward 0) unless a seed index is
    given, in which case the seed is clamped into v₀'s bracket; every later
    value clamps its predecessor into [ε⌊vᵢ/ε⌋, ε⌈vᵢ/ε⌉]. All values are then
    clamped into ±ε⌊clamp/ε⌋, clamp defaulting to ‖u‖∞.
    """
    if not (eps > 0 and math.isfinite(eps)):
        raise GridError(f"grid spacing must be positive, got {eps}")
    norm = max(abs(v) for v in u.values)
    bound = norm if clamp is None else float(clamp)
    k_bound = _floor_ceil(bound, eps)[0]

    ks = []
    for i, v in enumerate(u.values):
        lo, hi = _floor_ceil(v, eps)
        if i == 0:
            k = _nearest_toward_zero(v, eps) if seed_index is None else clamp_index(seed_index, lo, hi)
        else:
            k = clamp_index(ks[-1], lo, hi)
        ks.append(k)
    ks = [clamp_index(k, -k_bound, k_bound) for k in ks]
    return GridStepFunction.make(eps, u.breakpoints, ks, u.start, u.end)


def quantize_boundary(u_b: StepFunction, eps: float, interior_index: int,
                      interior_value: float) -> Tuple[GridStepFunction, float]:
    """Quantize boundary data seeded by the quantized interior trace.

    Returns the grid boundary datum and the boundary jump |u_b^ε(0+) − u^ε(0+)|
    actually used in bounds. Enforces |u_b^ε(0+) − u_o^ε(0+)| ≤ |u_b(0+) − u_o(0+)|
    by snapping the first value toward the interior trace when needed.
    """
    grid = quantize(u_b, eps, seed_index=interior_index)
    target = abs(u_b.values[0] - interior_value)
    first = grid.indices[0]
    if abs(first - interior_index) * eps > target + 1e-12 * max(1.0, target):
        lo, hi = _floor_ceil(u_b.values[0], eps)
        snapped = clamp_index(interior_index, lo, hi)
        logger.debug(f"Snapped boundary datum from index {first} to {snapped} to keep the initial jump bounded")
        grid = GridStepFunction.make(eps, grid.breakpoints, (snapped,) + grid.indices[1:], grid.start, grid.end)
    jump = abs(grid.indices[0] - interior_index) * eps
    return grid, jump
