"""Piecewise-linear continuous ε-approximations of polynomial fluxes."""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from core import DomainError, GridError, RangeError
from .polynomial import SpaceTimeFlux, eval_flux


@dataclass(frozen=True, eq=False)
class PLCFlux:
    """Interpolant of u ↦ f(t_frozen, u) on the grid εℤ, tabulated on [k_min, k_max].

    States are integer grid indices; nodes[i] is f at (k_min + i)·ε and
    slopes[i] the slope on the cell [(k_min + i)ε, (k_min + i + 1)ε].
    """

    source: SpaceTimeFlux
    t_frozen: float
    eps: float
    k_min: int
    k_max: int
    nodes: np.ndarray
    slopes: np.ndarray

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.slopes.setflags(write=False)

    def contains(self, k: int) -> bool:
        return self.k_min <= k <= self.k_max

    def node(self, k: int) -> float:
        """Exact flux value at the grid state k·ε."""
        if not self.contains(k):
            raise RangeError(f"state index {k} outside PLC range [{self.k_min}, {self.k_max}]")
        return float(self.nodes[k - self.k_min])

    def slope(self, k: int) -> float:
        """Slope on the cell [kε, (k+1)ε]."""
        if not (self.k_min <= k < self.k_max):
            raise RangeError(f"cell {k} outside PLC range [{self.k_min}, {self.k_max})")
        return float(self.slopes[k - self.k_min])

    def _node_anywhere(self, k: int) -> float:
        if self.contains(k):
            return float(self.nodes[k - self.k_min])
        return eval_flux(self.source, self.t_frozen, k * self.eps)

    def evaluate(self, u: float) -> float:
        """Value of the interpolant at any real state u."""
        r = u / self.eps
        k = math.floor(r)
        if abs(r - round(r)) < 1e-12 * max(1.0, abs(r)):
            return self._node_anywhere(int(round(r)))
        left = self._node_anywhere(k)
        right = self._node_anywhere(k + 1)
        theta = r - k
        return left + theta * (right - left)

    def chord_speed(self, left: int, right: int) -> float:
        """Rankine–Hugoniot speed of a jump between two grid states."""
        if left == right:
            raise GridError("chord speed of a zero-strength jump")
        return (self.node(right) - self.node(left)) / ((right - left) * self.eps)

    def max_abs_slope(self, lo: int = None, hi: int = None) -> float:
        """‖Df^ε‖ over the cells between grid states lo and hi."""
        lo = self.k_min if lo is None else lo
        hi = self.k_max if hi is None else hi
        if hi <= lo:
            return 0.0
        segment = self.slopes[lo - self.k_min:hi - self.k_min]
        return float(np.max(np.abs(segment))) if segment.size else 0.0

    @property
    def state_range(self) -> Tuple[float, float]:
        return self.k_min * self.eps, self.k_max * self.eps


def grid_bounds(hull: Tuple[float, float], eps: float) -> Tuple[int, int]:
    """Integer index range covering a state interval (floor / ceil of the endpoints)."""
    lo = hull[0] / eps
    hi = hull[1] / eps
    k_lo = round(lo) if abs(lo - round(lo)) < 1e-9 else math.floor(lo)
    k_hi = round(hi) if abs(hi - round(hi)) < 1e-9 else math.ceil(hi)
    return int(k_lo), int(k_hi)


def plc_approximate(f: SpaceTimeFlux, t_frozen: float, eps: float, hull: Tuple[float, float]) -> PLCFlux:
    """PLC interpolant f^ε of f(t_frozen, ·) on εℤ covering the hull."""
    if not (eps > 0 and math.isfinite(eps)):
        raise GridError(f"grid spacing must be positive, got {eps}")
    a, b = float(hull[0]), float(hull[1])
    if not (math.isfinite(a) and math.isfinite(b)) or a > b:
        raise DomainError(f"empty state hull [{a}, {b}]")
    k_min, k_max = grid_bounds((a, b), eps)
    ks = np.arange(k_min, k_max + 1)
    coeffs = f.frozen(t_frozen)
    nodes = np.polynomial.polynomial.polyval(ks * eps, coeffs)
    nodes = np.atleast_1d(np.asarray(nodes, dtype=float))
    slopes = np.diff(nodes) / eps
    return PLCFlux(source=f, t_frozen=float(t_frozen), eps=float(eps), k_min=k_min, k_max=k_max,
                   nodes=nodes, slopes=slopes)
