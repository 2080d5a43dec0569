"""Convergence studies: Cauchy rate in the dyadic depth and ε-refinement."""

import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence

import numpy as np

from config import Settings, get_settings
from core import DomainError, FrontTrackingError, get_logger
from stepfn import l1_distance
from tracker import Problem, Solution
from .dyadic import DyadicSolver, SlabSchedule, bound_constants

logger = get_logger(__name__)


@dataclass(frozen=True)
class CauchyRow:
    depth: int
    sup_distance: float
    bound: float
    ratio: float

    @property
    def passed(self) -> bool:
        return self.sup_distance <= self.bound * (1 + get_settings().bound_slack) + 1e-15

    def as_row(self) -> List[float]:
        return [self.depth, self.sup_distance, self.bound, self.ratio]


@dataclass(frozen=True)
class RefinementRow:
    eps: float
    eps_next: float
    distance: float


def time_grid(horizon: float, samples: int, extra: Sequence[float] = ()) -> List[float]:
    """Uniform grid on [0, T] merged with extra times (e.g. slab endpoints)."""
    points = set(float(t) for t in np.linspace(0.0, horizon, samples + 1))
    points.update(float(t) for t in extra if 0.0 <= t <= horizon)
    return sorted(points)


def sup_distance(u: Solution, v: Solution, times: Sequence[float]) -> float:
    """sup over the time grid of ‖u(t) − v(t)‖_{L¹}."""
    return max((l1_distance(u.profile_at(t), v.profile_at(t)) for t in times), default=0.0)


class ConvergenceStudy:
    """Runs the Cauchy and ε-refinement studies, solving independent cells in parallel."""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()
        self.logger = get_logger(self.__class__.__name__)
        self.solver = DyadicSolver(self.settings)

    def _solve_depths(self, problem: Problem, depths: Sequence[int]) -> Dict[int, Solution]:
        solutions: Dict[int, Solution] = {}
        with ThreadPoolExecutor(max_workers=self.settings.worker_threads) as executor:
            futures = {executor.submit(self.solver.solve, problem, n): n for n in depths}
            for future in as_completed(futures):
                n = futures[future]
                try:
                    solutions[n] = future.result()
                except FrontTrackingError as e:
                    self.logger.error(f"Depth {n} failed: {e}")
                    raise
        return solutions

    def cauchy_study(self, problem: Problem, depths: Sequence[int], samples: int = 32) -> List[CauchyRow]:
        """Rows (n, sup_t ‖u_{n+1}(t) − u_n(t)‖₁, O·2⁻ⁿ, ratio to the next row)."""
        depths = list(depths)
        if depths != sorted(depths) or len(set(depths)) != len(depths):
            raise DomainError(f"depths must be strictly increasing, got {depths}")
        needed = sorted(set(depths) | {n + 1 for n in depths})
        solutions = self._solve_depths(problem, needed)
        constants = bound_constants(problem)

        distances = []
        for n in depths:
            extra = SlabSchedule(n + 1, problem.horizon).endpoints
            times = time_grid(problem.horizon, samples, extra)
            distances.append(sup_distance(solutions[n + 1], solutions[n], times))

        rows = []
        for i, n in enumerate(depths):
            if i + 1 < len(distances) and distances[i + 1] > 0:
                ratio = distances[i] / distances[i + 1]
            elif i + 1 < len(distances) and distances[i] == 0:
                ratio = 1.0
            else:
                ratio = math.nan
            rows.append(CauchyRow(n, distances[i], constants.cauchy_bound(n), ratio))
            self.logger.info(f"n={n}: sup distance {distances[i]:.3e}, bound {constants.cauchy_bound(n):.3e}")
        return rows

    def eps_refinement_study(self, problem: Problem, eps_list: Sequence[float], t: float,
                             depth: int = 0) -> List[RefinementRow]:
        """‖u^ε(t) − u^{ε'}(t)‖₁ between successive grid spacings."""
        if len(eps_list) < 2:
            raise DomainError("need at least two grid spacings")
        cells = [replace(problem, eps=float(e)) for e in eps_list]
        solutions: Dict[int, Solution] = {}
        with ThreadPoolExecutor(max_workers=self.settings.worker_threads) as executor:
            futures = {executor.submit(self.solver.solve, cell, depth): i for i, cell in enumerate(cells)}
            for future in as_completed(futures):
                solutions[futures[future]] = future.result()

        rows = []
        for i in range(len(cells) - 1):
            d = l1_distance(solutions[i].profile_at(t), solutions[i + 1].profile_at(t))
            rows.append(RefinementRow(cells[i].eps, cells[i + 1].eps, d))
            self.logger.info(f"eps {cells[i].eps} -> {cells[i + 1].eps}: L1 distance {d:.3e}")
        return rows


def cauchy_study(problem: Problem, depths: Sequence[int], samples: int = 32,
                 settings: Optional[Settings] = None) -> List[CauchyRow]:
    return ConvergenceStudy(settings).cauchy_study(problem, depths, samples)


def eps_refinement_study(problem: Problem, eps_list: Sequence[float], t: float, depth: int = 0,
                         settings: Optional[Settings] = None) -> List[RefinementRow]:
    return ConvergenceStudy(settings).eps_refinement_study(problem, eps_list, t, depth)
