"""Non-autonomous solver by dyadic time splitting and its convergence studies."""

from .dyadic import (
    SlabSchedule, BoundConstants, DyadicSolver, dyadic_solve, bound_constants,
    data_hull, data_total_variation, shift_grid, slab_chain_holds
)
from .study import (
    CauchyRow, RefinementRow, ConvergenceStudy, cauchy_study, eps_refinement_study,
    time_grid, sup_distance
)

__all__ = [
    'SlabSchedule', 'BoundConstants', 'DyadicSolver', 'dyadic_solve', 'bound_constants',
    'data_hull', 'data_total_variation', 'shift_grid', 'slab_chain_holds', 'CauchyRow',
    'RefinementRow', 'ConvergenceStudy', 'cauchy_study', 'eps_refinement_study',
    'time_grid', 'sup_distance'
]
