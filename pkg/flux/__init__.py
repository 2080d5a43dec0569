"""Exact polynomial fluxes and their piecewise-linear ε-approximations."""

from .polynomial import (
    SpaceTimeFlux, eval_flux, du, dt, dtdu, sup_abs, sup_du_norm, sup_dtdu_norm,
    random_flux
)
from .plc import PLCFlux, plc_approximate, grid_bounds

__all__ = [
    'SpaceTimeFlux', 'eval_flux', 'du', 'dt', 'dtdu', 'sup_abs', 'sup_du_norm',
    'sup_dtdu_norm', 'random_flux', 'PLCFlux', 'plc_approximate',
    'grid_bounds'
]
