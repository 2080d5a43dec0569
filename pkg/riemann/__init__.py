"""Riemann solvers reading wave fans off convex and concave envelopes."""

from .solver import (
    Wave, WaveFan, solve_riemann, solve_boundary_left, solve_boundary_right,
    left_trace_after, right_trace_after, oleinik_violation, boundary_violation
)

__all__ = [
    'Wave', 'WaveFan', 'solve_riemann', 'solve_boundary_left', 'solve_boundary_right',
    'left_trace_after', 'right_trace_after', 'oleinik_violation', 'boundary_violation'
]
