"""Piecewise-constant functions: norms, distances, traces and grid quantization."""

from .step import (
    StepFunction, Interval, tv, sup_norm, l1_norm, l1_distance, range_hull,
    translate, restrict, trace
)
from .quantize import GridStepFunction, quantize, quantize_boundary, clamp_index

__all__ = [
    'StepFunction', 'Interval', 'tv', 'sup_norm', 'l1_norm', 'l1_distance', 'range_hull',
    'translate', 'restrict', 'trace', 'GridStepFunction', 'quantize',
    'quantize_boundary', 'clamp_index'
]
