"""Configuration-driven experiment runner and its artifact formats."""

from .artifacts import (
    write_profiles, read_profiles, write_events, read_events, write_solution,
    read_solution_header, solution_from_events, profile_times
)
from .manager import SolveManager

__all__ = [
    'write_profiles', 'read_profiles', 'write_events', 'read_events', 'write_solution',
    'read_solution_header', 'solution_from_events', 'profile_times', 'SolveManager'
]
