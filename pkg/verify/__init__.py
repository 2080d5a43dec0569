"""Certified-bounds verifier: entropy residuals, boundary admissibility and stability checks."""

from .entropy import (
    SemiEntropyPair, BumpTestFunction, entropy_residual, entropy_tolerance,
    boundary_weight, sample_pairs, sample_bumps
)
from .boundary import boundary_flux_F, boundary_distance, boundary_admissibility, AdmissibilityReport
from .stability import (
    StabilityRow, contraction_check, flux_stability_check, lipschitz_check, data_variation,
    within, solve
)
from .bounds import BoundCheck, BoundReport, bound_report
from .profiles import profile_discrepancy, front_checks, time_continuity, mutate_solution
from .manager import VerificationManager, run_campaign, random_problem, random_step

__all__ = [
    'SemiEntropyPair', 'BumpTestFunction', 'entropy_residual', 'entropy_tolerance',
    'boundary_weight', 'sample_pairs', 'sample_bumps', 'boundary_flux_F', 'boundary_distance',
    'boundary_admissibility', 'AdmissibilityReport', 'StabilityRow', 'contraction_check',
    'flux_stability_check', 'lipschitz_check', 'data_variation', 'within', 'solve',
    'BoundCheck', 'BoundReport', 'bound_report', 'profile_discrepancy', 'front_checks',
    'time_continuity', 'mutate_solution',
    'VerificationManager', 'run_campaign', 'random_problem', 'random_step'
]
