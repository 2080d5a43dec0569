"""Core utilities and shared functionality."""

from .logging import setup_logging, get_logger
from .exceptions import (
    FrontTrackingError, ConfigError, GridError, DomainError, RangeError,
    DivergentTailError, ConsistencyError, QuadratureBudgetExceeded,
    ArtifactError, EventBudgetExceeded
)
from .utils import (
    get_file_hash, sanitize_filename, format_float, parse_float, interval_hull,
    sign_plus, sign_minus, positive_part, negative_part
)

__version__ = "1.0.0"

__all__ = [
    'setup_logging', 'get_logger', 'FrontTrackingError', 'ConfigError', 'GridError',
    'DomainError', 'RangeError', 'DivergentTailError', 'ConsistencyError',
    'QuadratureBudgetExceeded', 'ArtifactError', 'EventBudgetExceeded',
    'get_file_hash', 'sanitize_filename', 'format_float', 'parse_float',
    'interval_hull', 'sign_plus', 'sign_minus', 'positive_part', 'negative_part',
    '__version__'
]
