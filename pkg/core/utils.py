"""Core utility functions."""

import hashlib
import math
import re
from typing import Iterable, Tuple


def get_file_hash(content: bytes, algorithm: str = 'sha256') -> str:
    """Generate hash for file content."""
    hasher = hashlib.new(algorithm)
    hasher.update(content)
    return hasher.hexdigest()


def sanitize_filename(filename: str, max_length: int = 255) -> str:
    """Sanitize filename for safe storage."""
    # Remove or replace invalid characters
    sanitized = re.sub(r'[<>:"/\\|?*\s]', '_', filename)

    # Remove control characters
    sanitized = ''.join(char for char in sanitized if ord(char) >= 32)

    return sanitized[:max_length] or 'unnamed'


def format_float(value: float) -> str:
    """Shortest decimal string that round-trips to the same float."""
    if math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    return repr(float(value))


def parse_float(text: str) -> float:
    """Inverse of format_float."""
    return float(text.strip())


def interval_hull(values: Iterable[float]) -> Tuple[float, float]:
    """Closed convex hull [min, max] of a nonempty collection."""
    values = list(values)
    if not values:
        raise ValueError("hull of an empty collection")
    return min(values), max(values)


def sign_plus(x: float) -> float:
    """sgn⁺: 1 for x > 0, else 0."""
    return 1.0 if x > 0 else 0.0


def sign_minus(x: float) -> float:
    """sgn⁻: -1 for x < 0, else 0."""
    return -1.0 if x < 0 else 0.0


def positive_part(x: float) -> float:
    return x if x > 0 else 0.0


def negative_part(x: float) -> float:
    return -x if x < 0 else 0.0
