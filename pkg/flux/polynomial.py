"""Polynomial space-time fluxes f(t, u) = Σ c[j][k] tʲ uᵏ."""

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from core import DomainError, get_logger
from config import get_settings

logger = get_logger(__name__)

# Relative padding on sup-norm bounds; root locations from the companion
# eigenproblem are accurate to ~1e-8 and the error in |p| is quadratic in it.
_SUP_PAD = 1e-12


@dataclass(frozen=True, eq=False)
class SpaceTimeFlux:
    """Flux given by a dense coefficient matrix, rows in t, columns in u."""

    coefficients: np.ndarray

    def __post_init__(self):
        c = np.atleast_2d(np.asarray(self.coefficients, dtype=float))
        if c.size == 0:
            c = np.zeros((1, 1))
        c = _trim(c)
        c.setflags(write=False)
        object.__setattr__(self, 'coefficients', c)

    # -- builders ---------------------------------------------------------

    @classmethod
    def from_terms(cls, terms: Dict[Tuple[int, int], float]) -> 'SpaceTimeFlux':
        """Build from {(j, k): c} meaning c·tʲ·uᵏ."""
        if not terms:
            return cls(np.zeros((1, 1)))
        deg_t = max(j for j, _ in terms)
        deg_u = max(k for _, k in terms)
        c = np.zeros((deg_t + 1, deg_u + 1))
        for (j, k), value in terms.items():
            c[j, k] += value
        return cls(c)

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[float]]) -> 'SpaceTimeFlux':
        width = max((len(r) for r in rows), default=1)
        c = np.zeros((max(len(rows), 1), max(width, 1)))
        for j, row in enumerate(rows):
            c[j, :len(row)] = row
        return cls(c)

    @classmethod
    def burgers(cls) -> 'SpaceTimeFlux':
        return cls.from_terms({(0, 2): 0.5})

    @classmethod
    def linear(cls, speed: float = 1.0) -> 'SpaceTimeFlux':
        return cls.from_terms({(0, 1): speed})

    @classmethod
    def zero(cls) -> 'SpaceTimeFlux':
        return cls(np.zeros((1, 1)))

    # -- structure --------------------------------------------------------

    @property
    def deg_t(self) -> int:
        return self.coefficients.shape[0] - 1

    @property
    def deg_u(self) -> int:
        return self.coefficients.shape[1] - 1

    @property
    def is_autonomous(self) -> bool:
        return self.deg_t == 0

    def to_matrix(self) -> List[List[float]]:
        return self.coefficients.tolist()

    def __sub__(self, other: 'SpaceTimeFlux') -> 'SpaceTimeFlux':
        rows = max(self.coefficients.shape[0], other.coefficients.shape[0])
        cols = max(self.coefficients.shape[1], other.coefficients.shape[1])
        c = np.zeros((rows, cols))
        c[:self.coefficients.shape[0], :self.coefficients.shape[1]] += self.coefficients
        c[:other.coefficients.shape[0], :other.coefficients.shape[1]] -= other.coefficients
        return SpaceTimeFlux(c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpaceTimeFlux):
            return NotImplemented
        return (self.coefficients.shape == other.coefficients.shape
                and bool(np.array_equal(self.coefficients, other.coefficients)))

    def __hash__(self) -> int:
        return hash((self.coefficients.shape, self.coefficients.tobytes()))

    def __repr__(self) -> str:
        return f"SpaceTimeFlux({self.to_matrix()})"

    # -- evaluation -------------------------------------------------------

    def __call__(self, t: float, u: float) -> float:
        return eval_flux(self, t, u)

    def frozen(self, t: float) -> np.ndarray:
        """Coefficients in u of the map u ↦ f(t, u)."""
        return P.polyval(t, self.coefficients)


def _trim(c: np.ndarray) -> np.ndarray:
    """Drop all-zero trailing rows and columns, keeping at least 1×1."""
    rows, cols = c.shape
    while rows > 1 and not np.any(c[rows - 1, :cols]):
        rows -= 1
    while cols > 1 and not np.any(c[:rows, cols - 1]):
        cols -= 1
    return np.array(c[:rows, :cols], dtype=float)


def eval_flux(f: SpaceTimeFlux, t: float, u: float) -> float:
    """Exact polynomial value f(t, u)."""
    return float(P.polyval2d(t, u, f.coefficients))


def du(f: SpaceTimeFlux) -> SpaceTimeFlux:
    """∂ᵤf by coefficient shifting."""
    if f.deg_u == 0:
        return SpaceTimeFlux.zero()
    return SpaceTimeFlux(P.polyder(f.coefficients, axis=1))


def dt(f: SpaceTimeFlux) -> SpaceTimeFlux:
    """∂ₜf by coefficient shifting."""
    if f.deg_t == 0:
        return SpaceTimeFlux.zero()
    return SpaceTimeFlux(P.polyder(f.coefficients, axis=0))


def dtdu(f: SpaceTimeFlux) -> SpaceTimeFlux:
    """∂ₜ∂ᵤf."""
    return dt(du(f))


def _check_interval(interval: Tuple[float, float], name: str) -> Tuple[float, float]:
    a, b = float(interval[0]), float(interval[1])
    if not (math.isfinite(a) and math.isfinite(b)) or a > b:
        raise DomainError(f"empty or unbounded {name} interval [{a}, {b}]")
    return a, b


def _sup_abs_1d(coeffs: np.ndarray, a: float, b: float) -> float:
    """max |p| on [a, b] from endpoint and critical-point values."""
    coeffs = np.trim_zeros(np.asarray(coeffs, dtype=float), 'b')
    if coeffs.size == 0:
        return 0.0
    candidates = [a, b]
    if coeffs.size > 2 and a < b:
        derivative = P.polyder(coeffs)
        for root in P.polyroots(derivative):
            if abs(root.imag) <= 1e-9 * max(1.0, abs(root.real)):
                x = float(root.real)
                if a < x < b:
                    candidates.append(x)
    values = np.abs(P.polyval(np.asarray(candidates), coeffs))
    best = float(np.max(values))
    return best * (1.0 + _SUP_PAD) + _SUP_PAD * float(np.max(np.abs(coeffs)))


def _crude_bound(c: np.ndarray, t_box: Tuple[float, float], u_box: Tuple[float, float]) -> float:
    """Σ |c_jk| |t|ʲ |u|ᵏ with |t|, |u| at their box maxima."""
    tm = max(abs(t_box[0]), abs(t_box[1]))
    um = max(abs(u_box[0]), abs(u_box[1]))
    j = np.arange(c.shape[0])[:, None]
    k = np.arange(c.shape[1])[None, :]
    return float(np.sum(np.abs(c) * tm ** j * um ** k))


def sup_abs(f: SpaceTimeFlux, t_interval: Tuple[float, float], u_interval: Tuple[float, float],
            t_samples: Optional[int] = None) -> float:
    """Upper bound on sup |f| over the box, exact for deg_t ≤ 1 and never below the sup.

    For deg_t ≤ 1 the map t ↦ f(t, u) is affine, so the sup sits on the two
    edges t = t_a, t = t_b which are scanned exactly. Higher t-degrees scan a
    uniform t-grid and add the Lipschitz-in-t remainder.
    """
    ta, tb = _check_interval(t_interval, "time")
    ua, ub = _check_interval(u_interval, "state")
    c = f.coefficients
    if f.deg_t == 0:
        return _sup_abs_1d(c[0], ua, ub)
    if f.deg_u == 0:
        return _sup_abs_1d(c[:, 0], ta, tb)
    if f.deg_t == 1:
        return max(_sup_abs_1d(f.frozen(ta), ua, ub), _sup_abs_1d(f.frozen(tb), ua, ub))

    n = t_samples or get_settings().sup_norm_t_samples
    grid = np.linspace(ta, tb, n + 1)
    best = max(_sup_abs_1d(f.frozen(t), ua, ub) for t in grid)
    lipschitz_t = _crude_bound(dt(f).coefficients, (ta, tb), (ua, ub))
    return best + lipschitz_t * (tb - ta) / (2 * n)


def sup_du_norm(f: SpaceTimeFlux, t_interval: Tuple[float, float], u_interval: Tuple[float, float]) -> float:
    """Upper bound on ‖∂ᵤf‖_{L∞} over the box."""
    return sup_abs(du(f), t_interval, u_interval)


def sup_dtdu_norm(f: SpaceTimeFlux, t_interval: Tuple[float, float], u_interval: Tuple[float, float]) -> float:
    """Upper bound on ‖∂ₜ∂ᵤf‖_{L∞} over the box."""
    return sup_abs(dtdu(f), t_interval, u_interval)


def random_flux(rng: np.random.Generator, deg_u: int = 4, deg_t: int = 0, scale: float = 1.0) -> SpaceTimeFlux:
    """Random polynomial flux with coefficients uniform in [-scale, scale]."""
    c = rng.uniform(-scale, scale, size=(deg_t + 1, deg_u + 1))
    c[:, 0] = 0.0
    return SpaceTimeFlux(c)
