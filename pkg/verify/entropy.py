"""Entropy inequality residuals of front tracking solutions against bump test functions."""

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from config import Settings, get_settings
from core import DomainError, QuadratureBudgetExceeded, get_logger, negative_part, positive_part, sign_minus, sign_plus
from flux import PLCFlux, SpaceTimeFlux, eval_flux, sup_du_norm
from stepfn import GridStepFunction
from tracker import Snapshot, Solution

logger = get_logger(__name__)

# ∫ (1 − s²)² ds over [−1, 1]
_BUMP_MASS_1D = 16.0 / 15.0


def _bump(s: float) -> float:
    if abs(s) >= 1.0:
        return 0.0
    return (1.0 - s * s) ** 2


def _bump_prime(s: float) -> float:
    if abs(s) >= 1.0:
        return 0.0
    return -4.0 * s * (1.0 - s * s)


def _bump_antiderivative(s: float) -> float:
    """G(s) = ∫₀ˢ B, constant outside [−1, 1]."""
    s = max(-1.0, min(1.0, s))
    return s - 2.0 * s ** 3 / 3.0 + s ** 5 / 5.0


@dataclass(frozen=True)
class SemiEntropyPair:
    """η_k^±(u) = (u − k)^± with flux Φ_k^±(u) = sgn^±(u − k)·(f(u) − f(k))."""

    sign: int
    k: float

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")

    def eta(self, u: float) -> float:
        return positive_part(u - self.k) if self.sign > 0 else negative_part(u - self.k)

    def sgn(self, u: float) -> float:
        return sign_plus(u - self.k) if self.sign > 0 else sign_minus(u - self.k)

    def flux(self, f: Callable[[float], float], u: float) -> float:
        s = self.sgn(u)
        return s * (f(u) - f(self.k)) if s else 0.0

    @property
    def label(self) -> str:
        return f"{'+' if self.sign > 0 else '-'}{self.k:g}"


@dataclass(frozen=True)
class BumpTestFunction:
    """φ(t, x) = B((t − t0)/r_t)·B((x − x0)/r_x) with B(s) = (1 − s²)² on |s| < 1."""

    t0: float
    x0: float
    r_t: float
    r_x: float

    def __post_init__(self):
        if not (self.r_t > 0 and self.r_x > 0):
            raise DomainError(f"bump radii must be positive, got ({self.r_t}, {self.r_x})")

    def __call__(self, t: float, x: float) -> float:
        return _bump((t - self.t0) / self.r_t) * _bump((x - self.x0) / self.r_x)

    def dt(self, t: float, x: float) -> float:
        return _bump_prime((t - self.t0) / self.r_t) / self.r_t * _bump((x - self.x0) / self.r_x)

    def dx(self, t: float, x: float) -> float:
        return _bump((t - self.t0) / self.r_t) * _bump_prime((x - self.x0) / self.r_x) / self.r_x

    @property
    def mass(self) -> float:
        return self.r_t * self.r_x * _BUMP_MASS_1D ** 2

    def x_integral(self, a: float, b: float) -> float:
        """∫_a^b B((x − x0)/r_x) dx, exact."""
        return self.r_x * (_bump_antiderivative((b - self.x0) / self.r_x)
                           - _bump_antiderivative((a - self.x0) / self.r_x))

    def x_integral_prime(self, a: float, b: float) -> float:
        """∫_a^b ∂ₓB((x − x0)/r_x) dx = B at b minus B at a."""
        return _bump((b - self.x0) / self.r_x) - _bump((a - self.x0) / self.r_x)

    def t_integral(self, a: float, b: float) -> float:
        return self.r_t * (_bump_antiderivative((b - self.t0) / self.r_t)
                           - _bump_antiderivative((a - self.t0) / self.r_t))


def _flux_function(flux, t: float = 0.0) -> Callable[[float], float]:
    if isinstance(flux, PLCFlux):
        return flux.evaluate
    if isinstance(flux, SpaceTimeFlux):
        return lambda u: eval_flux(flux, t, u)
    raise TypeError(f"unsupported flux type {type(flux).__name__}")


def _pieces(snapshot: Snapshot, t: float, end: float) -> List[Tuple[float, float, int]]:
    """(left, right, state index) of u(t, ·) from a snapshot."""
    edges = [0.0]
    for front in snapshot.fronts:
        edges.append(max(edges[-1], min(max(front.position(t), 0.0), end)))
    edges.append(end)
    states = [snapshot.trace] + [f.right for f in snapshot.fronts]
    return [(edges[i], edges[i + 1], states[i]) for i in range(len(states))]


def _grid_pieces(u: GridStepFunction) -> List[Tuple[float, float, int]]:
    edges = (u.start,) + u.breakpoints + (u.end,)
    return [(edges[i], edges[i + 1], u.indices[i]) for i in range(len(u.indices))]


def _space_integrand(solution: Solution, pair: SemiEntropyPair, phi: BumpTestFunction, t: float,
                     interior: Optional[SpaceTimeFlux] = None) -> float:
    """∫ {η(u) ∂ₜφ + Φ(u) ∂ₓφ} dx at one time, exact in x."""
    snapshot = solution.snapshot_at(t)
    f = _flux_function(interior if interior is not None else solution.flux_at(t), t)
    eps = solution.eps
    s_t = (t - phi.t0) / phi.r_t
    bt, dbt = _bump(s_t), _bump_prime(s_t) / phi.r_t
    if bt == 0.0 and dbt == 0.0:
        return 0.0
    total = 0.0
    for a, b, k in _pieces(snapshot, t, solution.domain.end):
        if b <= a:
            continue
        u = k * eps
        eta = pair.eta(u)
        if eta and dbt:
            total += dbt * eta * phi.x_integral(a, b)
        big_phi = pair.flux(f, u)
        if big_phi and bt:
            total += bt * big_phi * phi.x_integral_prime(a, b)
    return total


def _crossing_times(snapshot: Snapshot, t_a: float, t_b: float, levels: Sequence[float]) -> List[float]:
    times = []
    for front in snapshot.fronts:
        if front.speed == 0:
            continue
        for level in levels:
            t = front.t0 + (level - front.x0) / front.speed
            if t_a < t < t_b:
                times.append(t)
    return times


def _cells(solution: Solution, phi: BumpTestFunction, budget: int) -> List[Tuple[float, float]]:
    """Time cells on which the x-integrated integrand is a polynomial in t."""
    lo = max(0.0, phi.t0 - phi.r_t)
    hi = min(solution.horizon, phi.t0 + phi.r_t)
    if hi <= lo:
        return []
    cuts = {lo, hi}
    if lo < phi.t0 < hi:
        cuts.add(phi.t0)
    cuts.update(t for t in solution.snapshot_times if lo < t < hi)
    cuts.update(seg.t_start for seg in solution.segments if lo < seg.t_start < hi)
    levels = (phi.x0 - phi.r_x, phi.x0 + phi.r_x)
    times = solution.snapshot_times + [solution.horizon]
    for i, snapshot in enumerate(solution.snapshots):
        t_a, t_b = max(times[i], lo), min(times[i + 1], hi)
        if t_b > t_a:
            cuts.update(_crossing_times(snapshot, t_a, t_b, levels))
        if len(cuts) > budget:
            raise QuadratureBudgetExceeded(f"more than {budget} quadrature cells for bump at "
                                           f"({phi.t0}, {phi.x0})")
    ordered = sorted(cuts)
    return [(a, b) for a, b in zip(ordered, ordered[1:]) if b > a]


def _boundary_term(datum: GridStepFunction, pair: SemiEntropyPair, phi: BumpTestFunction,
                   x: float, horizon: float) -> float:
    """∫₀ᵀ η(u_b(t)) φ(t, x) dt, exact."""
    bx = _bump((x - phi.x0) / phi.r_x)
    if bx == 0.0:
        return 0.0
    total = 0.0
    for a, b, k in _grid_pieces(datum):
        a, b = max(a, 0.0), min(b, horizon)
        if b > a:
            total += pair.eta(k * datum.eps) * phi.t_integral(a, b)
    return bx * total


def _profile_term(pieces: List[Tuple[float, float, int]], eps: float, pair: SemiEntropyPair,
                  phi: BumpTestFunction, t: float) -> float:
    bt = _bump((t - phi.t0) / phi.r_t)
    if bt == 0.0:
        return 0.0
    return bt * sum(pair.eta(k * eps) * phi.x_integral(a, b) for a, b, k in pieces if b > a)


def boundary_weight(solution: Solution, f: Optional[SpaceTimeFlux] = None) -> float:
    """‖∂ᵤf‖ over [0, T]×𝓤, never below the PLC slopes the solution used."""
    weight = solution.max_speed()
    if f is not None:
        lo, hi = solution.data.hull_indices
        weight = max(weight, sup_du_norm(f, (0.0, solution.horizon), (lo * solution.eps, hi * solution.eps)))
    return weight


def entropy_residual(solution: Solution, pair: SemiEntropyPair, phi: BumpTestFunction,
                     f: Optional[SpaceTimeFlux] = None, boundary: Optional[GridStepFunction] = None,
                     settings: Optional[Settings] = None, exact: bool = False) -> float:
    """Left-hand side of the semi-Kružkov entropy inequality for one (k, ±, φ).

    Space integrals are exact; time integrals use Gauss–Legendre per cell of
    the arrangement cut by events, bump edges and front crossings, where the
    integrand is polynomial. Nonnegative for entropy solutions up to roundoff.

    The entropy flux Φ is built from the frozen PLC flux of each slab. `f`
    widens the boundary weight to ‖∂ᵤf‖; with `exact=True` Φ is built from
    `f` itself, so the residual also carries the interpolation error of the
    PLC flux.
    """
    settings = settings or get_settings()
    if exact and f is None:
        raise DomainError("exact entropy residual needs the flux f")
    eps = solution.eps
    T = solution.horizon
    nodes, weights = np.polynomial.legendre.leggauss(settings.quadrature_order)
    interior = f if exact else None

    total = 0.0
    for a, b in _cells(solution, phi, settings.quadrature_budget):
        half, mid = 0.5 * (b - a), 0.5 * (a + b)
        total += half * sum(w * _space_integrand(solution, pair, phi, mid + half * z, interior)
                            for z, w in zip(nodes, weights))

    total += _profile_term(_grid_pieces(solution.data.u_o), eps, pair, phi, 0.0)
    total -= _profile_term(_pieces(solution.snapshot_at(T), T, solution.domain.end), eps, pair, phi, T)

    weight = boundary_weight(solution, f)
    datum = boundary if boundary is not None else solution.data.u_b
    total += weight * _boundary_term(datum, pair, phi, 0.0, T)
    if solution.domain.is_segment and solution.data.u_b2 is not None:
        total += weight * _boundary_term(solution.data.u_b2, pair, phi, solution.domain.end, T)
    return total


def entropy_tolerance(phi: BumpTestFunction, scale: float = 1.0, settings: Optional[Settings] = None) -> float:
    """tol_quad scaled by the bump mass and the size of the integrand."""
    settings = settings or get_settings()
    return settings.quadrature_tolerance * max(1.0, phi.mass * max(1.0, scale))


def sample_pairs(solution: Solution, count: int, rng: np.random.Generator) -> List[SemiEntropyPair]:
    """Thresholds on the grid of 𝓤 and midpoints, plus one below and one above, both signs."""
    lo, hi = solution.data.hull_indices
    eps = solution.eps
    ks = [k * eps for k in range(lo, hi + 1)] + [(k + 0.5) * eps for k in range(lo, hi)]
    ks += [(lo - 1.5) * eps, (hi + 1.5) * eps]
    if len(ks) > count:
        picks = rng.choice(len(ks), size=count, replace=False)
        ks = [ks[i] for i in sorted(picks)]
    return [SemiEntropyPair(s, k) for k in ks for s in (1, -1)]


def sample_bumps(solution: Solution, count: int, rng: np.random.Generator) -> List[BumpTestFunction]:
    """Bumps centred next to events and on a uniform grid of the window."""
    T = solution.horizon
    width = solution.domain.end if solution.domain.is_segment else _extent(solution)
    bumps: List[BumpTestFunction] = []
    events = solution.events
    for i in range(count):
        if events and i % 2 == 0:
            record = events[int(rng.integers(len(events)))]
            t0, x0 = record.time, record.position
        else:
            t0, x0 = float(rng.uniform(0.0, T)), float(rng.uniform(0.0, width))
        r_t = float(rng.uniform(0.1, 0.5)) * T
        r_x = float(rng.uniform(0.1, 0.5)) * max(width, 1.0)
        bumps.append(BumpTestFunction(t0, x0, r_t, r_x))
    return bumps


def _extent(solution: Solution) -> float:
    """Width of the region the half-line solution actually moves in."""
    right = 1.0
    for snapshot in solution.snapshots:
        for front in snapshot.fronts:
            right = max(right, front.x0, front.position(solution.horizon))
    return right if math.isfinite(right) else 1.0
