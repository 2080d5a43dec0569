"""Verification management: per-solution verification and randomized campaigns."""

from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Any, Dict, Optional

import numpy as np
from jinja2 import Template

from config import Settings, get_settings
from core import FrontTrackingError, QuadratureBudgetExceeded, get_logger
from flux import SpaceTimeFlux, random_flux
from stepfn import StepFunction
from tracker import Domain, FrontTracker, Problem, Solution
from .boundary import boundary_admissibility
from .bounds import bound_report
from .entropy import BumpTestFunction, entropy_residual, entropy_tolerance, sample_bumps, sample_pairs
from .profiles import front_checks, mutate_solution, time_continuity

MUTATION_CHECKS = (
    'rankine_hugoniot', 'oleinik', 'states', 'time_continuity', 'boundary_admissibility', 'entropy',
)

REPORT_TEMPLATE = Template("""\
Verification report
===================
runs: {{ total }}   processed: {{ processed }}   errors: {{ errors }}   violations: {{ violations }}

{{ "%-6s %-10s %8s %8s %12s %12s %s"|format("run", "domain", "events", "fronts", "min entropy", "max F^k", "status") }}
{% for r in results -%}
{{ "%-6s %-10s %8d %8d %12.3e %12.3e %s"|format(r.run, r.domain, r.events, r.fronts, r.min_entropy, r.max_boundary, "ok" if r.passed else "FAIL: " ~ r.failures|join(", ")) }}
{% endfor %}
{%- if mutation %}
mutations flagged: {{ mutation.flagged }} / {{ mutation.total }}
{%- if mutation.by_check %}
{% for name, hits in mutation.by_check.items() %}  {{ "%-24s %d"|format(name, hits) }}
{% endfor %}
{%- endif %}
{%- endif %}
""")


def random_step(rng: np.random.Generator, eps: float, start: float, end: float, jumps: int,
                amplitude: float = 1.0) -> StepFunction:
    """Random grid-valued step function with up to `jumps` breakpoints."""
    k_max = max(int(round(amplitude / eps)), 1)
    n = int(rng.integers(0, jumps + 1))
    width = end - start
    xs = np.sort(rng.uniform(start, start + width, size=n)) if n else np.array([])
    ks = rng.integers(-k_max, k_max + 1, size=n + 1)
    return StepFunction.make(xs.tolist(), (ks * eps).tolist(), start, end)


def random_problem(rng: np.random.Generator, max_jumps: int = 20, horizon: float = 1.0,
                   deg_t: int = 0) -> Problem:
    """Random IBVP: polynomial flux of degree ≤ 4 in u, grid data, half-line or segment."""
    eps = float(rng.choice([0.5, 0.25]))
    flux = random_flux(rng, deg_u=int(rng.integers(1, 5)), deg_t=deg_t)
    if rng.random() < 0.5:
        domain = Domain.segment(float(rng.uniform(1.0, 3.0)))
        u_o = random_step(rng, eps, 0.0, domain.end, max_jumps)
    else:
        domain = Domain.half_line()
        u_o = random_step(rng, eps, 0.0, 3.0, max_jumps)
        u_o = StepFunction.make(u_o.breakpoints, u_o.values, 0.0, float('inf'))
    u_b = random_step(rng, eps, 0.0, horizon, max(max_jumps // 4, 1))
    u_b2 = random_step(rng, eps, 0.0, horizon, max(max_jumps // 4, 1)) if domain.is_segment else None
    return Problem(flux=flux, u_o=u_o, u_b=u_b, domain=domain, eps=eps, horizon=horizon, u_b2=u_b2)


class VerificationManager:
    """Runs the verifier on solutions and over randomized campaigns."""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()
        self.logger = get_logger(self.__class__.__name__)
        self.tracker = FrontTracker(self.settings)

    def entropy_falsifier(self, solution: Solution, f: Optional[SpaceTimeFlux] = None,
                          pairs: int = 20, bumps: int = 10,
                          rng: Optional[np.random.Generator] = None) -> Dict[str, Any]:
        """Minimum entropy residual over sampled (k, ±, φ), with the worst sample."""
        rng = rng or np.random.default_rng(0)
        worst: Dict[str, Any] = {'residual': float('inf'), 'pair': None, 'bump': None}
        violations = 0
        scale = max(1.0, solution.max_speed())
        for pair in sample_pairs(solution, pairs, rng):
            for phi in sample_bumps(solution, bumps, rng):
                residual = entropy_residual(solution, pair, phi, f=f, settings=self.settings)
                if residual < -entropy_tolerance(phi, scale, self.settings):
                    violations += 1
                if residual < worst['residual']:
                    worst = {'residual': residual, 'pair': pair.label,
                             'bump': [phi.t0, phi.x0, phi.r_t, phi.r_x]}
        worst['violations'] = violations
        if violations:
            self.logger.warning(f"Entropy falsifier: {violations} negative residuals, worst {worst}")
        return worst

    def verify_solution(self, solution: Solution, f: Optional[SpaceTimeFlux] = None,
                        pairs: int = 20, bumps: int = 10,
                        rng: Optional[np.random.Generator] = None) -> Dict[str, Any]:
        """Bound report, boundary admissibility and entropy falsifier for one solution."""
        report = bound_report(solution, self.settings)
        sides = ['left', 'right'] if solution.domain.is_segment else ['left']
        admissibility = [boundary_admissibility(solution, side, settings=self.settings) for side in sides]
        entropy = self.entropy_falsifier(solution, f, pairs, bumps, rng)

        failures = [c.name for c in report.checks if not c.passed]
        tol = self.settings.admissibility_tolerance
        if any(not a.passed(tol) for a in admissibility):
            failures.append('boundary_admissibility')
        if entropy['violations']:
            failures.append('entropy')
        return {
            'passed': not failures,
            'failures': failures,
            'bounds': report.to_dict(),
            'admissibility': [a.to_dict() for a in admissibility],
            'max_boundary': max(a.max_violation for a in admissibility),
            'entropy': entropy,
            'min_entropy': entropy['residual'],
        }

    def _tamper_flags(self, solution: Solution, where, pairs: int, bumps: int,
                      rng: np.random.Generator) -> Dict[str, bool]:
        """Which checks reject the solution; a check that raises counts as rejecting."""
        slack = self.settings.bound_slack
        flags: Dict[str, bool] = {}
        try:
            fronts = front_checks(solution)
            flags['rankine_hugoniot'] = fronts['rankine_hugoniot'] > slack
            flags['oleinik'] = fronts['oleinik'] > slack
            flags['states'] = fronts['states'] > 0
        except FrontTrackingError:
            flags.update(rankine_hugoniot=True, oleinik=True, states=True)
        try:
            flags['time_continuity'] = time_continuity(solution) > self.settings.quadrature_tolerance
        except FrontTrackingError:
            flags['time_continuity'] = True
        sides = ['left', 'right'] if solution.domain.is_segment else ['left']
        try:
            tol = self.settings.admissibility_tolerance
            flags['boundary_admissibility'] = any(
                not boundary_admissibility(solution, side, settings=self.settings).passed(tol) for side in sides
            )
        except FrontTrackingError:
            flags['boundary_admissibility'] = True
        flags['entropy'] = self._entropy_search(solution, where, pairs, bumps, rng)
        return flags

    def _entropy_search(self, solution: Solution, where, pairs: int, bumps: int,
                        rng: np.random.Generator) -> bool:
        """Bump search for a negative entropy residual, starting with a bump centred at `where`."""
        T = solution.horizon
        width = solution.domain.end if solution.domain.is_segment else max(1.0, where[1])
        t0, x0 = where
        candidates = [BumpTestFunction(t0, x0, 0.25 * T, 0.25 * max(width, 1.0))]
        candidates += sample_bumps(solution, bumps, rng)
        scale = max(1.0, solution.max_speed())
        for pair in sample_pairs(solution, pairs, rng):
            for phi in candidates:
                try:
                    residual = entropy_residual(solution, pair, phi, settings=self.settings)
                except QuadratureBudgetExceeded:
                    continue
                except FrontTrackingError:
                    return True
                if residual < -entropy_tolerance(phi, scale, self.settings):
                    return True
        return False

    def mutation_study(self, solution: Solution, count: int = 100,
                       rng: Optional[np.random.Generator] = None,
                       pairs: int = 2, bumps: int = 2) -> Dict[str, Any]:
        """Tamper with stored snapshots `count` times and count which checks catch each copy.

        Checks that already reject the untampered solution are listed under
        `baseline` and do not count as catching a tampered copy.
        """
        rng = rng or np.random.default_rng(0)
        centre = (0.5 * solution.horizon, 0.5 * solution.domain.end if solution.domain.is_segment else 0.5)
        baseline = [name for name, hit in self._tamper_flags(solution, centre, pairs, bumps, rng).items() if hit]
        if baseline:
            self.logger.warning(f"Mutation study: untampered solution already fails {baseline}")

        by_check = {name: 0 for name in MUTATION_CHECKS}
        flagged = 0
        for _ in range(count):
            tampered, where = mutate_solution(solution, rng)
            hits = [name for name, hit in self._tamper_flags(tampered, where, pairs, bumps, rng).items()
                    if hit and name not in baseline]
            for name in hits:
                by_check[name] += 1
            if hits:
                flagged += 1
            else:
                self.logger.warning(f"Mutation at t={where[0]:.6g}, x={where[1]:.6g} went undetected")
        self.logger.info(f"Mutation study: {flagged}/{count} flagged, by check {by_check}")
        return {
            'total': count,
            'flagged': flagged,
            'rate': flagged / count if count else 0.0,
            'by_check': by_check,
            'baseline': baseline,
        }

    def _campaign_run(self, index: int, seed: int, pairs: int, bumps: int) -> Dict[str, Any]:
        rng = np.random.default_rng([seed, index])
        problem = random_problem(rng)
        solution = self.tracker.run(problem)
        result = self.verify_solution(solution, problem.flux, pairs, bumps, rng)
        result.update({
            'run': index,
            'domain': problem.domain.kind,
            'events': len(solution.events),
            'fronts': len(solution.snapshots[-1].fronts),
        })
        return result

    def run_campaign(self, runs: int = 200, seed: int = 0, pairs: int = 4, bumps: int = 3,
                     workers: Optional[int] = None) -> Dict[str, Any]:
        """Randomized campaign over fluxes, data and domains on `workers` threads."""
        workers = workers or self.settings.worker_threads
        results = {
            'total': runs,
            'workers': workers,
            'processed': 0,
            'errors': 0,
            'violations': 0,
            'results': []
        }

        with ThreadPoolExecutor(max_workers=workers) as executor:
            future_to_run = {
                executor.submit(self._campaign_run, i, seed, pairs, bumps): i
                for i in range(runs)
            }

            for future in as_completed(future_to_run):
                index = future_to_run[future]
                try:
                    result = future.result()
                    results['processed'] += 1
                    if not result['passed']:
                        results['violations'] += 1
                        self.logger.warning(f"Campaign run {index} failed: {result['failures']}")
                    results['results'].append(result)
                except FrontTrackingError as e:
                    results['errors'] += 1
                    self.logger.error(f"Error in campaign run {index}: {e}")

        results['results'].sort(key=lambda r: r['run'])
        return results

    def render_report(self, results: Dict[str, Any], mutation: Optional[Dict[str, Any]] = None) -> str:
        """Aligned-text rendering of a campaign or verification result."""
        return REPORT_TEMPLATE.render(mutation=mutation, **results)


def run_campaign(runs: int = 200, seed: int = 0, settings: Optional[Settings] = None) -> Dict[str, Any]:
    return VerificationManager(settings).run_campaign(runs, seed)
