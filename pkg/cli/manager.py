"""Experiment management: runs the solver, studies and verifier from a config and writes artifacts."""

from concurrent.futures import ThreadPoolExecutor, as_completed
from itertools import product
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from config import Settings, get_settings
from config.experiment import ExperimentConfig, StudyOptions
from core import ConfigError, FrontTrackingError, get_logger, sanitize_filename
from flux import SpaceTimeFlux
from nonaut import ConvergenceStudy, bound_constants, slab_chain_holds
from verify import (
    VerificationManager, bound_report, flux_stability_check, front_checks, profile_discrepancy, solve,
    time_continuity
)
from . import artifacts


class SolveManager:
    """Runs one command of an experiment and writes its artifacts into an output directory."""

    def __init__(self, settings: Optional[Settings] = None, jobs: Optional[int] = None):
        self.settings = settings or get_settings()
        self.logger = get_logger(self.__class__.__name__)
        self.jobs = jobs or self.settings.worker_threads
        self.verifier = VerificationManager(self.settings)

    def output_dir(self, config: Optional[ExperimentConfig], out: Optional[str] = None) -> Path:
        """--out, then the config's output_dir, then the settings default; created if missing."""
        path = Path(out or (config.output_dir if config else None) or self.settings.output_dir)
        path.mkdir(parents=True, exist_ok=True)
        return path

    def cmd_solve(self, config: ExperimentConfig, out: Path) -> Dict[str, Any]:
        """Solve and write profiles.csv, events.jsonl, solution.json and bounds.json."""
        problem = config.to_problem()
        solution = solve(problem, config.depth, self.settings)

        times = artifacts.profile_times(solution, config.time_grid())
        profiles = [(t, solution.profile_at(t)) for t in times]
        artifacts.write_profiles(out / artifacts.PROFILES, profiles)
        artifacts.write_events(out / artifacts.EVENTS, solution)
        artifacts.write_solution(out / artifacts.SOLUTION, solution)

        report = bound_report(solution, self.settings)
        payload = report.to_dict()
        payload['constants'] = {k: v for k, v in solution.metadata.items() if isinstance(v, (int, float))}
        if 'slab_glimm' in solution.metadata:
            payload['slab_chain'] = slab_chain_holds(solution)
        payload['digests'] = {
            name: artifacts.digest(out / name) for name in (artifacts.PROFILES, artifacts.EVENTS)
        }
        artifacts.write_json(out / artifacts.BOUNDS, payload)

        self.logger.info(f"Solved to T={config.horizon}: {len(solution.events)} events, "
                         f"{len(solution.snapshots[-1].fronts)} fronts, bounds {'ok' if report.passed else 'VIOLATED'}")
        return {
            'passed': report.passed and payload.get('slab_chain', True),
            'events': len(solution.events),
            'fronts': len(solution.snapshots[-1].fronts),
            'failures': [c.name for c in report.checks if not c.passed],
            'out': str(out),
        }

    def cmd_compare_flux(self, config: ExperimentConfig, out: Path) -> Dict[str, Any]:
        """Flux stability of the solutions for f and g, written to stability.csv."""
        if config.flux_g is None:
            raise ConfigError("compare-flux needs a second flux 'flux_g'")
        problem = config.to_problem()
        rows = flux_stability_check(problem.flux, config.flux_g.to_flux(), problem,
                                    config.time_grid(), config.depth, self.settings)
        artifacts.write_table(out / 'stability.csv', ['t', 'measured', 'bound', 'pass'],
                              (r.as_row() for r in rows))
        violations = sum(1 for r in rows if not r.passed)
        self.logger.info(f"Flux stability: {len(rows)} times, {violations} violations")
        return {'passed': violations == 0, 'rows': len(rows), 'violations': violations, 'out': str(out)}

    def cmd_nonaut(self, config: ExperimentConfig, out: Path) -> Dict[str, Any]:
        """Cauchy study over the configured depths into cauchy.csv and constants.json."""
        depths = config.depths or ([config.depth] if config.depth is not None else None)
        if not depths:
            raise ConfigError("nonaut needs 'depths' (or 'depth')")
        problem = config.to_problem()
        study = ConvergenceStudy(self.settings)
        rows = study.cauchy_study(problem, depths, config.options.cauchy_samples)
        artifacts.write_table(out / 'cauchy.csv', ['depth', 'sup_distance', 'bound', 'ratio', 'pass'],
                              (r.as_row() + [int(r.passed)] for r in rows))
        artifacts.write_json(out / 'constants.json', bound_constants(problem).to_dict())

        result = {
            'passed': all(r.passed for r in rows),
            'rows': len(rows),
            'violations': sum(1 for r in rows if not r.passed),
            'out': str(out),
        }
        if config.eps_list:
            t = config.options.refinement_time if config.options.refinement_time is not None else config.horizon
            refinement = study.eps_refinement_study(problem, config.eps_list, t, depths[0])
            artifacts.write_table(out / 'refinement.csv', ['eps', 'eps_next', 'distance'],
                                  ([r.eps, r.eps_next, r.distance] for r in refinement))
            result['refinement'] = [r.distance for r in refinement]
        return result

    def cmd_verify(self, config: ExperimentConfig, artifacts_dir: Path, out: Path, seed: int = 0) -> Dict[str, Any]:
        """Re-import a solve's artifacts and check fronts, profiles, bounds and entropy inequalities."""
        header = artifacts.read_solution_header(artifacts_dir / artifacts.SOLUTION)
        events = artifacts.read_events(artifacts_dir / artifacts.EVENTS, float(header.get('eps', config.eps)))
        solution = artifacts.solution_from_events(header, events, config.flux.to_flux())
        profiles = artifacts.read_profiles(artifacts_dir / artifacts.PROFILES, solution.domain.end)

        rng = np.random.default_rng(seed)
        options = config.options
        result = self.verifier.verify_solution(solution, pairs=options.pairs, bumps=options.bumps, rng=rng)

        fronts = front_checks(solution)
        if fronts['rankine_hugoniot'] > self.settings.bound_slack:
            result['failures'].append('rankine_hugoniot')
        if fronts['oleinik'] > self.settings.bound_slack:
            result['failures'].append('oleinik')
        if fronts['states'] > 0:
            result['failures'].append('states')
        jump = time_continuity(solution)
        if jump > self.settings.quadrature_tolerance:
            result['failures'].append('time_continuity')
        discrepancy = profile_discrepancy(solution, profiles)
        if discrepancy > self.settings.quadrature_tolerance:
            result['failures'].append('profiles')
        result['passed'] = not result['failures']
        result['fronts_check'] = fronts
        result['profile_discrepancy'] = discrepancy
        result['time_continuity'] = jump

        mutation = None
        if options.mutations:
            mutation = self.verifier.mutation_study(solution, options.mutations, rng, options.pairs, options.bumps)
            result['mutation'] = mutation

        summary = {
            'total': 1, 'processed': 1, 'errors': 0, 'violations': 0 if result['passed'] else 1,
            'results': [{
                'run': 0, 'domain': solution.domain.kind, 'events': len(solution.events),
                'fronts': len(solution.snapshots[-1].fronts), 'min_entropy': result['min_entropy'],
                'max_boundary': result['max_boundary'], 'passed': result['passed'],
                'failures': result['failures'],
            }],
        }
        artifacts.write_json(out / 'verify.json', result)
        (out / 'report.txt').write_text(self.verifier.render_report(summary, mutation), encoding='utf-8')
        if not result['passed']:
            self.logger.warning(f"Verification failed: {result['failures']}")
        return result

    def cmd_campaign(self, config: Optional[ExperimentConfig], out: Path, seed: int = 0) -> Dict[str, Any]:
        """Randomized verification campaign; campaign.json and report.txt."""
        options = config.options if config else StudyOptions()
        results = self.verifier.run_campaign(options.runs, seed, options.pairs, options.bumps, workers=self.jobs)
        artifacts.write_json(out / 'campaign.json', results)
        (out / 'report.txt').write_text(self.verifier.render_report(results), encoding='utf-8')
        results['passed'] = results['violations'] == 0 and results['errors'] == 0
        return results

    def _cell_name(self, eps: float, depth: Optional[int]) -> str:
        return sanitize_filename(f"eps_{eps!r}_depth_{'auto' if depth is None else depth}")

    def _sweep_cell(self, config: ExperimentConfig, out: Path) -> Dict[str, Any]:
        cell_dir = out / self._cell_name(config.eps, config.depth)
        cell_dir.mkdir(parents=True, exist_ok=True)
        result = self.cmd_solve(config, cell_dir)
        result.update({'eps': config.eps, 'depth': config.depth})
        return result

    def cmd_sweep(self, config: ExperimentConfig, out: Path) -> Dict[str, Any]:
        """cmd_solve over the eps × depth grid of the sweep section, one subdirectory per cell."""
        sweep = config.sweep
        eps_values: List[float] = (sweep.eps if sweep and sweep.eps else None) or config.eps_list or [config.eps]
        depth_values: List[Optional[int]] = (sweep.depth if sweep and sweep.depth else None) or [config.depth]
        cells = [config.model_copy(update={'eps': e, 'depth': n}) for e, n in product(eps_values, depth_values)]

        results = {
            'total': len(cells),
            'processed': 0,
            'errors': 0,
            'violations': 0,
            'results': []
        }

        with ThreadPoolExecutor(max_workers=self.jobs) as executor:
            future_to_cell = {executor.submit(self._sweep_cell, cell, out): cell for cell in cells}

            for future in as_completed(future_to_cell):
                cell = future_to_cell[future]
                try:
                    result = future.result()
                    results['processed'] += 1
                    if not result['passed']:
                        results['violations'] += 1
                    results['results'].append(result)
                except FrontTrackingError as e:
                    results['errors'] += 1
                    self.logger.error(f"Error in sweep cell eps={cell.eps} depth={cell.depth}: {e}")

        results['results'].sort(key=lambda r: (r['eps'], -1 if r['depth'] is None else r['depth']))
        artifacts.write_table(out / 'sweep.csv', ['eps', 'depth', 'events', 'fronts', 'pass'],
                              ([r['eps'], 'auto' if r['depth'] is None else r['depth'],
                                r['events'], r['fronts'], int(r['passed'])] for r in results['results']))
        results['passed'] = results['violations'] == 0 and results['errors'] == 0
        return results


def cell_count(config: ExperimentConfig) -> int:
    sweep = config.sweep
    n_eps = len(sweep.eps) if sweep and sweep.eps else len(config.eps_list or [config.eps])
    n_depth = len(sweep.depth) if sweep and sweep.depth else 1
    return n_eps * n_depth


def flux_label(flux: SpaceTimeFlux) -> str:
    return 'autonomous' if flux.is_autonomous else 'time-dependent'
