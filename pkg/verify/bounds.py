"""Per-run bound report: range, total variation, time-Lipschitz, Glimm and termination."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from config import Settings, get_settings
from core import get_logger
from stepfn import tv
from tracker import Solution, glimm_is_monotone, termination_ledger
from .stability import data_variation, lipschitz_check, within

logger = get_logger(__name__)


@dataclass(frozen=True)
class BoundCheck:
    name: str
    passed: bool
    margin: float
    detail: str = ''

    def to_dict(self) -> Dict[str, Any]:
        return {'name': self.name, 'passed': self.passed, 'margin': self.margin, 'detail': self.detail}


@dataclass
class BoundReport:
    checks: List[BoundCheck] = field(default_factory=list)
    glimm: List[List[float]] = field(default_factory=list)
    ledger_failures: List[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> BoundCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'passed': self.passed,
            'checks': [c.to_dict() for c in self.checks],
            'glimm': self.glimm,
            'ledger_failures': self.ledger_failures,
        }


def _range_check(solution: Solution) -> BoundCheck:
    data = solution.data
    grids = [data.u_o, data.u_b] + ([data.u_b2] if data.u_b2 is not None else [])
    lo = min(g.index_range[0] for g in grids)
    hi = max(g.index_range[1] for g in grids)
    states = solution.state_indices()
    low, high = min(states), max(states)
    margin = min(low - lo, hi - high) * solution.eps
    return BoundCheck('range', margin >= 0, margin,
                      f"states [{low * solution.eps}, {high * solution.eps}] in hull "
                      f"[{lo * solution.eps}, {hi * solution.eps}]")


def _tv_check(solution: Solution, settings: Settings) -> BoundCheck:
    passed, worst, worst_t = True, float('inf'), 0.0
    for t in solution.snapshot_times + [solution.horizon]:
        measured = tv(solution.profile_at(t))
        bound = data_variation(solution.data, t)
        passed = passed and within(measured, bound, settings.bound_slack)
        if bound - measured < worst:
            worst, worst_t = bound - measured, t
    return BoundCheck('total_variation', passed, worst, f"tightest at t={worst_t}")


def _lipschitz_check(solution: Solution, settings: Settings) -> BoundCheck:
    times = [float(t) for t in np.linspace(0.0, solution.horizon, settings.lipschitz_grid_points)]
    rows = lipschitz_check(solution, times)
    failures = [r for r in rows if not r[4]]
    margin = min((r[3] - r[2] for r in rows), default=0.0)
    detail = f"{len(rows)} pairs"
    if failures:
        t1, t2, measured, bound, _ = failures[0]
        detail += f", first violation on [{t1}, {t2}]: {measured} > {bound}"
    return BoundCheck('time_lipschitz', not failures, margin, detail)


def _glimm_check(solution: Solution) -> BoundCheck:
    values = [v for _, v in solution.glimm]
    margin = min((a - b for a, b in zip(values, values[1:])), default=0) * solution.eps
    return BoundCheck('glimm_monotone', glimm_is_monotone(solution), margin,
                      f"V from {values[0] * solution.eps} to {values[-1] * solution.eps}")


def _ledger_check(solution: Solution) -> BoundCheck:
    ledger = termination_ledger(solution.events)
    failures = [i for i, ok in enumerate(ledger) if not ok]
    return BoundCheck('termination', not failures, float(len(ledger) - len(failures)),
                      f"{len(failures)} of {len(ledger)} events failed")


def bound_report(solution: Solution, settings: Optional[Settings] = None) -> BoundReport:
    """Check the certified bounds of one run with margins."""
    settings = settings or get_settings()
    report = BoundReport()
    report.checks.append(_range_check(solution))
    report.checks.append(_tv_check(solution, settings))
    report.checks.append(_lipschitz_check(solution, settings))
    report.checks.append(_glimm_check(solution))
    report.checks.append(_ledger_check(solution))
    report.glimm = [[t, v * solution.eps] for t, v in solution.glimm]
    report.ledger_failures = [i for i, ok in enumerate(termination_ledger(solution.events)) if not ok]

    for check in report.checks:
        if not check.passed:
            logger.warning(f"Bound check {check.name} failed: {check.detail}")
    return report
