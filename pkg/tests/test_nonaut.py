"""Test the dyadic solver, the bound constants and the convergence studies."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from config import Settings
from core import DomainError
from flux import SpaceTimeFlux, random_flux
from nonaut import (
    ConvergenceStudy, SlabSchedule, bound_constants, data_total_variation, dyadic_solve,
    shift_grid, slab_chain_holds, time_grid
)
from stepfn import GridStepFunction, StepFunction
from tracker import Problem, glimm_is_monotone, profile_from_snapshot, run


def transport_problem(flux):
    return Problem(
        flux=flux,
        u_o=StepFunction.make([1.0], [1.0, 0.0]),
        u_b=StepFunction.constant(1.0, 0.0, 1.0),
        eps=1.0, horizon=1.0,
    )


GROWING_SPEED = SpaceTimeFlux.from_terms({(0, 1): 1.0, (1, 1): 1.0})


def test_slab_schedule():
    """Test dyadic endpoints and the left-endpoint freeze times."""
    schedule = SlabSchedule(2, 1.0)

    assert schedule.count == 4
    assert schedule.endpoints == (0.0, 0.25, 0.5, 0.75, 1.0)
    assert schedule.freeze_times == (0.0, 0.25, 0.5, 0.75)
    assert schedule.slabs()[1] == (1, 0.25, 0.5)
    with pytest.raises(DomainError):
        SlabSchedule(-1, 1.0)


def test_shift_grid():
    """Test restricting boundary data to a slab."""
    datum = GridStepFunction.make(0.5, [0.25, 0.75], [0, 1, 2], 0.0, 1.0)
    shifted = shift_grid(datum, 0.5, 0.5)

    assert shifted.breakpoints == (0.25,)
    assert shifted.indices == (1, 2)
    assert shifted.end == 0.5


@pytest.mark.parametrize("depth, position", [(0, 2.0), (1, 2.25), (2, 2.375)])
def test_front_displacement_per_slab(depth, position):
    """Test f = (1 + t)u: the front moves at 1 + T_n^i on slab i."""
    solution = dyadic_solve(transport_problem(GROWING_SPEED), depth, Settings())

    assert solution.final_profile == StepFunction.make([position], [1.0, 0.0])
    assert len(solution.segments) == 2 ** depth
    assert solution.metadata['slab_endpoints'][-1] == 1.0
    assert slab_chain_holds(solution)


def test_autonomous_flux_is_depth_independent():
    """Test that freezing an autonomous flux changes nothing."""
    problem = transport_problem(SpaceTimeFlux.burgers())
    reference = run(problem, Settings())

    for depth in (0, 1, 3):
        solution = dyadic_solve(problem, depth, Settings())
        for t in (0.0, 0.375, 0.5, 1.0):
            assert solution.profile_at(t) == reference.profile_at(t)


def test_slab_chaining_is_exact():
    """Test that slab i starts from the final profile of slab i − 1."""
    solution = dyadic_solve(transport_problem(GROWING_SPEED), 2, Settings())

    for start in (0.25, 0.5, 0.75):
        i = solution.snapshot_times.index(start)
        before = profile_from_snapshot(solution.snapshots[i - 1], start, solution.domain, solution.eps)
        after = profile_from_snapshot(solution.snapshots[i], start, solution.domain, solution.eps)
        assert before == after


def test_bound_constants_examples():
    """Test L, K, M and O on hand-evaluated problems."""
    burgers = bound_constants(transport_problem(SpaceTimeFlux.burgers()))
    assert burgers.L == pytest.approx(2.0)
    assert burgers.K == 1.0
    assert burgers.M == 0.0
    assert burgers.O == 0.0

    zero = bound_constants(transport_problem(SpaceTimeFlux.zero()))
    assert zero.L == pytest.approx(1.0)
    assert zero.O == 0.0

    quadratic = SpaceTimeFlux.from_terms({(0, 2): 0.5, (1, 2): 0.5})
    constants = bound_constants(transport_problem(quadratic))
    assert constants.hull == (0.0, 1.0)
    assert constants.L == pytest.approx(3.0)
    assert constants.M == pytest.approx(1.0)
    assert constants.O == pytest.approx(0.75)
    assert constants.cauchy_bound(1) == pytest.approx(0.375)
    assert set(constants.to_dict()) == {'L', 'K', 'M', 'O', 'C', 'hull', 'T'}


def test_data_total_variation_includes_mismatch():
    """Test that the initial boundary mismatch counts."""
    problem = Problem(
        flux=SpaceTimeFlux.burgers(), u_o=StepFunction.constant(0.0),
        u_b=StepFunction.make([0.5], [1.0, 0.0], 0.0, 1.0), eps=1.0, horizon=1.0,
    )
    assert data_total_variation(problem) == 2.0
    assert data_total_variation(problem, 0.25) == 1.0


def test_time_grid_merges_extra_points():
    """Test uniform samples merged with slab endpoints."""
    assert time_grid(1.0, 2, (0.25, 2.0)) == [0.0, 0.25, 0.5, 1.0]


def test_cauchy_study_rates():
    """Test the Cauchy table for f = (1 + t)u: distances 1/4, 1/8 under O·2⁻ⁿ."""
    rows = ConvergenceStudy(Settings(worker_threads=2)).cauchy_study(
        transport_problem(GROWING_SPEED), [0, 1], samples=4,
    )

    assert [r.depth for r in rows] == [0, 1]
    assert rows[0].sup_distance == pytest.approx(0.25)
    assert rows[1].sup_distance == pytest.approx(0.125)
    assert rows[0].ratio == pytest.approx(2.0)
    assert math.isnan(rows[1].ratio)
    assert rows[0].bound == pytest.approx(0.75)
    assert all(r.passed for r in rows)
    assert len(rows[0].as_row()) == 4


def test_cauchy_study_autonomous_zero():
    """Test that an autonomous flux gives zero distances."""
    rows = ConvergenceStudy(Settings()).cauchy_study(transport_problem(SpaceTimeFlux.burgers()), [0, 1, 2], samples=4)

    assert [r.sup_distance for r in rows] == [0.0, 0.0, 0.0]
    assert rows[0].ratio == 1.0


def test_cauchy_study_rejects_unsorted_depths():
    """Test the depth list validation."""
    with pytest.raises(DomainError):
        ConvergenceStudy(Settings()).cauchy_study(transport_problem(GROWING_SPEED), [2, 1])


def test_eps_refinement_rarefaction():
    """Test that the boundary rarefaction converges as ε halves."""
    problem = Problem(
        flux=SpaceTimeFlux.burgers(), u_o=StepFunction.constant(1.0),
        u_b=StepFunction.constant(0.0, 0.0, 1.0), eps=0.5, horizon=1.0,
    )
    rows = ConvergenceStudy(Settings()).eps_refinement_study(problem, [0.5, 0.25, 0.125], 1.0)

    assert [(r.eps, r.eps_next) for r in rows] == [(0.5, 0.25), (0.25, 0.125)]
    assert rows[0].distance == pytest.approx(0.125)
    assert rows[1].distance == pytest.approx(0.0625)
    with pytest.raises(DomainError):
        ConvergenceStudy(Settings()).eps_refinement_study(problem, [0.5], 1.0)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), depth=st.integers(0, 2))
def test_fuzzed_slab_chain(seed, depth):
    """Test the slab Glimm chain and per-event monotonicity on random time-dependent fluxes."""
    rng = np.random.default_rng(seed)
    flux = random_flux(rng, deg_u=int(rng.integers(2, 4)), deg_t=1)
    xs = sorted(float(x) for x in rng.uniform(0.1, 2.0, size=3))
    u_o = StepFunction.make(xs, [float(v) for v in rng.choice([-1.0, -0.5, 0.0, 0.5, 1.0], size=4)])
    u_b = StepFunction.make([0.5], [float(v) for v in rng.choice([-1.0, 0.0, 1.0], size=2)], 0.0, 1.0)
    problem = Problem(flux=flux, u_o=u_o, u_b=u_b, eps=0.5, horizon=1.0)

    solution = dyadic_solve(problem, depth, Settings())

    assert slab_chain_holds(solution)
    assert glimm_is_monotone(solution)
    lo, hi = solution.data.hull
    for t in solution.metadata['slab_endpoints']:
        assert all(lo <= v <= hi for v in solution.profile_at(t).values)
