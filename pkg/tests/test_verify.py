"""Test the verifier: entropy residuals, boundary admissibility, stability and bound reports."""

from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from config import Settings
from core import DomainError
from flux import SpaceTimeFlux
from stepfn import StepFunction
from tracker import Problem, Snapshot, run
from verify import (
    BumpTestFunction, SemiEntropyPair, VerificationManager, boundary_admissibility,
    boundary_distance, boundary_flux_F, bound_report, contraction_check, entropy_residual,
    flux_stability_check, front_checks, mutate_solution, profile_discrepancy, sample_bumps, sample_pairs,
    time_continuity
)


BURGERS = SpaceTimeFlux.burgers()


def shock_problem(**changes):
    fields = dict(
        flux=BURGERS, u_o=StepFunction.make([1.0], [1.0, 0.0]),
        u_b=StepFunction.constant(1.0, 0.0, 1.0), eps=1.0, horizon=1.0,
    )
    fields.update(changes)
    return Problem(**fields)


def absorbing_problem():
    return Problem(flux=BURGERS, u_o=StepFunction.constant(-1.0),
                   u_b=StepFunction.constant(0.0, 0.0, 1.0), eps=1.0, horizon=1.0)


@pytest.fixture
def shock():
    return run(shock_problem(), Settings())


def test_semi_entropy_pair():
    """Test η_k^± and Φ_k^±."""
    plus = SemiEntropyPair(1, 0.5)
    minus = SemiEntropyPair(-1, 0.5)
    f = lambda u: 0.5 * u * u

    assert plus.eta(1.0) == 0.5
    assert plus.eta(0.0) == 0.0
    assert minus.eta(0.0) == 0.5
    assert plus.flux(f, 1.0) == pytest.approx(0.375)
    assert minus.flux(f, 0.0) == pytest.approx(0.125)
    assert plus.flux(f, 0.5) == 0.0
    with pytest.raises(ValueError):
        SemiEntropyPair(0, 0.0)


def test_bump_test_function():
    """Test the bump shape, its support and exact integrals."""
    phi = BumpTestFunction(0.5, 1.0, 0.25, 0.5)

    assert phi(0.5, 1.0) == 1.0
    assert phi(0.8, 1.0) == 0.0
    assert phi.x_integral(0.0, 2.0) == pytest.approx(0.5 * 16.0 / 15.0)
    assert phi.x_integral_prime(0.0, 1.0) == pytest.approx(1.0)
    assert phi.mass == pytest.approx(0.25 * 0.5 * (16.0 / 15.0) ** 2)
    with pytest.raises(DomainError):
        BumpTestFunction(0.0, 0.0, 0.0, 1.0)


def test_entropy_residual_vanishes_above_hull(shock):
    """Test that k above every state gives exactly zero."""
    phi = BumpTestFunction(0.5, 0.5, 0.4, 1.0)
    assert entropy_residual(shock, SemiEntropyPair(1, 5.0), phi) == 0.0


def test_entropy_residual_shock_is_weak_solution(shock):
    """Test the weak-solution identity for the shock with k below the states."""
    phi = BumpTestFunction(0.5, 1.25, 0.4, 0.5)
    residual = entropy_residual(shock, SemiEntropyPair(1, -1.0), phi)
    assert residual == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("sign", [1, -1])
def test_entropy_residual_absorbing_boundary(sign):
    """Test nonnegative residuals when the boundary absorbs the datum."""
    solution = run(absorbing_problem(), Settings())
    phi = BumpTestFunction(0.5, 0.0, 0.4, 0.5)

    assert entropy_residual(solution, SemiEntropyPair(sign, -0.5), phi, f=BURGERS) >= 0.0


def test_entropy_residual_flags_wrong_shock_speed():
    """Test that a front moving at the wrong speed gives a negative residual somewhere."""
    solution = run(shock_problem(), Settings())
    tampered = run(shock_problem(flux=SpaceTimeFlux.from_terms({(0, 2): 0.5, (0, 1): 0.5})), Settings())
    # transport the wrong-speed fronts under the Burgers flux
    tampered.segments = solution.segments

    residuals = [
        entropy_residual(tampered, SemiEntropyPair(s, k), BumpTestFunction(0.5, 1.5, 0.4, 0.6))
        for s in (1, -1) for k in (-1.0, 2.0)
    ]
    assert min(residuals) < -1e-6


def test_entropy_residual_exact_flux_carries_interpolation_error():
    """Test that exact=True builds Φ from f, while f alone only widens the boundary weight."""
    solution = run(shock_problem(eps=0.5), Settings())
    pair = SemiEntropyPair(1, 0.25)
    phi = BumpTestFunction(0.5, 1.25, 0.4, 0.5)

    plc = entropy_residual(solution, pair, phi)
    assert entropy_residual(solution, pair, phi, f=BURGERS) == plc
    # f(0.25) is 0.03125 exactly and 0.0625 on the PLC interpolant
    assert abs(entropy_residual(solution, pair, phi, f=BURGERS, exact=True) - plc) > 1e-3
    with pytest.raises(DomainError):
        entropy_residual(solution, pair, phi, exact=True)


@pytest.mark.parametrize("u, w, k, expected", [
    (-1.0, 0.0, -0.5, -0.375),
    (1.0, 0.0, 0.5, 0.375),
    (0.3, 0.3, 0.0, 0.0),
    (0.3, 0.3, 1.0, 0.0),
])
def test_boundary_flux_F(u, w, k, expected):
    """Test case selection of 𝓕ᵏ on Burgers."""
    assert boundary_flux_F(BURGERS, 0.0, u, w, k) == pytest.approx(expected)


def test_boundary_distance():
    """Test Δᵏ(u, w)."""
    assert boundary_distance(2.0, 0.0, 1.0) == 1.0
    assert boundary_distance(-1.0, 0.0, 1.0) == 1.0
    assert boundary_distance(0.5, 1.0, 0.0) == 0.0


@settings(max_examples=200, deadline=None)
@given(u=st.floats(-2.0, 2.0), w=st.floats(-2.0, 2.0), k=st.floats(-2.0, 2.0), side=st.sampled_from(['left', 'right']))
def test_boundary_flux_F_continuity(u, w, k, side):
    """Test that 𝓕ᵏ is Lipschitz in u across its case boundaries."""
    delta = 1e-9
    a = boundary_flux_F(BURGERS, 0.0, u, w, k, side)
    b = boundary_flux_F(BURGERS, 0.0, u + delta, w, k, side)
    assert abs(a - b) <= 3.0 * delta + 1e-15


def test_boundary_admissibility_examples(shock):
    """Test the absorbing and the matching-datum cases."""
    absorbing = boundary_admissibility(run(absorbing_problem(), Settings()), 'left')
    assert absorbing.max_flux == 0.0
    assert absorbing.worst_k == -1
    assert absorbing.max_violation == 0.0
    assert absorbing.passed(1e-12)

    matching = boundary_admissibility(shock, 'left')
    assert matching.checked == 0
    assert matching.max_violation == 0.0
    assert boundary_admissibility(shock, 'right').checked == 0


def test_contraction_identical_data():
    """Test that identical data give zero distance and zero bound."""
    rows = contraction_check(shock_problem(), shock_problem(), [0.0, 0.5, 1.0], settings=Settings())
    assert [(r.measured, r.bound) for r in rows] == [(0.0, 0.0)] * 3
    assert all(r.passed for r in rows)


def test_contraction_initial_perturbation():
    """Test measured ≤ ‖u_o − w_o‖₁ for a shifted initial jump."""
    other = shock_problem(u_o=StepFunction.make([1.25], [1.0, 0.0]))
    rows = contraction_check(shock_problem(), other, [0.0, 0.5, 1.0], settings=Settings())

    assert all(r.bound == pytest.approx(0.25) for r in rows)
    assert rows[-1].measured == pytest.approx(0.25)
    assert all(r.passed for r in rows)


def test_contraction_boundary_perturbation():
    """Test measured ≤ ‖∂ᵤf‖·‖Δu_b‖_{L¹(0,t)}."""
    other = shock_problem(u_b=StepFunction.make([0.5], [0.0, 1.0], 0.0, 1.0))
    rows = contraction_check(shock_problem(), other, [0.25, 0.5, 1.0], settings=Settings())

    assert rows[-1].bound == pytest.approx(0.5)
    assert all(r.passed for r in rows)


def test_flux_stability_bound():
    """Test f = u²/2 against g = u²/2 + 0.1u: the bound is 0.11 at t = 1."""
    g = SpaceTimeFlux.from_terms({(0, 2): 0.5, (0, 1): 0.1})
    rows = flux_stability_check(BURGERS, g, shock_problem(), [0.0, 1.0], settings=Settings())

    assert rows[0].bound == 0.0
    assert rows[1].bound == pytest.approx(0.11)
    assert rows[1].measured == pytest.approx(0.1)
    assert all(r.passed for r in rows)
    assert flux_stability_check(BURGERS, BURGERS, shock_problem(), [1.0], settings=Settings())[0].measured == 0.0


def test_flux_stability_halving():
    """Test that halving ‖∂ᵤ(f − g)‖ halves the bound."""
    g1 = SpaceTimeFlux.from_terms({(0, 2): 0.5, (0, 1): 0.1})
    g2 = SpaceTimeFlux.from_terms({(0, 2): 0.5, (0, 1): 0.05})
    b1 = flux_stability_check(BURGERS, g1, shock_problem(), [1.0], settings=Settings())[0]
    b2 = flux_stability_check(BURGERS, g2, shock_problem(), [1.0], settings=Settings())[0]

    assert b2.bound == pytest.approx(0.5 * 1.05 / 1.1 * b1.bound)
    assert b2.measured <= b1.measured


def test_bound_report_single_shock(shock):
    """Test TV(t) = 1 against the bound 1 and the other checks."""
    report = bound_report(shock, Settings())

    assert report.passed
    assert report.check('total_variation').margin == pytest.approx(0.0)
    assert report.check('range').passed
    assert report.check('termination').passed
    assert report.to_dict()['ledger_failures'] == []
    with pytest.raises(KeyError):
        report.check('missing')


def test_bound_report_constant_solution():
    """Test that a constant run passes every check."""
    problem = Problem(flux=BURGERS, u_o=StepFunction.constant(0.5),
                      u_b=StepFunction.constant(0.5, 0.0, 1.0), eps=0.5, horizon=1.0)
    report = bound_report(run(problem, Settings()), Settings())

    assert report.passed
    assert report.glimm == [[0.0, 0.0]]


def test_sampling(shock):
    """Test pair and bump sampling."""
    rng = np.random.default_rng(0)
    pairs = sample_pairs(shock, 3, rng)
    bumps = sample_bumps(shock, 4, rng)

    assert len(pairs) == 6
    assert {p.sign for p in pairs} == {1, -1}
    assert len(bumps) == 4
    assert all(0.0 <= b.t0 <= 1.0 for b in bumps)


def test_verify_solution_passes(shock):
    """Test the full verification of a correct run."""
    result = VerificationManager(Settings()).verify_solution(
        shock, BURGERS, pairs=4, bumps=4, rng=np.random.default_rng(1),
    )

    assert result['passed'], result['failures']
    assert result['entropy']['violations'] == 0
    assert result['max_boundary'] == 0.0


def test_profiles_and_mutations(shock):
    """Test that stored profiles match and that tampered solutions are flagged."""
    profiles = [(0.0, shock.profile_at(0.0)), (1.0, shock.profile_at(1.0))]
    assert profile_discrepancy(shock, profiles) == 0.0
    assert profile_discrepancy(shock, [(1.0, StepFunction.make([1.4], [1.0, 0.0]))]) == pytest.approx(0.1)
    assert front_checks(shock) == {'rankine_hugoniot': 0.0, 'oleinik': 0.0, 'states': 0.0}
    assert time_continuity(shock) == 0.0

    rng = np.random.default_rng(3)
    tampered, (t, x) = mutate_solution(shock, rng)
    assert tampered.snapshots != shock.snapshots
    assert shock.snapshots[0].fronts[0].speed == 0.5
    assert 0.0 <= t <= shock.horizon

    study = VerificationManager(Settings()).mutation_study(shock, count=20, rng=rng)
    assert study['total'] == 20
    assert study['flagged'] == 20
    assert study['rate'] == 1.0
    assert study['baseline'] == []
    assert sum(study['by_check'].values()) >= 20


def test_tampered_speed_fails_rankine_hugoniot_and_entropy(shock):
    """Test that a front moved at the wrong speed is caught by the front and entropy checks."""
    front = shock.snapshots[0].fronts[0]
    tampered = replace(shock, snapshots=[Snapshot(0.0, (replace(front, speed=1.0),), 1)])

    assert front_checks(tampered)['rankine_hugoniot'] == 0.5
    residuals = [
        entropy_residual(tampered, SemiEntropyPair(s, k), BumpTestFunction(0.5, 1.5, 0.4, 0.6))
        for s in (1, -1) for k in (-1.0, 2.0)
    ]
    assert min(residuals) < -1e-6


def test_tampered_trace_breaks_state_chain(shock):
    """Test that a trace moved by ε is caught by the state chain and time continuity."""
    front = shock.snapshots[0].fronts[0]
    tampered = replace(shock, snapshots=[Snapshot(0.0, (front,), 0)])

    assert front_checks(tampered)['states'] == 1.0
    assert time_continuity(tampered) == pytest.approx(1.0)


def test_small_campaign():
    """Test a short randomized campaign and its text report."""
    manager = VerificationManager(Settings(worker_threads=2))
    results = manager.run_campaign(runs=3, seed=7, pairs=2, bumps=2)

    assert results['total'] == 3
    assert results['processed'] + results['errors'] == 3
    assert results['violations'] == 0
    assert [r['run'] for r in results['results']] == sorted(r['run'] for r in results['results'])
    assert results['workers'] == 2
    assert manager.run_campaign(runs=1, seed=7, pairs=2, bumps=2, workers=1)['workers'] == 1

    text = manager.render_report(results, {'total': 5, 'flagged': 5})
    assert text.startswith("Verification report")
    assert "mutations flagged: 5 / 5" in text
