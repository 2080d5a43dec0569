"""Test polynomial fluxes and their PLC approximations."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from core import DomainError, GridError, RangeError
from flux import (
    SpaceTimeFlux, du, dt, dtdu, eval_flux, plc_approximate, random_flux, sup_du_norm,
    sup_dtdu_norm, grid_bounds
)


def test_builders_and_evaluation():
    """Test the flux builders and exact evaluation."""
    burgers = SpaceTimeFlux.burgers()
    assert burgers(0.0, 2.0) == 2.0
    assert SpaceTimeFlux.linear(3.0)(5.0, 2.0) == 6.0
    assert SpaceTimeFlux.zero()(1.0, 1.0) == 0.0

    f = SpaceTimeFlux.from_matrix([[0.0, 1.0], [0.0, 1.0]])
    assert not f.is_autonomous
    assert eval_flux(f, 2.0, 1.5) == pytest.approx(4.5)
    assert f == SpaceTimeFlux.from_terms({(0, 1): 1.0, (1, 1): 1.0})


def test_trailing_zeros_trimmed():
    """Test that zero rows and columns do not change the degrees."""
    f = SpaceTimeFlux.from_matrix([[0.0, 0.0, 0.5, 0.0], [0.0, 0.0, 0.0]])
    assert f.deg_u == 2
    assert f.deg_t == 0
    assert f.is_autonomous
    assert f == SpaceTimeFlux.burgers()


def test_derivatives():
    """Test ∂ᵤ, ∂ₜ and ∂ₜ∂ᵤ by coefficient shifting."""
    f = SpaceTimeFlux.from_terms({(0, 2): 0.5, (1, 2): 0.5})
    assert du(f)(1.0, 3.0) == pytest.approx(6.0)
    assert dt(f)(1.0, 2.0) == pytest.approx(2.0)
    assert dtdu(f)(0.0, 1.0) == pytest.approx(1.0)
    assert du(SpaceTimeFlux.from_terms({(1, 0): 2.0})) == SpaceTimeFlux.zero()


def test_difference_flux():
    """Test f − g."""
    f = SpaceTimeFlux.burgers()
    g = SpaceTimeFlux.from_terms({(0, 2): 0.5, (0, 1): 0.1})
    diff = f - g
    assert diff(0.0, 1.0) == pytest.approx(-0.1)
    assert (f - f) == SpaceTimeFlux.zero()


@pytest.mark.parametrize("f, t_box, u_box, expected", [
    (SpaceTimeFlux.burgers(), (0.0, 1.0), (0.0, 1.0), 1.0),
    (SpaceTimeFlux.from_terms({(0, 1): 1.0, (1, 1): 1.0}), (0.0, 2.0), (-1.0, 1.0), 3.0),
    (SpaceTimeFlux.from_terms({(0, 3): 1.0 / 3.0}), (0.0, 1.0), (-2.0, 1.0), 4.0),
])
def test_sup_du_norm(f, t_box, u_box, expected):
    """Test ‖∂ᵤf‖ over a box."""
    value = sup_du_norm(f, t_box, u_box)
    assert value >= expected
    assert value == pytest.approx(expected, rel=1e-9)


def test_sup_du_norm_interior_critical_point():
    """Test that an interior extremum of ∂ᵤf is found."""
    # ∂ᵤf = 1 - u² peaks at u = 0
    f = SpaceTimeFlux.from_terms({(0, 1): 1.0, (0, 3): -1.0 / 3.0})
    assert sup_du_norm(f, (0.0, 1.0), (-0.5, 0.5)) == pytest.approx(1.0)


def test_sup_dtdu_norm():
    """Test ‖∂ₜ∂ᵤf‖ for f = (1 + t)u²/2."""
    f = SpaceTimeFlux.from_terms({(0, 2): 0.5, (1, 2): 0.5})
    assert sup_dtdu_norm(f, (0.0, 1.0), (0.0, 1.0)) == pytest.approx(1.0)
    assert sup_dtdu_norm(SpaceTimeFlux.burgers(), (0.0, 1.0), (0.0, 1.0)) == 0.0


def test_sup_norm_empty_box():
    """Test that an empty box is rejected."""
    with pytest.raises(DomainError):
        sup_du_norm(SpaceTimeFlux.burgers(), (0.0, 1.0), (1.0, 0.0))


def test_plc_burgers():
    """Test the PLC interpolant of Burgers on ε = 0.5 over [0, 1]."""
    plc = plc_approximate(SpaceTimeFlux.burgers(), 0.0, 0.5, (0.0, 1.0))

    assert (plc.k_min, plc.k_max) == (0, 2)
    assert plc.nodes.tolist() == [0.0, 0.125, 0.5]
    assert plc.slopes.tolist() == [0.25, 0.75]
    assert plc.max_abs_slope() == 0.75
    assert plc.max_abs_slope() <= sup_du_norm(SpaceTimeFlux.burgers(), (0.0, 0.0), (0.0, 1.0))
    assert plc.chord_speed(0, 2) == 0.5
    assert plc.evaluate(0.25) == pytest.approx(0.0625)


def test_plc_affine_flux_is_exact():
    """Test that an affine flux is its own interpolant."""
    plc = plc_approximate(SpaceTimeFlux.linear(1.0), 0.0, 0.3, (-1.0, 1.0))

    assert np.allclose(plc.slopes, 1.0)
    for u in (-0.95, -0.1, 0.0, 0.42, 0.9):
        assert plc.evaluate(u) == pytest.approx(u)


def test_plc_range_and_errors():
    """Test the index range, out-of-range states and bad inputs."""
    assert grid_bounds((-0.3, 0.7), 0.5) == (-1, 2)

    plc = plc_approximate(SpaceTimeFlux.burgers(), 0.0, 0.5, (-0.3, 0.7))
    assert plc.state_range == (-0.5, 1.0)
    with pytest.raises(RangeError):
        plc.node(5)
    assert plc.evaluate(2.0) == 2.0

    with pytest.raises(GridError):
        plc_approximate(SpaceTimeFlux.burgers(), 0.0, 0.0, (0.0, 1.0))
    with pytest.raises(DomainError):
        plc_approximate(SpaceTimeFlux.burgers(), 0.0, 0.5, (1.0, 0.0))


def test_plc_frozen_in_time():
    """Test that the PLC of f(t, ·) uses the frozen time."""
    f = SpaceTimeFlux.from_terms({(0, 1): 1.0, (1, 1): 1.0})
    plc = plc_approximate(f, 0.5, 0.5, (0.0, 1.0))
    assert plc.slopes.tolist() == [1.5, 1.5]


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), eps=st.sampled_from([0.5, 0.25, 0.125]))
def test_plc_slopes_bounded_by_derivative(seed, eps):
    """Test max |slope| ≤ ‖∂ᵤf‖ and node exactness on random fluxes."""
    rng = np.random.default_rng(seed)
    f = random_flux(rng, deg_u=int(rng.integers(1, 5)))
    hull = (-1.0, 1.0)
    plc = plc_approximate(f, 0.0, eps, hull)

    assert plc.max_abs_slope() <= sup_du_norm(f, (0.0, 0.0), hull) + 1e-12
    for k in range(plc.k_min, plc.k_max + 1):
        assert plc.node(k) == pytest.approx(eval_flux(f, 0.0, k * eps), rel=1e-14, abs=1e-15)
    for k in range(plc.k_min, plc.k_max):
        assert plc.slope(k) == (plc.node(k + 1) - plc.node(k)) / eps
