"""Test step functions, norms, traces and grid quantization."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from core import DivergentTailError, DomainError, GridError
from stepfn import (
    GridStepFunction, StepFunction, l1_distance, l1_norm, quantize, quantize_boundary,
    range_hull, restrict, sup_norm, trace, translate, tv
)


@st.composite
def step_functions(draw, end=10.0, max_jumps=6):
    """Random step functions on [0, end] with values in [-3, 3]."""
    xs = sorted(set(draw(st.lists(st.floats(0.01, end - 0.01), max_size=max_jumps))))
    values = draw(st.lists(st.floats(-3.0, 3.0), min_size=len(xs) + 1, max_size=len(xs) + 1))
    return StepFunction.make(xs, values, 0.0, end)


def test_make_normalizes():
    """Test that the constructor merges equal pieces and drops outside breakpoints."""
    u = StepFunction.make([1.0, 2.0, 5.0], [0.0, 0.0, 1.0, 2.0], 0.0, 4.0)

    assert u.breakpoints == (2.0,)
    assert u.values == (0.0, 1.0)
    with pytest.raises(DomainError):
        StepFunction.constant(1.0, 2.0, 2.0)


@pytest.mark.parametrize("values, expected", [
    ((0.0, 1.0, 0.0), 2.0),
    ((3.0,), 0.0),
    ((0.0, 0.5, 2.0, -1.0), 5.0),
])
def test_tv(values, expected):
    """Test the total variation."""
    u = StepFunction.make([float(i + 1) for i in range(len(values) - 1)], values)
    assert tv(u) == expected


def test_tv_window():
    """Test windowed total variation and windows outside the domain."""
    u = StepFunction.make([1.0, 2.0], [0.0, 1.0, 0.0])

    assert tv(u, (0.0, 1.5)) == 1.0
    assert tv(u, (1.0, 3.0)) == 1.0
    with pytest.raises(DomainError):
        tv(StepFunction.make([1.0], [0.0, 1.0], 0.0, 2.0), (0.0, 3.0))


def test_l1_distance():
    """Test exact L¹ distances."""
    u = StepFunction.make([2.0], [1.0, 0.0])
    zero = StepFunction.constant(0.0)

    assert l1_distance(u, u) == 0.0
    assert l1_distance(u, zero) == 2.0
    assert l1_norm(u) == 2.0

    a = StepFunction.make([1.0], [1.0, 0.0], 0.0, 3.0)
    b = StepFunction.make([2.0], [0.5, 0.25], 0.0, 3.0)
    assert l1_distance(a, b) == 1.25


def test_l1_distance_errors():
    """Test diverging tails and mismatched domains."""
    with pytest.raises(DivergentTailError):
        l1_distance(StepFunction.constant(1.0), StepFunction.constant(0.0))
    with pytest.raises(DomainError):
        l1_distance(StepFunction.constant(0.0, 0.0, 1.0), StepFunction.constant(0.0, 0.0, 2.0))


def test_sup_norm_and_values_in():
    """Test the L∞ norm over windows."""
    u = StepFunction.make([1.0, 2.0], [0.5, -2.0, 1.0])

    assert sup_norm(u) == 2.0
    assert sup_norm(u, (2.0, 5.0)) == 1.0
    assert u.values_in((0.5, 1.5)) == [0.5, -2.0]
    assert u.values_in((1.0, 1.0)) == [-2.0]


def test_range_hull():
    """Test hulls of values over windows."""
    assert range_hull([StepFunction.constant(3.0)]) == (3.0, 3.0)

    u_o = StepFunction.make([1.0], [0.0, 1.0])
    u_b = StepFunction.make([0.5], [-1.0, 2.0], 0.0, 1.0)
    assert range_hull([u_o, u_b]) == (-1.0, 2.0)
    assert range_hull([u_o, (u_b, (0.0, 0.25))]) == (-1.0, 1.0)
    with pytest.raises(DomainError):
        range_hull([])


def test_translate():
    """Test the time translation."""
    u = StepFunction.make([3.0], [1.0, 2.0])

    assert translate(u, 0.0) is u
    assert translate(u, 3.0) == StepFunction.constant(2.0)
    assert translate(u, 1.0).breakpoints == (2.0,)

    bounded = StepFunction.make([1.0], [0.0, 1.0], 0.0, 4.0)
    assert translate(bounded, 1.0).end == 3.0
    with pytest.raises(DomainError):
        translate(u, -1.0)


def test_restrict():
    """Test restriction to a subwindow."""
    u = StepFunction.make([1.0, 2.0], [0.0, 1.0, 0.0])
    r = restrict(u, (0.5, 1.5))

    assert (r.start, r.end) == (0.5, 1.5)
    assert r.values == (0.0, 1.0)
    with pytest.raises(DomainError):
        restrict(u, (1.0, 1.0))


def test_trace():
    """Test one-sided limits."""
    u = StepFunction.make([1.0], [1.0, 2.0])

    assert trace(u, 1.0, 'left') == 1.0
    assert trace(u, 1.0, 'right') == 2.0
    assert trace(u, 0.5, 'left') == trace(u, 0.5, 'right') == 1.0
    assert trace(StepFunction.make([1.0], [3.0, 0.0]), 0.0, 'right') == 3.0
    with pytest.raises(DomainError):
        trace(u, -1.0, 'right')


def test_grid_step_function():
    """Test grid-valued step functions."""
    g = GridStepFunction.make(0.5, [1.0, 2.0], [1, 1, 3])

    assert g.breakpoints == (2.0,)
    assert g.indices == (1, 3)
    assert g.to_step().values == (0.5, 1.5)
    assert g.index_at(2.0) == 3
    assert g.index_range == (1, 3)

    assert GridStepFunction.from_step(StepFunction.make([1.0], [0.5, -1.0]), 0.5).indices == (1, -2)
    with pytest.raises(GridError):
        GridStepFunction.from_step(StepFunction.constant(0.3), 0.5)


def test_quantize_examples():
    """Test the bracket-clamp quantizer on fixed inputs."""
    grid_valued = StepFunction.make([1.0], [0.5, -1.0])
    assert quantize(grid_valued, 0.5).to_step() == grid_valued

    assert quantize(StepFunction.constant(0.7), 0.5).to_step() == StepFunction.constant(0.5)

    oscillating = StepFunction.make([float(i + 1) for i in range(20)], [0.9, 1.1] * 10 + [0.9])
    q = quantize(oscillating, 1.0)
    assert q.indices == (1,)
    assert tv(q.to_step()) <= tv(oscillating) + 1.0

    with pytest.raises(GridError):
        quantize(grid_valued, 0.0)


def test_quantize_boundary_keeps_jump():
    """Test |u_b^ε(0+) − u_o^ε(0+)| ≤ |u_b(0+) − u_o(0+)|."""
    u_b = StepFunction.make([0.5], [0.7, 0.2], 0.0, 1.0)
    grid, jump = quantize_boundary(u_b, 0.5, interior_index=1, interior_value=0.6)

    assert grid.indices[0] == 1
    assert jump == 0.0
    assert jump <= abs(0.7 - 0.6)


@settings(max_examples=100, deadline=None)
@given(u=step_functions(), eps=st.sampled_from([1.0, 0.5, 0.25, 0.1]))
def test_quantize_properties(u, eps):
    """Test grid values, L∞ proximity, the clamp and the TV bound."""
    q = quantize(u, eps)
    step = q.to_step()
    norm = max(abs(v) for v in u.values)

    for k in q.indices:
        assert abs(k * eps) <= norm + 1e-12
    for left, right, value in u.pieces():
        assert abs(step(left) - value) < eps + 1e-12
    assert tv(step) <= tv(u) + eps + 1e-12


@settings(max_examples=100, deadline=None)
@given(u=step_functions(), v=step_functions(), w=step_functions())
def test_l1_metric_properties(u, v, w):
    """Test symmetry and the triangle inequality of the L¹ distance."""
    assert l1_distance(u, v) == pytest.approx(l1_distance(v, u))
    assert l1_distance(u, w) <= l1_distance(u, v) + l1_distance(v, w) + 1e-9


@settings(max_examples=100, deadline=None)
@given(u=step_functions(), t=st.floats(0.0, 9.0))
def test_translate_tv(u, t):
    """Test tv(𝒯_t u) = tv(u; [t, end])."""
    assert tv(translate(u, t)) == pytest.approx(tv(u, (t, u.end)))


@settings(max_examples=100, deadline=None)
@given(u=step_functions(), cut=st.floats(0.5, 9.5))
def test_tv_additive(u, cut):
    """Test additivity of tv over adjacent windows away from breakpoints."""
    if cut in u.breakpoints:
        return
    assert tv(u) == pytest.approx(tv(u, (0.0, cut)) + tv(u, (cut, u.end)))


def test_unbounded_domain_end():
    """Test that the half-line end is +inf."""
    assert not StepFunction.constant(1.0).bounded
    assert math.isinf(StepFunction.constant(1.0).end)
