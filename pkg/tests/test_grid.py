import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from frontlab.grid import Grid, GridProfile, fractional_translate, split_shift, translate


def test_grid_spacing_and_refinement():
    g = Grid(-1.0, 1.0, 21)
    assert g.dx == pytest.approx(0.1)
    r = g.refined()
    assert r.n == 41 and r.dx == pytest.approx(0.05)
    np.testing.assert_allclose(r.x[::2], g.x)


@pytest.mark.parametrize("n", [0, 1, 15])
def test_grid_rejects_few_nodes(n):
    with pytest.raises(ValueError):
        Grid(0.0, 1.0, n)


def test_grid_rejects_empty_interval():
    with pytest.raises(ValueError):
        Grid(1.0, 1.0, 20)


def test_profile_is_read_only(small_grid):
    u = GridProfile.heaviside(small_grid)
    with pytest.raises(ValueError):
        u.values[0] = 3.0


def test_profile_rejects_nonfinite(small_grid):
    v = np.zeros(small_grid.n)
    v[3] = np.nan
    with pytest.raises(ValueError):
        GridProfile(small_grid, v)


def test_heaviside_is_left_continuous(small_grid):
    u = GridProfile.heaviside(small_grid, 0.0)
    i0 = small_grid.index_of(0.0)
    assert u.values[i0] == 0.0 and u.values[i0 + 1] == 1.0
    assert u.is_class_m()


def test_translate_heaviside_moves_step(small_grid):
    u = translate(GridProfile.heaviside(small_grid), 3)
    assert u.values.tolist() == GridProfile.heaviside(small_grid, 3 * small_grid.dx).values.tolist()


def test_translate_zero_is_identity(small_grid):
    u = GridProfile.from_function(small_grid, lambda x: 0.5 * (1 + np.tanh(x)))
    assert np.array_equal(translate(u, 0).values, u.values)


@given(st.integers(-30, 30))
def test_translate_round_trip_on_interior(k):
    g = Grid(-10.0, 10.0, 201)
    u = GridProfile.from_function(g, lambda x: 0.5 * (1 + np.tanh(x)))
    back = translate(translate(u, k), -k)
    a = abs(k)
    np.testing.assert_array_equal(back.values[a:g.n - a], u.values[a:g.n - a])


def test_fractional_matches_integer_shift(small_grid):
    u = GridProfile.from_function(small_grid, lambda x: 0.5 * (1 + np.tanh(x)))
    a = fractional_translate(u, 4 * small_grid.dx)
    assert np.array_equal(a.values, translate(u, 4).values)


def test_fractional_half_cell_on_ramp():
    g = Grid(0.0, 1.0, 101)
    u = GridProfile(g, g.x, 0.0, 1.0)
    v = fractional_translate(u, 0.5 * g.dx)
    np.testing.assert_allclose(v.values[1:], g.x[1:] - 0.5 * g.dx, atol=1e-15)


@given(st.floats(-5.0, 5.0, allow_nan=False))
def test_fractional_preserves_monotone_unit(x0):
    g = Grid(-10.0, 10.0, 201)
    u = GridProfile.from_function(g, lambda x: 1 / (1 + np.exp(-3 * x)), 0.0, 1.0)
    v = fractional_translate(u, x0)
    assert v.is_monotone_unit(1e-15)


def test_split_shift_snaps_near_integers():
    assert split_shift(3.0 + 1e-12) == (3, 0.0)
    k, f = split_shift(-1.25)
    assert k == -2 and f == pytest.approx(0.75)


def test_level_crossing_interpolates():
    g = Grid(0.0, 1.0, 101)
    u = GridProfile(g, g.x, 0.0, 1.0)
    assert u.level_crossing(0.555) == pytest.approx(0.555)
    assert math.isnan(GridProfile.constant(g, 0.2).level_crossing(0.5))
