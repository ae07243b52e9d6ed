import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from frontlab.grid import Grid, GridProfile
from frontlab.measure import (
    DispersalMeasure,
    MomentOverflowError,
    convolve,
    exp_moment,
    gaussian_density,
    mass,
    mean_displacement,
    measure_from_config,
    mgf,
)


def test_two_atom_moments(two_atom):
    assert mass(two_atom) == 1.0
    assert mean_displacement(two_atom) == 0.0
    assert mgf(two_atom, 1.2) == pytest.approx(math.cosh(1.2), rel=1e-14)
    assert exp_moment(two_atom, 0.7) == pytest.approx(math.exp(0.7), rel=1e-14)


def test_dirac_moments(delta1):
    assert mgf(delta1, 2.0) == pytest.approx(math.exp(-2.0))
    assert mean_displacement(delta1) == 1.0


def test_renormalization_is_recorded():
    m = DispersalMeasure.from_atoms([(0.0, 0.3), (1.0, 0.3)])
    assert mass(m) == pytest.approx(1.0)
    assert m.normalization_correction == pytest.approx(-0.4)


@pytest.mark.parametrize(
    "atoms",
    [[(0.0, -0.1), (1.0, 1.1)], [(0.0, 0.5), (0.0, 0.5)], [(math.inf, 1.0)], [(0.0, 0.0)]],
)
def test_invalid_measures(atoms):
    with pytest.raises(ValueError):
        DispersalMeasure.from_atoms(atoms)


def test_exp_moment_negative_lambda(two_atom):
    with pytest.raises(ValueError):
        exp_moment(two_atom, -1.0)


def test_moment_overflow():
    m = DispersalMeasure.from_atoms([(-1000.0, 0.5), (1000.0, 0.5)])
    with pytest.raises(MomentOverflowError, match="effectively infinite"):
        mgf(m, 1.0)


def test_uniform_density_mgf(uniform01):
    # closed form (1 - e^-lam)/lam; midpoint error is about lam^2 h^2 / 24
    for lam in (0.5, 1.0, 3.0):
        assert mgf(uniform01, lam) == pytest.approx(-math.expm1(-lam) / lam, rel=5e-4)
    assert mean_displacement(uniform01) == pytest.approx(0.5)


def test_gaussian_density_mean():
    y, w = gaussian_density(0.3, 0.5)
    assert w.sum() == pytest.approx(1.0)
    assert np.dot(y, w) == pytest.approx(0.3)


def test_config_mixes_atoms_and_density():
    m = measure_from_config({"atoms": [[2.0, 0.25]], "density": {"kind": "uniform", "support": [0, 1]}})
    assert mass(m) == pytest.approx(1.0)
    assert mean_displacement(m) == pytest.approx(0.25 * 2.0 + 0.75 * 0.5)


def test_reflection_negates_mean(two_atom):
    m = DispersalMeasure.from_atoms([(-1.0, 0.3), (1.0, 0.7)])
    assert mean_displacement(m.reflected()) == -mean_displacement(m)


def test_convolution_with_unit_jump_shifts(small_grid, delta1):
    u = GridProfile.from_function(small_grid, lambda x: 0.5 * (1 + np.tanh(x)), 0.0, 1.0)
    v = convolve(delta1, u)
    k = round(1.0 / small_grid.dx)
    np.testing.assert_array_equal(v.values[k:], u.values[:-k])


@given(st.floats(0.0, 1.0))
def test_convolution_fixes_constants(alpha):
    g = Grid(-5.0, 5.0, 101)
    m = DispersalMeasure.from_atoms([(-0.37, 0.2), (0.0, 0.5), (1.13, 0.3)])
    v = convolve(m, GridProfile.constant(g, alpha))
    np.testing.assert_allclose(v.values, alpha, atol=1e-15)
