import math

import numpy as np
import pytest

from frontlab.grid import Grid, GridProfile
from frontlab.measure import DispersalMeasure
from frontlab.nonlinearity import kpp, tail_extension
from frontlab.waves import (
    PinningError,
    RecursionConfig,
    aligned_period,
    detect_jump,
    floor_profile,
    pin_profile,
    standing_wave_solve,
    wave_residual,
    weinberger_recursion,
)

WAVE_GRID = Grid(-40.0, 40.0, 1601)
LATTICE_GRID = Grid(-30.0, 30.0, 1201)


def test_pin_puts_half_level_at_origin():
    g = Grid(-10.0, 10.0, 201)
    u = GridProfile.from_function(g, lambda x: 1 / (1 + np.exp(-(x - 3.33))), 0.0, 1.0)
    p, shift = pin_profile(u)
    i = g.index_of(0.0)
    assert p.values[i] <= 0.5 <= p.values[i + 1]
    assert shift == -33


def test_pin_needs_straddle():
    with pytest.raises(PinningError):
        pin_profile(GridProfile.constant(Grid(0.0, 1.0, 20), 0.3))


def test_floor_profile_shapes():
    g = Grid(-10.0, 10.0, 201)
    w = floor_profile(g, 1.0, 3)
    assert w.values.max() == 0.125 and w.right == 0.125
    np.testing.assert_allclose(w.values[:50], np.exp(g.x[:50]))
    step = floor_profile(g, math.inf, 2, anchor=1.0)
    assert step.values.tolist() == np.where(g.x > 1.0, 0.25, 0.0).tolist()


def test_aligned_period_puts_shift_on_grid():
    tau, shift = aligned_period(1.7, RecursionConfig(), 0.05)
    assert shift / 0.05 == pytest.approx(round(shift / 0.05), abs=1e-12)
    assert shift == pytest.approx(1.7 * tau)
    assert aligned_period(0.0, RecursionConfig(), 0.05) == (1.0, 0.0)


def test_residual_of_exact_equilibrium():
    g = Grid(-10.0, 10.0, 201)
    u = GridProfile.constant(g, 1.0)
    assert wave_residual(DispersalMeasure.dirac(1.0), kpp(1.0), u, 0.0) == 0.0


def test_jump_detection():
    g = Grid(-10.0, 10.0, 201)
    jump, i = detect_jump(GridProfile.heaviside(g, 0.0))
    assert jump == 1.0 and g.x[i] == pytest.approx(0.0)


def test_config_validation():
    with pytest.raises(ValueError):
        RecursionConfig(tol_profile=0.0)
    with pytest.raises(ValueError):
        RecursionConfig(tau=0.01, dt=0.1)


@pytest.fixture(scope="module")
def fast_wave():
    m = DispersalMeasure.from_atoms([(-1.0, 0.5), (1.0, 0.5)])
    return m, weinberger_recursion(m, kpp(1.0), 2.0, RecursionConfig(), WAVE_GRID)


def test_fast_wave_is_a_class_m_profile(fast_wave):
    _, res = fast_wave
    assert res.converged and res.residual <= 1e-3
    assert res.psi.is_monotone_unit(1e-12)
    i = WAVE_GRID.index_of(0.0)
    assert res.psi.values[i] <= 0.5 <= res.psi.values[i + 1]


def test_fast_wave_tail_decays_at_slow_rate(fast_wave):
    # tail of a speed-2 wave: exp(lam x) with cosh(lam) = 2 lam
    from scipy.optimize import brentq

    lam = brentq(lambda s: math.cosh(s) - 2.0 * s, 0.1, 1.19)
    _, res = fast_wave
    x, v = WAVE_GRID.x, res.psi.values
    sel = (x > -20) & (x < -8)
    rate = np.polyfit(x[sel], np.log(v[sel]), 1)[0]
    assert rate == pytest.approx(lam, rel=0.1)


def test_below_critical_speed_fails(two_atom):
    res = weinberger_recursion(two_atom, kpp(1.0), 1.0, RecursionConfig(), WAVE_GRID)
    assert not res.converged and res.reason == "escaped"


def test_extension_standing_wave_is_continuous(delta1):
    res = standing_wave_solve(delta1, tail_extension(0.3), RecursionConfig(), LATTICE_GRID)
    assert res.converged and res.residual <= 1e-6
    jump, _ = detect_jump(res.psi)
    assert jump < 0.01
