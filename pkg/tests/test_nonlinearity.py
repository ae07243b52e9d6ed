import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from frontlab.nonlinearity import (
    NotMonostableError,
    comparison_constant,
    derivative_at_zero,
    is_linearly_determinate,
    kpp,
    lipschitz_upper,
    nonlinearity_from_config,
    polynomial,
    tail_extension,
    sup_slope_from_zero,
)


def test_kpp_values_and_slopes():
    f = kpp(1.0)
    assert f(0.5) == 0.25
    assert derivative_at_zero(f) == 1.0
    assert sup_slope_from_zero(f) == 1.0
    # slopes of u(1-u) on [-1, 2] range over [-3, 3]
    assert comparison_constant(f) == pytest.approx(4.0)
    assert lipschitz_upper(f) == pytest.approx(3.0)


def test_extension_branches():
    f = tail_extension(0.3)
    assert f(-0.5) == pytest.approx(-0.15)
    assert f(0.5) == pytest.approx(0.075)
    assert f(1.5) == pytest.approx(-1.0)
    assert f(3.0) == pytest.approx(-3.0)
    assert comparison_constant(f) == pytest.approx(3.0)
    assert sup_slope_from_zero(f) == pytest.approx(0.3)


def test_extension_is_continuous_at_branch_points():
    f = tail_extension(0.7)
    for u0 in (0.0, 1.0):
        assert f(u0 - 1e-9) == pytest.approx(f(u0 + 1e-9), abs=1e-8)


def test_polynomial_matches_kpp():
    p = polynomial([0.0, 2.0, -2.0])
    u = np.linspace(0, 1, 11)
    np.testing.assert_allclose(p(u), kpp(2.0)(u))
    assert derivative_at_zero(p) == pytest.approx(2.0, rel=1e-8)
    assert sup_slope_from_zero(p) == pytest.approx(2.0)
    lo, hi = p.slope_bounds()
    assert (lo, hi) == pytest.approx((-6.0, 6.0))


def test_cubic_is_not_linearly_determinate():
    # f(u) = u(1-u)(1+4u) has f'(0)=1 but exceeds u near u=0.4
    f = polynomial([0.0, 1.0, 3.0, -4.0])
    assert not is_linearly_determinate(f)
    assert is_linearly_determinate(kpp(1.0))
    assert sup_slope_from_zero(f) > derivative_at_zero(f)


@pytest.mark.parametrize("coeffs", [[0.0, -1.0, 1.0], [0.0, 1.0]])
def test_non_monostable_rejected(coeffs):
    with pytest.raises(NotMonostableError):
        polynomial(coeffs)


def test_zero_reaction_needs_non_strict():
    with pytest.raises(NotMonostableError):
        polynomial([0.0])
    assert not polynomial([0.0], strict=False).is_monostable()


def test_config_kinds():
    assert nonlinearity_from_config({"kind": "kpp", "gamma": 0.3}).gamma == 0.3
    f = nonlinearity_from_config({"kind": "extension", "gamma": 0.3, "interior": {"kind": "kpp", "gamma": 0.2}})
    assert f(0.5) == pytest.approx(0.05)
    with pytest.raises(ValueError):
        nonlinearity_from_config({"kind": "bistable"})


@given(st.floats(-1.0, 2.0), st.floats(1e-3, 1.0), st.floats(0.05, 3.0))
def test_difference_quotients_within_slope_bounds(u, h, gamma):
    f = kpp(gamma)
    if u + h > 2.0:
        u = 2.0 - h
    q = (f(u + h) - f(u)) / h
    lo, hi = f.slope_bounds()
    assert lo - 1e-9 <= q <= hi + 1e-9
