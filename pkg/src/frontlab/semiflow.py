"""Time integration of u_t = mu*u - u + f(u) on a truncated uniform grid.

Far-field limits are carried along with the grid values and evolve by the
scalar ODE l' = f(l), which is what the equation reduces to on constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grid import Grid, GridProfile, fractional_translate, translate  # noqa: F401
from .measure import DispersalMeasure, convolve
from .nonlinearity import Nonlinearity, comparison_constant

STABILITY_BUDGET = 0.5
MAX_CORRECTION = 1e-9


class StabilityError(ValueError):
    pass


@dataclass(frozen=True)
class SemiflowConfig:
    dt: float = 0.1
    stepper: str = "rk4"
    boundary_guard: int | None = None  # None: derived from the measure support
    enforce_stability: bool = True

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.stepper not in ("rk4", "euler"):
            raise ValueError(f"unknown stepper {self.stepper!r}")

    def guard(self, m: DispersalMeasure, grid: Grid) -> int:
        if self.boundary_guard is not None:
            return self.boundary_guard
        return default_guard(m, grid)


@dataclass
class EvolveLog:
    """Per-run record of the invariant-set guard."""

    steps: int = 0
    max_correction: float = 0.0
    max_monotonicity_violation: float = 0.0
    corrections: list = field(default_factory=list)

    def record(self, correction: float, violation: float):
        self.steps += 1
        self.corrections.append(correction)
        self.max_correction = max(self.max_correction, correction)
        self.max_monotonicity_violation = max(self.max_monotonicity_violation, violation)


def default_guard(m: DispersalMeasure, grid: Grid) -> int:
    return int(math.ceil(m.support_radius / grid.dx)) + 4


def stable_dt(f: Nonlinearity, budget: float = STABILITY_BUDGET) -> float:
    """Largest dt with dt * (K_f + 1) <= budget."""
    return budget / (comparison_constant(f) + 1.0)


def check_stability(f: Nonlinearity, dt: float):
    k = comparison_constant(f)
    if dt * (k + 1.0) > STABILITY_BUDGET * (1 + 1e-12):
        raise StabilityError(
            f"dt={dt:g} violates dt*(K+1) <= {STABILITY_BUDGET} with K={k:g}"
        )


def _g(m, f, v, left, right, grid):
    conv = convolve(m, GridProfile(grid, v, left, right)).values
    return conv - v + f(v), f(left), f(right)


def rhs(m: DispersalMeasure, f: Nonlinearity, u: GridProfile) -> GridProfile:
    """G(u) = mu*u - u + f(u); the far fields of G are f(left), f(right)."""
    g, gl, gr = _g(m, f, u.values, u.left, u.right, u.grid)
    return GridProfile(u.grid, g, gl, gr)


def _raw_step(m, f, u: GridProfile, dt: float, stepper: str):
    grid = u.grid
    v, l, r = u.values, u.left, u.right
    k1 = _g(m, f, v, l, r, grid)
    if stepper == "euler":
        return v + dt * k1[0], l + dt * k1[1], r + dt * k1[2]
    h = 0.5 * dt
    k2 = _g(m, f, v + h * k1[0], l + h * k1[1], r + h * k1[2], grid)
    k3 = _g(m, f, v + h * k2[0], l + h * k2[1], r + h * k2[2], grid)
    k4 = _g(m, f, v + dt * k3[0], l + dt * k3[1], r + dt * k3[2], grid)
    out = [
        y + dt / 6.0 * (a + 2.0 * b + 2.0 * c + d)
        for y, a, b, c, d in zip((v, l, r), k1, k2, k3, k4)
    ]
    return out[0], out[1], out[2]


def _clamp(v, l, r):
    """Project onto monotone [0, 1]-valued data; returns data, correction, violation."""
    ext = np.concatenate(([l], v, [r]))
    violation = float(max(np.max(ext[:-1] - ext[1:]), 0.0))
    fixed = np.maximum.accumulate(np.clip(ext, 0.0, 1.0))
    correction = float(np.max(np.abs(fixed - ext)))
    return fixed[1:-1], fixed[0], fixed[-1], correction, violation


def _step(m, f, u, dt, stepper, monotone, log):
    v, l, r = _raw_step(m, f, u, dt, stepper)
    if monotone:
        v, l, r, corr, viol = _clamp(v, l, r)
        if log is not None:
            log.record(corr, viol)
    return GridProfile(u.grid, v, l, r)


def step(
    m: DispersalMeasure,
    f: Nonlinearity,
    u: GridProfile,
    dt: float,
    stepper: str = "rk4",
    enforce_stability: bool = True,
) -> GridProfile:
    """One explicit step; monotone [0, 1]-valued inputs are clamped back onto that set."""
    if enforce_stability:
        check_stability(f, dt)
    return _step(m, f, u, dt, stepper, u.is_monotone_unit(), None)


def evolve(
    m: DispersalMeasure,
    f: Nonlinearity,
    u0: GridProfile,
    T: float,
    cfg: SemiflowConfig = SemiflowConfig(),
    log: EvolveLog | None = None,
    callback=None,
) -> GridProfile:
    """Q^T[u0] by fixed steps of cfg.dt, plus one shorter step for any remainder.

    ``callback(t, u)`` is called after every step.
    """
    if T < 0:
        raise ValueError("T must be nonnegative")
    if cfg.enforce_stability:
        check_stability(f, cfg.dt)
    monotone = u0.is_monotone_unit()
    nsteps = int(math.floor(T / cfg.dt + 1e-9))
    rem = T - nsteps * cfg.dt
    u = u0
    t = 0.0
    for i in range(nsteps):
        u = _step(m, f, u, cfg.dt, cfg.stepper, monotone, log)
        t = (i + 1) * cfg.dt
        if callback is not None:
            callback(t, u)
    if rem > 1e-12 * max(1.0, T):
        u = _step(m, f, u, rem, cfg.stepper, monotone, log)
        if callback is not None:
            callback(T, u)
    return u


def logistic(alpha: float, t: float, gamma: float = 1.0) -> float:
    """Closed-form solution of a' = gamma*a(1-a), a(0) = alpha."""
    return alpha / (alpha + (1.0 - alpha) * math.exp(-gamma * t))
