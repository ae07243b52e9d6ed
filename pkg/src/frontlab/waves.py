"""Monotone traveling-wave profiles via the floored monotone recursion.

For a trial speed c the recursion is

    u_n = max( Q^tau[u_{n-1}](x - c*tau), 2^-k w(x) ),    u_0 = 2^-k w,

which is nondecreasing in n.  Its limit is pinned at the 1/2 level, and the
floor exponent k is raised until successive pinned limits agree.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .grid import Grid, GridProfile, fractional_translate, translate, split_shift
from .measure import DispersalMeasure
from .linear import decay_rate
from .nonlinearity import Nonlinearity, derivative_at_zero
from .semiflow import SemiflowConfig, default_guard, evolve, rhs, stable_dt

log = logging.getLogger(__name__)

MONOTONE_TOL = 1e-10
FLOOR_TOL = 1e-12


class RecursionInvariantError(RuntimeError):
    """The iterates stopped increasing: the discrete semiflow lost monotonicity."""


class PinningError(ValueError):
    pass


@dataclass(frozen=True)
class RecursionConfig:
    tau: float = 1.0
    k_floor: int = 3
    k_step: int = 2
    k_max: int = 21
    max_iter: int = 3000  # sweeps per floor level
    tol_profile: float = 1e-9  # sup-norm change that ends a floor level
    tol_residual: float = 1e-3
    tol_levels: float = 1e-4  # agreement of successive pinned levels
    tau_max: float = 4.0
    dt: float | None = None  # None: the stability-limited step
    burn_in: int = 200
    escape_window: int = 50
    floor_rate: float | None = None  # exponent of w; None: see choose_floor_rate

    def __post_init__(self):
        if not (self.tol_profile > 0 and self.tol_residual > 0 and self.tol_levels > 0):
            raise ValueError("tolerances must be positive")
        if self.dt is not None and self.tau < self.dt:
            raise ValueError("tau must be at least dt")
        if self.k_floor < 1 or self.k_step < 1:
            raise ValueError("k_floor and k_step must be positive")


@dataclass
class WaveResult:
    c: float
    psi: GridProfile
    residual: float
    iterations: int
    converged: bool
    pin_index: int
    k: int = 0
    tau: float = 0.0
    reason: str = ""
    level_history: list = field(default_factory=list)

    def metadata(self) -> dict:
        return {
            "c": self.c,
            "residual": self.residual,
            "iterations": self.iterations,
            "converged": self.converged,
            "pin_index": self.pin_index,
            "k": self.k,
            "tau": self.tau,
            "reason": self.reason,
        }


def pin_profile(u: GridProfile) -> tuple[GridProfile, int]:
    """Translate by whole cells so the 1/2 crossing sits at the node nearest x = 0.

    The crossing node i is the first with u_i <= 1/2 <= u_{i+1}.
    """
    v = u.values
    hits = np.nonzero((v[:-1] <= 0.5) & (v[1:] >= 0.5))[0]
    if hits.size == 0:
        raise PinningError("profile range does not straddle 1/2")
    shift = u.grid.index_of(0.0) - int(hits[0])
    return translate(u, shift), shift


def wave_residual(
    m: DispersalMeasure, f: Nonlinearity, psi: GridProfile, c: float, guard: int | None = None
) -> float:
    """sup |c psi' - (mu*psi - psi + f(psi))| over guard-excluded nodes."""
    g = default_guard(m, psi.grid) if guard is None else guard
    lo, hi = g, psi.grid.n - g
    if hi - lo < 3:
        raise ValueError("guard leaves fewer than three interior nodes")
    r = rhs(m, f, psi).values[lo:hi]
    if c != 0.0:
        r = c * np.gradient(psi.values[lo:hi], psi.grid.dx, edge_order=2) - r
    return float(np.max(np.abs(r)))


def detect_jump(psi: GridProfile) -> tuple[float, int]:
    """Largest increment between consecutive nodes and its left index."""
    d = np.diff(psi.values)
    i = int(np.argmax(d))
    return float(d[i]), i


def floor_profile(grid: Grid, rate: float, k: int, anchor: float = 0.0) -> GridProfile:
    """min(exp(rate (x - anchor)), 2^-k), a translate of 2^-k min(exp(rate x), 1).

    Anchoring the exponential part keeps the level-k limit near ``anchor`` for
    every k.  ``rate = inf`` gives the step floor 2^-k 1{x > anchor}.
    """
    scale = 2.0 ** (-k)
    if math.isinf(rate):
        v = np.where(grid.x > anchor, scale, 0.0)
    else:
        v = np.minimum(np.exp(np.minimum(rate * (grid.x - anchor), 0.0)), scale)
    return GridProfile(grid, v, 0.0, scale)


def choose_floor_rate(m: DispersalMeasure, f: Nonlinearity, c: float) -> float:
    """Exponent of the floor w = min(exp(rate x), 1).

    The slow decay rate of speed c when one exists, so that w has the shape of
    the linear super-solution for that speed; otherwise a step (rate = inf).
    """
    if derivative_at_zero(f) > 0:
        lam = decay_rate(m, f, c)
        if lam is not None:
            return lam
    return math.inf


def aligned_period(c: float, cfg: RecursionConfig, dx: float) -> tuple[float, float]:
    """Sweep period tau and shift c*tau, with c*tau on the grid when that is possible."""
    if c == 0.0 or abs(c) * cfg.tau_max < dx:
        return cfg.tau, c * cfg.tau
    cells = max(1, round(abs(c) * cfg.tau / dx))
    tau = cells * dx / abs(c)
    return tau, math.copysign(cells * dx, c)


def _shift_back(u: GridProfile, distance: float) -> GridProfile:
    k, frac = split_shift(distance / u.grid.dx)
    if frac == 0.0:
        return translate(u, k)
    return fractional_translate(u, distance)


@dataclass
class _LevelOutcome:
    u: GridProfile
    sweeps: int
    status: str  # "stable", "escaped", "translating", "max_iter"


def _run_level(m, f, floor, c, tau, shift, sf_cfg, cfg, guard, budget) -> _LevelOutcome:
    grid = floor.grid
    u = floor
    dx = grid.dx
    moving = 0
    prev_x = math.nan
    escape_x = grid.x_min + 0.25 * (grid.x_max - grid.x_min)
    for n in range(1, min(cfg.max_iter, budget) + 1):
        q = _shift_back(evolve(m, f, u, tau, sf_cfg), shift)
        v = u.with_values(
            np.maximum(q.values, floor.values), max(q.left, floor.left), max(q.right, floor.right)
        )
        drop = float(np.max(u.values - v.values))
        if drop > MONOTONE_TOL:
            raise RecursionInvariantError(f"iterates decreased by {drop:.3e} at sweep {n}")
        if float(np.min(v.values - floor.values)) < -FLOOR_TOL:
            raise RecursionInvariantError("iterate fell below the floor")
        change = float(np.max(v.values - u.values))
        u = v
        x_half = u.level_crossing(0.5)
        if u.values[guard] > 0.1 or x_half < escape_x:
            return _LevelOutcome(u, n, "escaped")
        if not math.isnan(prev_x) and abs(x_half - prev_x) >= dx:
            moving += 1
        else:
            moving = 0
        prev_x = x_half
        if n > cfg.burn_in and moving >= cfg.escape_window:
            return _LevelOutcome(u, n, "translating")
        if change <= cfg.tol_profile:
            return _LevelOutcome(u, n, "stable")
    return _LevelOutcome(u, n, "max_iter")


def _aligned_distance(a: GridProfile, b: GridProfile, lo: int, hi: int) -> float:
    """Sup distance after aligning the interpolated 1/2 crossings."""
    d = a.level_crossing(0.5) - b.level_crossing(0.5)
    return fractional_translate(b, d).sup_distance(a, lo, hi)


def weinberger_recursion(
    m: DispersalMeasure,
    f: Nonlinearity,
    c: float,
    cfg: RecursionConfig,
    grid: Grid,
    max_sweeps: int = 100_000,
) -> WaveResult:
    """Wave profile for speed ``c`` (pinned), or a nonconverged result explaining why."""
    dt = cfg.dt if cfg.dt is not None else stable_dt(f)
    tau, shift = aligned_period(c, cfg, grid.dx)
    sf_cfg = SemiflowConfig(dt=tau / math.ceil(tau / dt - 1e-9))
    guard = default_guard(m, grid)
    rate = cfg.floor_rate if cfg.floor_rate is not None else choose_floor_rate(m, f, c)

    anchor = 0.0
    sweeps = 0
    prev = None
    history = []
    k = cfg.k_floor
    psi = None
    pin_shift = 0
    status = "stable"
    note = ""
    while True:
        floor = floor_profile(grid, rate, k, anchor)
        out = _run_level(m, f, floor, c, tau, shift, sf_cfg, cfg, guard, max_sweeps - sweeps)
        sweeps += out.sweeps
        status = out.status
        if status != "stable":
            log.info("c=%g k=%d: level ended %s after %d sweeps", c, k, status, out.sweeps)
            psi = out.u
            break
        try:
            psi, pin_shift = pin_profile(out.u)
        except PinningError:
            status = "unpinnable"
            psi = out.u
            break
        anchor += pin_shift * grid.dx
        lo, hi = guard + max(pin_shift, 0), grid.n - guard - max(-pin_shift, 0)
        gap = math.inf if prev is None else _aligned_distance(psi, prev, lo, hi)
        history.append({"k": k, "sweeps": out.sweeps, "pin_shift": pin_shift, "level_gap": gap})
        log.debug("c=%g k=%d sweeps=%d pin_shift=%d gap=%.3e", c, k, out.sweeps, pin_shift, gap)
        if gap <= cfg.tol_levels:
            break
        if k + cfg.k_step > cfg.k_max:
            note = "floor levels did not agree"
            break
        prev = psi
        k += cfg.k_step

    # cells refilled from the far field by the last pinning translation are excluded
    g = guard + abs(pin_shift)
    res = wave_residual(m, f, psi, c, g)
    if status != "stable":
        return WaveResult(c, psi, res, sweeps, False, grid.index_of(0.0), k, tau, status, history)
    pinned_ok = psi.values[guard] <= 0.1 and psi.values[grid.n - 1 - guard] >= 0.9
    converged = pinned_ok and res <= cfg.tol_residual
    if not pinned_ok:
        note = "limits not attained"
    elif not converged:
        note = "residual above tolerance" + (f"; {note}" if note else "")
    return WaveResult(c, psi, res, sweeps, converged, grid.index_of(0.0), k, tau, note, history)


def standing_wave_solve(
    m: DispersalMeasure, f: Nonlinearity, cfg: RecursionConfig, grid: Grid
) -> WaveResult:
    return weinberger_recursion(m, f, 0.0, cfg, grid)
