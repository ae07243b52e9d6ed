"""Estimates and bounds for the minimal wave speed c*."""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .grid import Grid, GridProfile
from .linear import (
    DispersionResult,
    dispersion_speed,
    lambda_max,
    scan_grid,
    slope_sign_changes,
)
from .measure import DispersalMeasure, exp_moment, mean_displacement, mgf
from .nonlinearity import Nonlinearity, is_linearly_determinate, sup_slope_from_zero
from .semiflow import SemiflowConfig, default_guard, evolve
from .waves import (
    RecursionConfig,
    _run_level,
    aligned_period,
    choose_floor_rate,
    floor_profile,
    stable_dt,
)

__all__ = [
    "BracketError",
    "FrontLeftDomainError",
    "NegativeSpeedCertificate",
    "SpeedReport",
    "SpreadingFit",
    "bisect_c_star",
    "dispersion_speed",
    "lambda_scan",
    "negative_speed_certificate",
    "recursion_succeeds",
    "speed_report",
    "spreading_speed",
    "upper_bound",
]

log = logging.getLogger(__name__)

BURN_IN_FRACTION = 0.3
MIN_R2 = 0.999


class BracketError(ValueError):
    pass


class FrontLeftDomainError(RuntimeError):
    pass


def upper_bound(m: DispersalMeasure, f: Nonlinearity, lambdas) -> tuple[float, float]:
    """min over lambdas of K(lam)/lam, K(lam) = max(mgf(lam), 1) - 1 + sup_h f(h)/h.

    Each K(lam)/lam is a speed admitting a super-solution exp(Kt) min(exp(lam x), 1).
    """
    lambdas = list(lambdas)
    if not lambdas:
        raise ValueError("upper_bound needs at least one lambda")
    s = sup_slope_from_zero(f)
    best, arg = math.inf, math.nan
    for lam in lambdas:
        if not lam > 0:
            raise ValueError("lambda must be positive")
        b = (max(mgf(m, lam), 1.0) - 1.0 + s) / lam
        if b < best:
            best, arg = b, lam
    return best, arg


@dataclass
class NegativeSpeedCertificate:
    xi: float
    gamma_max: float
    gamma: float
    K: float
    bound: float
    f_admissible: bool

    def to_dict(self) -> dict:
        return asdict(self)


def negative_speed_certificate(
    m: DispersalMeasure, f: Nonlinearity, xi_max: float = 1.0, n_scan: int = 2048
) -> NegativeSpeedCertificate:
    """Certify c* < 0 for a measure with positive mean displacement.

    xi minimizes mgf on a uniform scan of (0, xi_max]; any reaction with
    f(u) <= gamma u and gamma < 1 - mgf(xi) then has c* <= (mgf(xi) - 1 + gamma)/xi.
    When f itself is too large the certificate is issued for gamma_max / 2.
    """
    if mean_displacement(m) <= 0:
        raise ValueError("mean displacement not positive")
    exp_moment(m, xi_max)  # raises if the moment condition fails at xi_max
    xis = np.linspace(xi_max / n_scan, xi_max, n_scan)
    g = np.array([mgf(m, x) for x in xis])
    i = int(np.argmin(g))
    xi, g_xi = float(xis[i]), float(g[i])
    gamma_max = 1.0 - g_xi
    if gamma_max <= 0:
        raise ValueError("no xi in (0, xi_max] with mgf < 1; increase xi_max")
    slope = sup_slope_from_zero(f)
    ok = slope < gamma_max
    gamma = max(slope, 0.0) if ok else 0.5 * gamma_max
    K = g_xi - 1.0 + gamma
    return NegativeSpeedCertificate(xi, gamma_max, gamma, K, K / xi, ok)


@dataclass
class SpreadingFit:
    c: float
    r2: float
    flagged: bool
    times: np.ndarray = field(repr=False)
    positions: np.ndarray = field(repr=False)


def front_track(m, f, u0: GridProfile, T: float, cfg: SemiflowConfig, every: int = 1):
    """Evolve and record the interpolated 1/2-level position after each ``every`` steps."""
    guard = cfg.guard(m, u0.grid)
    ts, xs = [0.0], [u0.level_crossing(0.5)]
    lo = u0.grid.x_min + guard * u0.grid.dx
    hi = u0.grid.x_max - guard * u0.grid.dx
    count = [0]

    def cb(t, u):
        count[0] += 1
        if count[0] % every and t < T:
            return
        x = u.level_crossing(0.5)
        if not (lo < x < hi):
            raise FrontLeftDomainError(f"front at x={x:g} reached the guard zone at t={t:g}")
        ts.append(t)
        xs.append(x)

    u = evolve(m, f, u0, T, cfg, callback=cb)
    return u, np.array(ts), np.array(xs)


def spreading_speed(
    m: DispersalMeasure, f: Nonlinearity, T: float, grid: Grid, cfg: SemiflowConfig | None = None
) -> SpreadingFit:
    """Speed c of the front from Heaviside data, with the convention u ~ psi(x + c t).

    The 1/2 level then moves as x(t) = x(0) - c t, so c is minus the fitted slope
    over the window after the first 30% of [0, T].
    """
    cfg = cfg or SemiflowConfig(dt=stable_dt(f))
    _, ts, xs = front_track(m, f, GridProfile.heaviside(grid), T, cfg)
    keep = ts >= BURN_IN_FRACTION * T
    t, x = ts[keep], xs[keep]
    slope, icpt = np.polyfit(t, x, 1)
    pred = slope * t + icpt
    ss = float(np.sum((x - x.mean()) ** 2))
    r2 = 1.0 - float(np.sum((x - pred) ** 2)) / ss if ss > 0 else 1.0
    return SpreadingFit(float(-slope), r2, r2 < MIN_R2, ts, xs)


def recursion_succeeds(
    m: DispersalMeasure, f: Nonlinearity, c: float, cfg: RecursionConfig, grid: Grid
) -> bool:
    """Whether one floor level of the recursion settles with its front inside the domain.

    Below c* the level limit has left limit 1 (the front escapes); at or above c*
    it is a front with left limit 0.  Cheaper and sharper near c* than full
    convergence in k.
    """
    dt = cfg.dt if cfg.dt is not None else stable_dt(f)
    tau, shift = aligned_period(c, cfg, grid.dx)
    sf_cfg = SemiflowConfig(dt=tau / math.ceil(tau / dt - 1e-9))
    guard = default_guard(m, grid)
    rate = cfg.floor_rate if cfg.floor_rate is not None else choose_floor_rate(m, f, c)
    floor = floor_profile(grid, rate, cfg.k_floor)
    out = _run_level(m, f, floor, c, tau, shift, sf_cfg, cfg, guard, cfg.max_iter)
    log.info("probe c=%.6g: %s after %d sweeps", c, out.status, out.sweeps)
    return out.status == "stable" and out.u.values[guard] <= 0.1


def bisect_c_star(
    m: DispersalMeasure,
    f: Nonlinearity,
    c_lo: float,
    c_hi: float,
    tol: float,
    cfg: RecursionConfig,
    grid: Grid,
    check_bracket: bool = True,
) -> float:
    """Bisect on recursion success; returns the midpoint of the final bracket."""
    if c_hi < c_lo:
        raise BracketError("c_hi < c_lo")
    if c_hi - c_lo <= tol:
        return 0.5 * (c_lo + c_hi)
    if check_bracket:
        if recursion_succeeds(m, f, c_lo, cfg, grid):
            raise BracketError(f"recursion already succeeds at c_lo={c_lo:g}")
        if not recursion_succeeds(m, f, c_hi, cfg, grid):
            raise BracketError(f"recursion fails at c_hi={c_hi:g}")
    while c_hi - c_lo > tol:
        mid = 0.5 * (c_lo + c_hi)
        if recursion_succeeds(m, f, mid, cfg, grid):
            c_hi = mid
        else:
            c_lo = mid
    return 0.5 * (c_lo + c_hi)


def lambda_scan(m: DispersalMeasure, f: Nonlinearity):
    """Rows (lam, c(lam), K(lam)/lam) over the log-spaced scan used by the estimators."""
    disp = dispersion_speed(m, f)
    s = sup_slope_from_zero(f)
    rows = []
    for lam, c in zip(disp.lambdas, disp.speeds):
        rows.append((float(lam), float(c), (max(mgf(m, lam), 1.0) - 1.0 + s) / lam))
    return rows


@dataclass
class SpeedReport:
    c_dispersion: float | None = None
    lambda_star: float | None = None
    dispersion_attained: bool | None = None
    dispersion_scan_ok: bool | None = None
    upper_bound_min: float | None = None
    upper_bound_lambda: float | None = None
    c_spreading: float | None = None
    spreading_r2: float | None = None
    spreading_flagged: bool | None = None
    c_bisection: float | None = None
    certificate: dict | None = None
    linearly_determinate: bool | None = None
    agreement: float | None = None
    chain_ok: bool | None = None
    errors: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def ordering_chain(report: SpeedReport, eps: float) -> bool:
    """c_disp - eps <= c_bisection and c_bisection <= upper + eps.

    The lower link needs linear determinacy and an attained dispersion minimum;
    a boundary value of a non-attained infimum only overestimates it.
    """
    if report.c_bisection is None:
        return True
    ok = True
    if report.upper_bound_min is not None:
        ok &= report.c_bisection <= report.upper_bound_min + eps
    if report.linearly_determinate and report.dispersion_attained:
        ok &= report.c_bisection >= report.c_dispersion - eps
    return bool(ok)


def speed_report(
    m: DispersalMeasure,
    f: Nonlinearity,
    *,
    wave_grid: Grid | None = None,
    spread_grid: Grid | None = None,
    T: float | None = None,
    bracket: tuple[float, float] | None = None,
    bisect_tol: float = 0.05,
    rec_cfg: RecursionConfig | None = None,
    sf_cfg: SemiflowConfig | None = None,
    certificate: bool = False,
    xi_max: float = 1.0,
    eps: float = 0.05,
) -> SpeedReport:
    """Run every applicable estimator; failures are recorded per field."""
    rep = SpeedReport()
    rep.linearly_determinate = is_linearly_determinate(f)
    disp: DispersionResult | None = None
    try:
        disp = dispersion_speed(m, f)
        rep.c_dispersion = disp.c
        rep.lambda_star = disp.lambda_star
        rep.dispersion_attained = disp.attained
        rep.dispersion_scan_ok = (not disp.attained) or slope_sign_changes(disp.speeds) == 1
    except Exception as exc:  # recorded, the report continues
        rep.errors["dispersion"] = str(exc)
    try:
        lams = disp.lambdas if disp is not None else scan_grid(lambda_max(m))
        rep.upper_bound_min, rep.upper_bound_lambda = upper_bound(m, f, lams)
    except Exception as exc:
        rep.errors["upper_bound"] = str(exc)
    if T is not None and spread_grid is not None:
        try:
            fit = spreading_speed(m, f, T, spread_grid, sf_cfg)
            rep.c_spreading, rep.spreading_r2, rep.spreading_flagged = fit.c, fit.r2, fit.flagged
        except Exception as exc:
            rep.errors["spreading"] = str(exc)
    if bracket is not None and wave_grid is not None:
        try:
            rep.c_bisection = bisect_c_star(
                m, f, bracket[0], bracket[1], bisect_tol, rec_cfg or RecursionConfig(), wave_grid
            )
        except Exception as exc:
            rep.errors["bisection"] = str(exc)
    if certificate:
        try:
            rep.certificate = negative_speed_certificate(m, f, xi_max).to_dict()
        except Exception as exc:
            rep.errors["certificate"] = str(exc)
    est = [rep.c_spreading, rep.c_bisection]
    if rep.dispersion_attained:
        est.append(rep.c_dispersion)
    est = [e for e in est if e is not None]
    rep.agreement = max(abs(a - b) for a in est for b in est) if len(est) > 1 else 0.0
    rep.chain_ok = ordering_chain(rep, eps)
    return rep
