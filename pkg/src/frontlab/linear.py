"""Linearization at the unstable state: exponential tails exp(lam*x) moving at speed c.

A tail exp(lam (x + c t)) solves the linearized equation when

    c * lam = mgf(mu, lam) - 1 + f'(0),

so c(lam) = (mgf(mu, lam) - 1 + f'(0)) / lam is the speed carried by decay rate lam.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .measure import DispersalMeasure, MomentOverflowError, exp_moment, mgf
from .nonlinearity import Nonlinearity, derivative_at_zero

MOMENT_CAP = 1e12
LAMBDA_CAP = 100.0
N_SCAN = 2048
GOLDEN_TOL = 1e-8

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def lambda_max(m: DispersalMeasure, cap: float = MOMENT_CAP, lam_cap: float = LAMBDA_CAP) -> float:
    """Largest lam <= lam_cap with exp_moment(m, lam) <= cap."""

    def ok(lam):
        try:
            return exp_moment(m, lam) <= cap
        except MomentOverflowError:
            return False

    if ok(lam_cap):
        return lam_cap
    lo, hi = 0.0, lam_cap
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * hi:
            break
    return lo


def speed_of_rate(m: DispersalMeasure, f: Nonlinearity, lam: float, fprime0: float | None = None) -> float:
    fp = derivative_at_zero(f) if fprime0 is None else fprime0
    return (mgf(m, lam) - 1.0 + fp) / lam


def scan_grid(lam_hi: float, n: int = N_SCAN) -> np.ndarray:
    return np.logspace(math.log10(lam_hi) - 4.0, math.log10(lam_hi), n)


def golden_section(fn, a: float, b: float, tol: float = GOLDEN_TOL) -> float:
    """Minimizer of a unimodal ``fn`` on [a, b]."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = fn(d)
    return 0.5 * (a + b)


@dataclass
class DispersionResult:
    c: float
    lambda_star: float
    attained: bool
    lam_max: float
    lambdas: np.ndarray
    speeds: np.ndarray


def dispersion_speed(m: DispersalMeasure, f: Nonlinearity, lam_hi: float | None = None) -> DispersionResult:
    """min over lam in (0, lam_hi] of c(lam), by a log-spaced scan refined by golden section.

    ``attained`` is False when the scan minimum sits at lam_hi, in which case the
    reported value is only the boundary value of a non-attained infimum.
    """
    fp = derivative_at_zero(f)
    if not fp > 0:
        raise ValueError("dispersion speed needs f'(0) > 0")
    hi = lambda_max(m) if lam_hi is None else lam_hi
    lams = scan_grid(hi)
    speeds = np.array([speed_of_rate(m, f, lam, fp) for lam in lams])
    i = int(np.argmin(speeds))
    if i == len(lams) - 1:
        return DispersionResult(float(speeds[-1]), float(hi), False, hi, lams, speeds)
    a = lams[max(i - 1, 0)]
    b = lams[i + 1]
    lam = golden_section(lambda s: speed_of_rate(m, f, s, fp), a, b)
    return DispersionResult(speed_of_rate(m, f, lam, fp), lam, True, hi, lams, speeds)


def slope_sign_changes(speeds: np.ndarray) -> int:
    s = np.sign(np.diff(speeds))
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def decay_rate(m: DispersalMeasure, f: Nonlinearity, c: float, lam_hi: float | None = None) -> float | None:
    """Smallest lam > 0 with c(lam) = c, i.e. the slow tail of a wave with speed c.

    None when no such rate exists below lam_hi (c below the dispersion speed).
    """
    fp = derivative_at_zero(f)
    hi = lambda_max(m) if lam_hi is None else lam_hi
    lams = scan_grid(hi)
    h = np.array([mgf(m, lam) - 1.0 + fp - c * lam for lam in lams])
    neg = np.nonzero(h <= 0)[0]
    if neg.size == 0:
        return None
    j = int(neg[0])
    if j == 0:
        return float(lams[0])
    g = lambda lam: mgf(m, lam) - 1.0 + fp - c * lam  # noqa: E731
    return float(brentq(g, lams[j - 1], lams[j], xtol=1e-12))
