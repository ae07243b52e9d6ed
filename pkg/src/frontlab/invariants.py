"""Randomized property suites for the discrete semiflow.

Each suite returns a SuiteResult with the worst observed margin; a suite passes
when that margin is within its tolerance.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .grid import Grid, GridProfile, translate
from .measure import DispersalMeasure, exp_moment
from .nonlinearity import Nonlinearity, lipschitz_upper
from .semiflow import (
    EvolveLog,
    MAX_CORRECTION,
    SemiflowConfig,
    StabilityError,
    check_stability,
    evolve,
    logistic,
)

COMPARISON_TOL = 1e-8
LOGISTIC_TOL = 1e-6
TRANSLATION_TOL = 1e-12
SEMIGROUP_TOL = 1e-10


@dataclass
class SuiteResult:
    name: str
    passed: bool
    worst: float = 0.0
    tolerance: float = 0.0
    skipped: bool = False
    reason: str = ""
    cases: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class InvariantReport:
    suites: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.passed or s.skipped for s in self.suites)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "suites": [s.to_dict() for s in self.suites]}


def random_monotone(rng: np.random.Generator, grid: Grid, breaks: int = 8, span: float = 0.5):
    """Piecewise-linear class-M profile with random breakpoints in the middle ``span`` of the grid."""
    mid = 0.5 * (grid.x_min + grid.x_max)
    half = 0.5 * span * (grid.x_max - grid.x_min)
    xs = np.sort(rng.uniform(mid - half, mid + half, breaks))
    ys = np.concatenate(([0.0], np.sort(rng.uniform(0.0, 1.0, breaks - 2)), [1.0]))
    return GridProfile(grid, np.interp(grid.x, xs, ys), 0.0, 1.0)


def random_ordered_pair(rng, grid, breaks=8, span=0.5):
    a = random_monotone(rng, grid, breaks, span)
    b = random_monotone(rng, grid, breaks, span)
    lo = np.minimum(a.values, b.values)
    hi = np.maximum(a.values, b.values)
    return a.with_values(lo), a.with_values(hi)


def comparison_suite(m, f, grid, cfg, rng, pairs=100, T=5.0) -> tuple[SuiteResult, SuiteResult]:
    """Ordering of evolved pairs, plus the clamp/monotonicity record of every step."""
    guard = cfg.guard(m, grid)
    worst_order = 0.0
    log = EvolveLog()
    for _ in range(pairs):
        u1, u2 = random_ordered_pair(rng, grid)
        v1 = evolve(m, f, u1, T, cfg, log)
        v2 = evolve(m, f, u2, T, cfg, log)
        gap = v1.values[guard:-guard] - v2.values[guard:-guard]
        worst_order = max(worst_order, float(np.max(gap)))
    worst_inv = max(log.max_correction, log.max_monotonicity_violation)
    return (
        SuiteResult("comparison", worst_order <= COMPARISON_TOL, worst_order, COMPARISON_TOL,
                    cases=pairs),
        SuiteResult("invariance_M_and_unit_interval", worst_inv < MAX_CORRECTION, worst_inv,
                    MAX_CORRECTION, cases=log.steps),
    )


def monostability_suite(m, f, grid, cfg, alphas=(0.1, 0.5, 0.9), T=1.0) -> SuiteResult:
    """Constants increase strictly; for kpp they follow the logistic curve."""
    if not f.is_monostable():
        return SuiteResult("monostability", True, skipped=True,
                           reason="f not strictly positive on (0,1)")
    worst = 0.0
    ok = True
    for a in alphas:
        v = evolve(m, f, GridProfile.constant(grid, a), T, cfg)
        ok &= bool(np.all(v.values > a))
        if f.kind == "kpp_gamma":
            worst = max(worst, float(np.max(np.abs(v.values - logistic(a, T, f.gamma)))))
    return SuiteResult("monostability", ok and worst <= LOGISTIC_TOL, worst, LOGISTIC_TOL,
                       cases=len(alphas))


def translation_suite(m, f, grid, cfg, rng, cells=5, T=2.0, cases=5) -> SuiteResult:
    """evolve and translate commute away from the (doubly guarded) boundaries.

    Test profiles are flat near both ends, so the far-field fill of the shift
    agrees with the data it replaces.
    """
    guard = cfg.guard(m, grid)
    lo, hi = 2 * guard + cells, grid.n - 2 * guard - cells
    worst = 0.0
    for _ in range(cases):
        u = random_monotone(rng, grid, span=0.3)
        a = evolve(m, f, translate(u, cells), T, cfg)
        b = translate(evolve(m, f, u, T, cfg), cells)
        worst = max(worst, float(np.max(np.abs(a.values[lo:hi] - b.values[lo:hi]))))
    return SuiteResult("translation", worst <= TRANSLATION_TOL, worst, TRANSLATION_TOL, cases=cases)


def semigroup_suite(m, f, grid, cfg, rng, cases=3) -> SuiteResult:
    worst = 0.0
    for _ in range(cases):
        u = random_monotone(rng, grid)
        s, t = cfg.dt * int(rng.integers(1, 10)), cfg.dt * int(rng.integers(1, 10))
        a = evolve(m, f, evolve(m, f, u, s, cfg), t, cfg)
        b = evolve(m, f, u, s + t, cfg)
        worst = max(worst, a.sup_distance(b))
    return SuiteResult("semigroup", worst <= SEMIGROUP_TOL, worst, SEMIGROUP_TOL, cases=cases)


def envelope_constant(m: DispersalMeasure, f: Nonlinearity, lam: float) -> float:
    """K = int exp(lam |y|) dmu - 1 + sup slope of f; the working range stands in for R."""
    return max(exp_moment(m, lam) - 1.0 + lipschitz_upper(f), 0.0)


def envelope_suite(m, f, grid, cfg, rng, I=10.0, delta=0.01, lam=1.0, T=1.0, J=2.0,
                   cases=5) -> SuiteResult:
    """Data agreeing with a Heaviside step on [-I, I]; difference on [-J, J] stays under the envelope."""
    K = envelope_constant(m, f, lam)
    bound = math.exp(K * T) * min(delta * math.cosh(lam * J), 1.0)
    base = GridProfile.heaviside(grid)
    ref = evolve(m, f, base, T, cfg)
    inside = np.abs(grid.x) <= J
    outside = np.abs(grid.x) > I
    worst = 0.0
    for _ in range(cases):
        p = np.where(outside, rng.uniform(-1.0, 1.0, grid.n), 0.0)
        v = np.clip(base.values + p, 0.0, 1.0)
        u = base.with_values(v, float(v[0]), float(v[-1]))
        d = np.abs(evolve(m, f, u, T, cfg).values - ref.values)
        worst = max(worst, float(np.max(d[inside])))
    return SuiteResult("envelope", worst <= bound, worst, bound, cases=cases)


def stability_suite(f, cfg) -> SuiteResult:
    """Passes when the configured dt satisfies the stability guard."""
    try:
        check_stability(f, cfg.dt)
    except StabilityError as exc:
        return SuiteResult("stability_guard", False, cfg.dt, reason=str(exc))
    return SuiteResult("stability_guard", True, cfg.dt)


def run_all(m, f, grid, cfg: SemiflowConfig, seed: int, pairs: int = 100, T: float = 5.0):
    rng = np.random.default_rng(seed)
    rep = InvariantReport()
    st = stability_suite(f, cfg)
    rep.suites.append(st)
    if not st.passed and cfg.enforce_stability:
        return rep
    rep.suites.extend(comparison_suite(m, f, grid, cfg, rng, pairs, T))
    rep.suites.append(monostability_suite(m, f, grid, cfg))
    rep.suites.append(translation_suite(m, f, grid, cfg, rng))
    rep.suites.append(semigroup_suite(m, f, grid, cfg, rng))
    rep.suites.append(envelope_suite(m, f, grid, cfg, rng))
    return rep
