"""Monostable reaction terms f and the slope functionals used by the speed bounds."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P

# Slope infima/suprema are taken with u and u + h inside this band.
WORKING_RANGE = (-1.0, 2.0)
N_POSITIVITY = 10_000


class NotMonostableError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Nonlinearity:
    """``kind`` is one of ``kpp_gamma``, ``tail_extension``, ``custom_polynomial``.

    ``tail_extension`` wraps an interior nonlinearity (default ``kpp(gamma)``)
    and continues it outside [0, 1] as gamma*u below 0, -2(u-1) on (1, 2) and
    -u from 2 on; this is the modified reaction used to certify negative speeds.
    """

    kind: str
    gamma: float = 0.0
    coeffs: tuple = ()
    interior: Nonlinearity | None = None
    strict: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self.kind not in ("kpp_gamma", "tail_extension", "custom_polynomial"):
            raise ValueError(f"unknown nonlinearity kind {self.kind!r}")
        if self.kind == "custom_polynomial":
            c = tuple(float(a) for a in self.coeffs) or (0.0,)
            c = (0.0,) + c[1:]  # f(0) = 0
            object.__setattr__(self, "coeffs", c)
            if abs(P.polyval(1.0, c)) > 1e-12:
                raise NotMonostableError(f"polynomial has f(1) = {P.polyval(1.0, c):g} != 0")
        if self.kind == "tail_extension" and self.interior is None:
            object.__setattr__(self, "interior", kpp(self.gamma, strict=self.strict))
        if self.strict and not self.is_monostable():
            raise NotMonostableError(f"{self} is not positive on (0, 1)")

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        if self.kind == "kpp_gamma":
            out = self.gamma * u * (1.0 - u)
        elif self.kind == "custom_polynomial":
            out = P.polyval(u, self.coeffs)
        else:
            inner = self.interior(np.clip(u, 0.0, 1.0))
            out = np.where(
                u < 0.0,
                self.gamma * u,
                np.where(u <= 1.0, inner, np.where(u < 2.0, -2.0 * (u - 1.0), -u)),
            )
        return out if out.ndim else float(out)

    def is_monostable(self) -> bool:
        u = np.linspace(0.0, 1.0, N_POSITIVITY + 2)[1:-1]
        return bool(np.all(self(u) > 0.0))

    def slope_bounds(self) -> tuple[float, float]:
        """(inf, sup) of difference quotients (f(u+h)-f(u))/h over the working range."""
        if self.kind != "tail_extension":
            return self.slope_bounds_on(*WORKING_RANGE)
        lo_i, hi_i = self.interior.slope_bounds_on(0.0, 1.0)
        # gamma on (-1, 0), -2 on (1, 2); the -u branch starts at the range edge
        return min(lo_i, self.gamma, -2.0), max(hi_i, self.gamma, -2.0)

    def slope_bounds_on(self, a: float, b: float) -> tuple[float, float]:
        if self.kind == "tail_extension":
            return self.interior.slope_bounds_on(max(a, 0.0), min(b, 1.0))
        if self.kind == "kpp_gamma":
            ends = sorted([self.gamma * (1.0 - 2.0 * a), self.gamma * (1.0 - 2.0 * b)])
            return ends[0], ends[1]
        d = P.polyder(self.coeffs)
        cand = [a, b]
        if len(d) > 1:
            cand += [r.real for r in P.polyroots(P.polyder(d))
                     if abs(r.imag) < 1e-12 and a < r.real < b]
        vals = P.polyval(np.array(cand), d)
        return float(vals.min()), float(vals.max())


def kpp(gamma: float = 1.0, strict: bool = True) -> Nonlinearity:
    """f(u) = gamma * u * (1 - u)."""
    return Nonlinearity("kpp_gamma", gamma=float(gamma), strict=strict)


def tail_extension(gamma: float, interior: Nonlinearity | None = None) -> Nonlinearity:
    return Nonlinearity("tail_extension", gamma=float(gamma), interior=interior)


def polynomial(coeffs, strict: bool = True) -> Nonlinearity:
    """f(u) = sum_j coeffs[j] u**j with the constant term forced to zero."""
    return Nonlinearity("custom_polynomial", coeffs=tuple(coeffs), strict=strict)


def eval_f(f: Nonlinearity, u):
    return f(u)


def sup_slope_from_zero(f: Nonlinearity) -> float:
    """sup over h > 0 of f(h)/h."""
    if f.kind == "kpp_gamma":
        # gamma*(1 - h) decreases in h, so the sup is the h -> 0+ limit
        return f.gamma
    if f.kind == "tail_extension":
        # the branches beyond u = 1 are negative
        return max(_sup_slope_on(f.interior, 1.0), 0.0)
    return _sup_slope_on(f, 2.0)


def _sup_slope_on(f: Nonlinearity, h_max: float) -> float:
    if f.kind == "kpp_gamma":
        return f.gamma
    h = np.linspace(0.0, h_max, 200_001)[1:]
    limit0 = f.coeffs[1] if len(f.coeffs) > 1 else 0.0
    return float(max(np.max(f(h) / h), limit0))


def derivative_at_zero(f: Nonlinearity) -> float:
    if f.kind == "kpp_gamma":
        return f.gamma
    if f.kind == "tail_extension":
        return derivative_at_zero(f.interior)
    d6 = (f(1e-6) - f(-1e-6)) / 2e-6
    d7 = (f(1e-7) - f(-1e-7)) / 2e-7
    if abs(d6 - d7) > 1e-4 * max(abs(d6), 1e-12) and abs(d6 - d7) > 1e-10:
        raise ArithmeticError(f"finite differences disagree: {d6} vs {d7}")
    return float(d6)


def comparison_constant(f: Nonlinearity) -> float:
    """K = 1 - inf (f(u+h) - f(u))/h over the working range."""
    return 1.0 - f.slope_bounds()[0]


def lipschitz_upper(f: Nonlinearity) -> float:
    """sup (f(u+h) - f(u))/h over the working range."""
    return f.slope_bounds()[1]


def is_linearly_determinate(f: Nonlinearity, samples: int = N_POSITIVITY) -> bool:
    """Sampling check of f(u) <= f'(0) u on [0, 1]."""
    u = np.linspace(0.0, 1.0, samples + 1)
    return bool(np.all(f(u) <= derivative_at_zero(f) * u + 1e-12))


def nonlinearity_from_config(spec: dict) -> Nonlinearity:
    kind = spec.get("kind")
    strict = spec.get("strict", True)
    if kind == "kpp":
        return kpp(spec.get("gamma", 1.0), strict=strict)
    if kind == "extension":
        inner = spec.get("interior")
        return Nonlinearity(
            "tail_extension",
            gamma=float(spec["gamma"]),
            interior=None if inner is None else nonlinearity_from_config(inner),
            strict=strict,
        )
    if kind == "poly":
        return polynomial(spec["coeffs"], strict=strict)
    raise ValueError(f"unknown nonlinearity kind {kind!r}")
