"""Dispersal measures: weighted atoms plus a quadrature-discretized density."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grid import GridProfile, shifted_read

MASS_TOL = 1e-12


class MomentOverflowError(ArithmeticError):
    """An exponential moment that does not fit in a double."""

    def __init__(self, lam: float):
        super().__init__(f"moment effectively infinite at lambda={lam:g}")
        self.lam = lam


@dataclass(frozen=True, eq=False)
class DispersalMeasure:
    atoms: np.ndarray  # shape (k, 2): location, weight
    density_nodes: np.ndarray  # shape (q, 2): node, quadrature weight
    normalization_correction: float = 0.0
    label: str = field(default="", compare=False)

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=float).reshape(-1, 2)
        dens = np.asarray(self.density_nodes, dtype=float).reshape(-1, 2)
        if np.any(atoms[:, 1] < 0) or np.any(dens[:, 1] < 0):
            raise ValueError("measure weights must be nonnegative")
        if not (np.all(np.isfinite(atoms)) and np.all(np.isfinite(dens))):
            raise ValueError("measure data must be finite")
        if len(np.unique(atoms[:, 0])) != len(atoms):
            raise ValueError("atom locations must be pairwise distinct")
        total = atoms[:, 1].sum() + dens[:, 1].sum()
        if total <= 0:
            raise ValueError("measure has zero mass")
        corr = self.normalization_correction
        if abs(total - 1.0) > MASS_TOL:
            atoms = atoms.copy()
            dens = dens.copy()
            atoms[:, 1] /= total
            dens[:, 1] /= total
            corr = total - 1.0
        atoms.setflags(write=False)
        dens.setflags(write=False)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "density_nodes", dens)
        object.__setattr__(self, "normalization_correction", float(corr))

    @classmethod
    def from_atoms(cls, atoms, label: str = "") -> DispersalMeasure:
        return cls(np.asarray(atoms, dtype=float).reshape(-1, 2), np.empty((0, 2)), label=label)

    @classmethod
    def dirac(cls, y: float = 0.0) -> DispersalMeasure:
        return cls.from_atoms([(y, 1.0)], label=f"delta_{y:g}")

    @classmethod
    def from_density(cls, nodes, weights, atoms=(), label: str = "") -> DispersalMeasure:
        dens = np.column_stack([np.asarray(nodes, float), np.asarray(weights, float)])
        return cls(np.asarray(atoms, dtype=float).reshape(-1, 2), dens, label=label)

    # combined node/weight view used by every query
    @property
    def locations(self) -> np.ndarray:
        return np.concatenate([self.atoms[:, 0], self.density_nodes[:, 0]])

    @property
    def weights(self) -> np.ndarray:
        return np.concatenate([self.atoms[:, 1], self.density_nodes[:, 1]])

    @property
    def support_radius(self) -> float:
        """max |y| over nodes carrying positive weight."""
        y = self.locations[self.weights > 0]
        return float(np.max(np.abs(y))) if y.size else 0.0

    def reflected(self) -> DispersalMeasure:
        """The image measure under y -> -y."""
        a = self.atoms.copy()
        d = self.density_nodes.copy()
        a[:, 0] *= -1.0
        d[:, 0] *= -1.0
        return DispersalMeasure(a, d, label=f"reflected {self.label}".strip())


def mass(m: DispersalMeasure) -> float:
    return float(m.atoms[:, 1].sum() + m.density_nodes[:, 1].sum())


def mean_displacement(m: DispersalMeasure) -> float:
    return float(np.dot(m.weights, m.locations))


def _weighted_exp(m: DispersalMeasure, exponents: np.ndarray, lam: float) -> float:
    w = m.weights
    pos = w > 0
    with np.errstate(over="ignore"):
        val = float(np.dot(w[pos], np.exp(exponents[pos])))
    if not math.isfinite(val):
        raise MomentOverflowError(lam)
    return val


def exp_moment(m: DispersalMeasure, lam: float) -> float:
    """Integral of exp(lam*|y|) against the measure."""
    if lam < 0:
        raise ValueError("exp_moment needs lambda >= 0")
    return _weighted_exp(m, lam * np.abs(m.locations), lam)


def mgf(m: DispersalMeasure, lam: float) -> float:
    """Integral of exp(-lam*y) against the measure."""
    return _weighted_exp(m, -lam * m.locations, lam)


def convolve(m: DispersalMeasure, u: GridProfile) -> GridProfile:
    """(m * u)(x_i) = sum_k w_k u(x_i - y_k).

    Off-grid reads are linear interpolations; reads outside the grid take the
    profile's far-field value on that side.  Since the mass is one, the far
    fields of the result equal those of ``u``.
    """
    dx = u.grid.dx
    out = np.zeros(u.grid.n)
    for y, w in zip(m.locations, m.weights):
        if w == 0.0:
            continue
        out += w * shifted_read(u.values, u.left, u.right, y / dx)
    return u.with_values(out)


# ---------------------------------------------------------------- densities


def _midpoint(a: float, b: float, nodes: int) -> tuple[np.ndarray, float]:
    if nodes < 1 or not b > a:
        raise ValueError("density needs nodes >= 1 and a nonempty support")
    h = (b - a) / nodes
    return a + h * (np.arange(nodes) + 0.5), h


def uniform_density(a: float, b: float, nodes: int = 64):
    y, h = _midpoint(a, b, nodes)
    return y, np.full(nodes, h / (b - a))


def gaussian_density(mean: float, sigma: float, radius: float = 6.0, nodes: int = 64):
    y, h = _midpoint(mean - radius * sigma, mean + radius * sigma, nodes)
    p = np.exp(-0.5 * ((y - mean) / sigma) ** 2) * h
    return y, p / p.sum()


def exponential_tilted_density(rate: float, truncation: float, nodes: int = 64):
    """Density proportional to exp(-rate*y) on [0, truncation]."""
    y, h = _midpoint(0.0, truncation, nodes)
    p = np.exp(-rate * y) * h
    return y, p / p.sum()


DENSITY_KINDS = {
    "uniform": lambda d: uniform_density(*d["support"], nodes=d.get("nodes", 64)),
    "gaussian": lambda d: gaussian_density(
        d["mean"], d["sigma"], d.get("radius", 6.0), nodes=d.get("nodes", 64)
    ),
    "exponential_tilted": lambda d: exponential_tilted_density(
        d["rate"], d["truncation"], nodes=d.get("nodes", 64)
    ),
}


def measure_from_config(spec: dict) -> DispersalMeasure:
    """Build a measure from ``{"atoms": [[y, w], ...], "density": {...}}``.

    The density carries mass ``density["mass"]`` if given, otherwise whatever
    the atoms leave over.
    """
    atoms = np.asarray(spec.get("atoms", []), dtype=float).reshape(-1, 2)
    dspec = spec.get("density")
    if dspec is None:
        return DispersalMeasure(atoms, np.empty((0, 2)), label=spec.get("label", ""))
    kind = dspec.get("kind")
    if kind not in DENSITY_KINDS:
        raise ValueError(f"unknown density kind {kind!r}")
    y, q = DENSITY_KINDS[kind](dspec)
    dmass = dspec.get("mass", 1.0 - atoms[:, 1].sum())
    if dmass < 0:
        raise ValueError("atoms carry more than unit mass")
    return DispersalMeasure(atoms, np.column_stack([y, dmass * q]), label=spec.get("label", ""))
