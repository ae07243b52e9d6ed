"""Uniform truncated grids and grid functions with declared far-field values."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Relative snapping tolerance for shifts that are numerically whole cells.
_SNAP = 1e-9


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if self.n < 16:
            raise ValueError(f"grid needs n >= 16 nodes, got {self.n}")
        if not self.x_max > self.x_min:
            raise ValueError("grid needs x_max > x_min")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n)

    def refined(self) -> Grid:
        """Same interval with the spacing halved."""
        return Grid(self.x_min, self.x_max, 2 * self.n - 1)

    def index_of(self, x0: float) -> int:
        """Node index nearest to ``x0`` (clipped to the grid)."""
        i = int(round((x0 - self.x_min) / self.dx))
        return min(max(i, 0), self.n - 1)


@dataclass(frozen=True, eq=False)
class GridProfile:
    """Values on a grid plus the limits used outside ``[x_min, x_max]``."""

    grid: Grid
    values: np.ndarray
    left: float = 0.0
    right: float = 1.0

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} values, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("profile values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "left", float(self.left))
        object.__setattr__(self, "right", float(self.right))

    @classmethod
    def from_function(cls, grid: Grid, fn, left=None, right=None) -> GridProfile:
        x = grid.x
        v = np.asarray(fn(x), dtype=float) * np.ones_like(x)
        return cls(grid, v, v[0] if left is None else left, v[-1] if right is None else right)

    @classmethod
    def constant(cls, grid: Grid, alpha: float) -> GridProfile:
        return cls(grid, np.full(grid.n, float(alpha)), alpha, alpha)

    @classmethod
    def heaviside(cls, grid: Grid, x0: float = 0.0) -> GridProfile:
        """Left-continuous step: 0 for x <= x0, 1 for x > x0."""
        x = grid.x
        return cls(grid, (x > x0 + 1e-12 * grid.dx).astype(float), 0.0, 1.0)

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    def with_values(self, values, left=None, right=None) -> GridProfile:
        return GridProfile(
            self.grid,
            values,
            self.left if left is None else left,
            self.right if right is None else right,
        )

    def is_monotone_unit(self, tol: float = 0.0) -> bool:
        """True when values and limits lie in [0, 1] and are nondecreasing."""
        ext = self.extended()
        return bool(
            ext.min() >= -tol and ext.max() <= 1.0 + tol and np.all(np.diff(ext) >= -tol)
        )

    def is_class_m(self, tol: float = 0.0) -> bool:
        """Monotone, [0, 1]-valued, with far fields 0 on the left and 1 on the right."""
        return self.is_monotone_unit(tol) and self.left == 0.0 and self.right == 1.0

    def extended(self) -> np.ndarray:
        return np.concatenate(([self.left], self.values, [self.right]))

    def level_crossing(self, level: float = 0.5) -> float:
        """Linearly interpolated position of the first upward crossing of ``level``.

        Returns ``nan`` when the values never straddle the level.
        """
        v = self.values
        above = np.nonzero(v >= level)[0]
        if above.size == 0 or v[0] >= level:
            return math.nan
        i = above[0]
        x = self.grid.x
        v0, v1 = v[i - 1], v[i]
        return float(x[i - 1] + (level - v0) / (v1 - v0) * self.grid.dx)

    def sup_distance(self, other: GridProfile, lo: int = 0, hi: int | None = None) -> float:
        hi = self.grid.n if hi is None else hi
        return float(np.max(np.abs(self.values[lo:hi] - other.values[lo:hi])))


def int_shift(values: np.ndarray, left: float, right: float, k: int) -> np.ndarray:
    """out[i] = values[i - k], reading ``left``/``right`` beyond the ends."""
    n = values.size
    out = np.empty(n)
    if k >= n:
        out[:] = left
    elif k <= -n:
        out[:] = right
    elif k > 0:
        out[:k] = left
        out[k:] = values[: n - k]
    elif k < 0:
        out[:k] = values[-k:]
        out[k:] = right
    else:
        out[:] = values
    return out


def split_shift(s: float) -> tuple[int, float]:
    """Split a shift in cells into floor part and fraction, snapping near-integers."""
    r = round(s)
    if abs(s - r) <= _SNAP * max(1.0, abs(s)):
        return int(r), 0.0
    k = math.floor(s)
    return k, s - k


def shifted_read(values: np.ndarray, left: float, right: float, s: float) -> np.ndarray:
    """Evaluate u(x_i - s*dx) at every node, linear interpolation between nodes."""
    k, frac = split_shift(s)
    a = int_shift(values, left, right, k)
    if frac == 0.0:
        return a
    b = int_shift(values, left, right, k + 1)
    return (1.0 - frac) * a + frac * b


def translate(u: GridProfile, cells: int) -> GridProfile:
    """Shift by a whole number of cells: the result at x equals u(x - cells*dx)."""
    return u.with_values(int_shift(u.values, u.left, u.right, int(cells)))


def fractional_translate(u: GridProfile, x0: float) -> GridProfile:
    """Shift by an arbitrary distance ``x0``; the result at x is u(x - x0).

    Uses linear interpolation, so monotonicity and bounds are preserved.
    """
    return u.with_values(shifted_read(u.values, u.left, u.right, x0 / u.grid.dx))
