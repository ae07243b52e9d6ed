"""JSON scenario documents.

A scenario is one JSON object::

    {
      "name": "two_atom_kpp1",
      "measure": {"atoms": [[-1, 0.5], [1, 0.5]]},
      "nonlinearity": {"kind": "kpp", "gamma": 1.0},
      "grid": {"x_min": -40, "x_max": 40, "n": 1601},
      "semiflow": {"dt": null, "stepper": "rk4"},
      "simulate": {"T": 10, "snapshot_interval": 1, "initial": {"kind": "heaviside", "x0": 0}},
      "wave": {"c": 1.7, "recursion": {...}},
      "speed": {"bracket": [1, 2], "tol": 0.05, "T": 30, "spread_grid": {...}, "certificate": false},
      "invariants": {"pairs": 100, "T": 5},
      "seed": 42
    }

Only the blocks needed by the subcommand have to be present.  ``semiflow.dt``
null (or absent) means the stability-limited step.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

from .grid import Grid
from .measure import DispersalMeasure, measure_from_config
from .nonlinearity import Nonlinearity, nonlinearity_from_config
from .semiflow import SemiflowConfig, stable_dt
from .waves import RecursionConfig


class ConfigError(ValueError):
    pass


@dataclass
class SimulateParams:
    T: float = 10.0
    snapshot_interval: float = 1.0
    initial: dict = field(default_factory=lambda: {"kind": "heaviside", "x0": 0.0})


@dataclass
class WaveParams:
    c: float | None = None
    recursion: RecursionConfig = field(default_factory=RecursionConfig)


@dataclass
class SpeedParams:
    bracket: tuple | None = None
    tol: float = 0.05
    T: float | None = None
    spread_grid: Grid | None = None
    certificate: bool = False
    xi_max: float = 1.0
    eps: float = 0.05
    recursion: RecursionConfig = field(default_factory=RecursionConfig)


@dataclass
class InvariantParams:
    pairs: int = 100
    T: float = 5.0


@dataclass
class Scenario:
    name: str
    measure: DispersalMeasure
    nonlinearity: Nonlinearity
    grid: Grid
    semiflow: SemiflowConfig
    simulate: SimulateParams = field(default_factory=SimulateParams)
    wave: WaveParams = field(default_factory=WaveParams)
    speed: SpeedParams = field(default_factory=SpeedParams)
    invariants: InvariantParams = field(default_factory=InvariantParams)
    seed: int = 0
    raw: dict = field(default_factory=dict, repr=False)


def _build(cls, data: dict | None):
    data = dict(data or {})
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise ConfigError(f"unknown {cls.__name__} keys: {sorted(unknown)}")
    return cls(**data)


def _grid(d: dict) -> Grid:
    try:
        return Grid(float(d["x_min"]), float(d["x_max"]), int(d["n"]))
    except KeyError as exc:
        raise ConfigError(f"grid needs {exc.args[0]}") from None


TOP_LEVEL_KEYS = {
    "name", "measure", "nonlinearity", "grid", "semiflow",
    "simulate", "wave", "speed", "invariants", "seed", "description",
}


def scenario_from_dict(d: dict) -> Scenario:
    unknown = set(d) - TOP_LEVEL_KEYS
    if unknown:
        raise ConfigError(f"unknown scenario keys: {sorted(unknown)}")
    try:
        m = measure_from_config(d["measure"])
        f = nonlinearity_from_config(d["nonlinearity"])
        grid = _grid(d["grid"])
        sf = dict(d.get("semiflow") or {})
        if sf.get("dt") is None:
            sf["dt"] = stable_dt(f)
        sf_cfg = _build(SemiflowConfig, sf)

        sim = _build(SimulateParams, d.get("simulate"))
        wv = dict(d.get("wave") or {})
        wv["recursion"] = _build(RecursionConfig, wv.get("recursion"))
        wave = _build(WaveParams, wv)
        sp = dict(d.get("speed") or {})
        sp["recursion"] = _build(RecursionConfig, sp.get("recursion"))
        if sp.get("spread_grid") is not None:
            sp["spread_grid"] = _grid(sp["spread_grid"])
        if sp.get("bracket") is not None:
            sp["bracket"] = tuple(float(c) for c in sp["bracket"])
        speed = _build(SpeedParams, sp)
        inv = _build(InvariantParams, d.get("invariants"))
        return Scenario(
            name=str(d.get("name", "scenario")),
            measure=m,
            nonlinearity=f,
            grid=grid,
            semiflow=sf_cfg,
            simulate=sim,
            wave=wave,
            speed=speed,
            invariants=inv,
            seed=int(d.get("seed", 0)),
            raw=d,
        )
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{type(exc).__name__}: {exc}") from exc


def load_scenario(path: str | Path) -> Scenario:
    try:
        d = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read scenario {path}: {exc}") from exc
    if not isinstance(d, dict):
        raise ConfigError("scenario must be a JSON object")
    return scenario_from_dict(d)


def check_simulation_width(s: Scenario):
    """The measure's reach over the run must stay under a quarter of the domain."""
    reach = s.measure.support_radius * s.simulate.T
    width = s.grid.x_max - s.grid.x_min
    if not reach < width / 4:
        raise ConfigError(f"support radius * T = {reach:g} is not below a quarter of the domain ({width / 4:g})")
