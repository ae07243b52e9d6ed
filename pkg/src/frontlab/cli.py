"""Scenario runner: ``frontlab simulate|wave|speed|invariants --config FILE --out DIR``.

Exit codes: 0 success, 1 nonconvergence or runtime failure, 2 invariant
violation, 3 configuration error.  Failures also write ``error.json``.
"""

from __future__ import annotations

import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click
import numpy as np

from .config import ConfigError, Scenario, check_simulation_width, load_scenario
from .grid import GridProfile
from .semiflow import StabilityError, evolve
from .speed import FrontLeftDomainError, lambda_scan, speed_report
from .waves import RecursionInvariantError, detect_jump, weinberger_recursion

EXIT_OK, EXIT_NONCONVERGED, EXIT_INVARIANT, EXIT_CONFIG = 0, 1, 2, 3

log = logging.getLogger("frontlab")


def _clean(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_json(path: Path, obj):
    path.write_text(json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n", newline="\n")


def write_csv(path: Path, header: list[str], columns):
    rows = np.column_stack([np.asarray(c, dtype=float) for c in columns])
    lines = [",".join(header)]
    lines += [",".join(f"{v:.17g}" for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", newline="\n")


def initial_profile(s: Scenario) -> GridProfile:
    init = s.simulate.initial
    kind = init.get("kind", "heaviside")
    if kind == "heaviside":
        return GridProfile.heaviside(s.grid, float(init.get("x0", 0.0)))
    if kind == "constant":
        return GridProfile.constant(s.grid, float(init["alpha"]))
    raise ConfigError(f"unknown initial kind {kind!r}")


def run_simulate(s: Scenario, out: Path) -> int:
    """Evolve the initial datum; write snapshot_<t>.csv files and front.csv."""
    check_simulation_width(s)
    p = s.simulate
    if p.T < 0 or not p.snapshot_interval > 0:
        raise ConfigError("simulate needs T >= 0 and snapshot_interval > 0")
    u = initial_profile(s)
    n_snap = int(math.floor(p.T / p.snapshot_interval + 1e-9))
    times = [i * p.snapshot_interval for i in range(n_snap + 1)]
    if p.T - times[-1] > 1e-9:
        times.append(p.T)
    front_t, front_x = [0.0], [u.level_crossing(0.5)]
    t_prev = 0.0
    for t in times:
        if t > t_prev:
            def cb(tt, v, base=t_prev):
                front_t.append(base + tt)
                front_x.append(v.level_crossing(0.5))

            u = evolve(s.measure, s.nonlinearity, u, t - t_prev, s.semiflow, callback=cb)
            t_prev = t
        write_csv(out / f"snapshot_{t:g}.csv", ["x", "u"], [s.grid.x, u.values])
    write_csv(out / "front.csv", ["t", "x_half"], [front_t, front_x])
    return EXIT_OK


def run_wave(s: Scenario, out: Path) -> int:
    """Wave profile at speed c; writes profile.csv and wave.json."""
    if s.wave.c is None:
        raise ConfigError("wave needs c")
    res = weinberger_recursion(s.measure, s.nonlinearity, float(s.wave.c), s.wave.recursion, s.grid)
    jump, at = detect_jump(res.psi)
    write_csv(out / "profile.csv", ["x", "psi"], [s.grid.x, res.psi.values])
    meta = res.metadata()
    meta.update(
        scenario=s.name,
        max_jump=jump,
        max_jump_x=float(s.grid.x[at]),
        level_history=res.level_history,
        grid={"x_min": s.grid.x_min, "x_max": s.grid.x_max, "n": s.grid.n},
    )
    write_json(out / "wave.json", meta)
    return EXIT_OK if res.converged else EXIT_NONCONVERGED


def run_speed(s: Scenario, out: Path) -> int:
    """All applicable speed estimators; writes speed.json and lambda_scan.csv."""
    p = s.speed
    rep = speed_report(
        s.measure,
        s.nonlinearity,
        wave_grid=s.grid,
        spread_grid=p.spread_grid or s.grid,
        T=p.T,
        bracket=p.bracket,
        bisect_tol=p.tol,
        rec_cfg=p.recursion,
        sf_cfg=s.semiflow,
        certificate=p.certificate,
        xi_max=p.xi_max,
        eps=p.eps,
    )
    d = rep.to_dict()
    d["scenario"] = s.name
    write_json(out / "speed.json", d)
    try:
        rows = lambda_scan(s.measure, s.nonlinearity)
        write_csv(out / "lambda_scan.csv", ["lambda", "c_lambda", "upper_lambda"], list(zip(*rows)))
    except ValueError as exc:
        log.warning("no lambda scan: %s", exc)
    return EXIT_OK if rep.chain_ok else EXIT_INVARIANT


def run_invariants(s: Scenario, out: Path) -> int:
    """Seeded property suites; writes invariants.json."""
    from .invariants import run_all

    rep = run_all(s.measure, s.nonlinearity, s.grid, s.semiflow, s.seed,
                  pairs=s.invariants.pairs, T=s.invariants.T)
    d = rep.to_dict()
    d.update(scenario=s.name, seed=s.seed)
    write_json(out / "invariants.json", d)
    return EXIT_OK if rep.passed else EXIT_INVARIANT


COMMANDS = {
    "simulate": run_simulate,
    "wave": run_wave,
    "speed": run_speed,
    "invariants": run_invariants,
}


def run_one(command: str, config: str, out: str) -> int:
    """Run a subcommand on one scenario file; errors become error.json plus an exit code."""
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        s = load_scenario(config)
        return COMMANDS[command](s, out_dir)
    except (ConfigError, StabilityError) as exc:
        code = EXIT_CONFIG
        err = exc
    except RecursionInvariantError as exc:
        code = EXIT_INVARIANT
        err = exc
    except (FrontLeftDomainError, ArithmeticError, RuntimeError, ValueError) as exc:
        code = EXIT_NONCONVERGED
        err = exc
    write_json(out_dir / "error.json", {"command": command, "error": type(err).__name__,
                                        "message": str(err), "exit_code": code})
    return code


def _dispatch(command, configs, out, jobs):
    configs = list(configs)
    if len(configs) == 1:
        outs = [out]
    else:
        outs = [str(Path(out) / Path(c).stem) for c in configs]
        if len(set(outs)) != len(outs):
            click.echo("scenario files must have distinct names", err=True)
            sys.exit(EXIT_CONFIG)
    if jobs > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            codes = list(ex.map(run_one, [command] * len(configs), configs, outs))
    else:
        codes = [run_one(command, c, o) for c, o in zip(configs, outs)]
    for c, code in zip(configs, codes):
        click.echo(f"{command} {c}: exit {code}")
    sys.exit(max(codes))


def _options(fn):
    fn = click.option("--jobs", default=1, show_default=True, help="parallel scenarios")(fn)
    fn = click.option("--out", required=True, type=click.Path(file_okay=False))(fn)
    fn = click.option("--config", "configs", required=True, multiple=True,
                      type=click.Path(exists=True, dir_okay=False))(fn)
    return fn


@click.group()
@click.option("-v", "--verbose", count=True)
def main(verbose):
    """Numerical lab for u_t = mu*u - u + f(u)."""
    logging.basicConfig(level=logging.WARNING - 10 * min(verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")


for _name in COMMANDS:
    def _make(name):
        @main.command(name)
        @_options
        def cmd(configs, out, jobs):
            _dispatch(name, configs, out, jobs)

        cmd.__doc__ = COMMANDS[name].__doc__ or f"Run the {name} scenario."
        return cmd

    _make(_name)


if __name__ == "__main__":
    main()
