"""Run configuration: strict JSON parsing with key-precise errors.

Unknown keys are rejected at every level; JSON syntax errors report line and
column.  All sections are optional except where a command requires them
(solve needs grid; physics defaults to c=1, m=2).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .errors import ConfigError
from .grid import Grid, TWO_THIRDS, HALF
from .functionals import PhysicsParams
from .solver import (
    SolverConfig,
    GaussianInit,
    FileInit,
    PETVIASHVILI,
    NEHARI_DESCENT,
)
from .evolution import EvolveConfig


@dataclass(frozen=True)
class OutputConfig:
    dir: str = "."
    snapshots: bool = False


@dataclass(frozen=True)
class RunConfig:
    grid: Optional[Grid] = None
    physics: PhysicsParams = field(default_factory=lambda: PhysicsParams(c=1.0, m=2))
    solver: SolverConfig = field(default_factory=SolverConfig)
    evolve: Optional[EvolveConfig] = None
    output: OutputConfig = field(default_factory=OutputConfig)

    def require_grid(self) -> Grid:
        if self.grid is None:
            raise ConfigError("grid: section is required for this command")
        return self.grid


def _check_keys(obj: dict, allowed, where: str):
    unknown = sorted(set(obj) - set(allowed))
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {', '.join(unknown)}")


def _need(obj: dict, key: str, where: str):
    if key not in obj:
        raise ConfigError(f"{where}.{key}: required key is missing")
    return obj[key]


def _number(v, where, cond=lambda x: True, desc=""):
    if not isinstance(v, (int, float)) or isinstance(v, bool) or not cond(v):
        raise ConfigError(f"{where}: expected a number{desc}, got {v!r}")
    return float(v)


def _integer(v, where, cond=lambda x: True, desc=""):
    if not isinstance(v, int) or isinstance(v, bool) or not cond(v):
        raise ConfigError(f"{where}: expected an integer{desc}, got {v!r}")
    return v


def _boolean(v, where):
    if not isinstance(v, bool):
        raise ConfigError(f"{where}: expected true/false, got {v!r}")
    return v


def _parse_grid(obj) -> Grid:
    _check_keys(obj, ("nx", "ny", "lx", "ly"), "grid")
    try:
        return Grid(
            nx=_integer(_need(obj, "nx", "grid"), "grid.nx", lambda n: n >= 8, " >= 8"),
            ny=_integer(_need(obj, "ny", "grid"), "grid.ny", lambda n: n >= 8, " >= 8"),
            lx=_number(_need(obj, "lx", "grid"), "grid.lx", lambda v: v > 0, " > 0"),
            ly=_number(_need(obj, "ly", "grid"), "grid.ly", lambda v: v > 0, " > 0"),
        )
    except ValueError as exc:
        raise ConfigError(f"grid: {exc}") from exc


def _parse_physics(obj) -> PhysicsParams:
    _check_keys(obj, ("c", "m", "signed_power"), "physics")
    try:
        return PhysicsParams(
            c=_number(obj.get("c", 1.0), "physics.c", lambda v: v > 0, " > 0"),
            m=_number(obj.get("m", 2), "physics.m", lambda v: v > 1, " > 1"),
            signed_power=_boolean(obj.get("signed_power", False), "physics.signed_power"),
        )
    except ValueError as exc:
        raise ConfigError(f"physics: {exc}") from exc


def _parse_init(obj):
    kind = _need(obj, "kind", "solver.init")
    if kind == "gaussian":
        _check_keys(obj, ("kind", "amplitude", "sigma_x", "sigma_y"), "solver.init")
        return GaussianInit(
            amplitude=_number(obj.get("amplitude", 1.0), "solver.init.amplitude"),
            sigma_x=_number(obj.get("sigma_x", 2.0), "solver.init.sigma_x", lambda v: v > 0, " > 0"),
            sigma_y=_number(obj.get("sigma_y", 2.0), "solver.init.sigma_y", lambda v: v > 0, " > 0"),
        )
    if kind == "file":
        _check_keys(obj, ("kind", "path"), "solver.init")
        path = _need(obj, "path", "solver.init")
        if not isinstance(path, str):
            raise ConfigError("solver.init.path: expected a string")
        return FileInit(path=path)
    raise ConfigError(f"solver.init.kind: expected 'gaussian' or 'file', got {kind!r}")


def _parse_dealias(v, where):
    if v is None:
        return None
    if v not in (TWO_THIRDS, HALF):
        raise ConfigError(f"{where}: expected '{TWO_THIRDS}', '{HALF}' or null, got {v!r}")
    return v


def _parse_solver(obj) -> SolverConfig:
    allowed = (
        "method",
        "tol_residual",
        "tol_delta",
        "max_iter",
        "gamma",
        "init",
        "descent_step",
        "dealias_rule",
    )
    _check_keys(obj, allowed, "solver")
    method = obj.get("method", PETVIASHVILI)
    if method not in (PETVIASHVILI, NEHARI_DESCENT):
        raise ConfigError(
            f"solver.method: expected '{PETVIASHVILI}' or '{NEHARI_DESCENT}', got {method!r}"
        )
    gamma = obj.get("gamma")
    if gamma is not None:
        gamma = _number(gamma, "solver.gamma", lambda v: 1 < v <= 3, " in (1, 3]")
    try:
        return SolverConfig(
            method=method,
            tol_residual=_number(obj.get("tol_residual", 1e-10), "solver.tol_residual", lambda v: v > 0, " > 0"),
            tol_delta=_number(obj.get("tol_delta", 1e-11), "solver.tol_delta", lambda v: v > 0, " > 0"),
            max_iter=_integer(obj.get("max_iter", 2000), "solver.max_iter", lambda n: n >= 1, " >= 1"),
            gamma=gamma,
            init=_parse_init(obj.get("init", {"kind": "gaussian"})),
            descent_step=_number(obj.get("descent_step", 1e-2), "solver.descent_step", lambda v: v > 0, " > 0"),
            dealias_rule=_parse_dealias(obj.get("dealias_rule"), "solver.dealias_rule"),
        )
    except ValueError as exc:
        raise ConfigError(f"solver: {exc}") from exc


def _parse_evolve(obj) -> EvolveConfig:
    _check_keys(obj, ("dt", "t_end", "record_every", "dealias_rule"), "evolve")
    dt = obj.get("dt")
    if dt is not None:
        dt = _number(dt, "evolve.dt", lambda v: v > 0, " > 0")
    try:
        return EvolveConfig(
            t_end=_number(_need(obj, "t_end", "evolve"), "evolve.t_end", lambda v: v > 0, " > 0"),
            dt=dt,
            dealias_rule=_parse_dealias(obj.get("dealias_rule"), "evolve.dealias_rule"),
            record_every=_integer(obj.get("record_every", 20), "evolve.record_every", lambda n: n >= 1, " >= 1"),
        )
    except ValueError as exc:
        raise ConfigError(f"evolve: {exc}") from exc


def _parse_output(obj) -> OutputConfig:
    _check_keys(obj, ("dir", "snapshots"), "output")
    d = obj.get("dir", ".")
    if not isinstance(d, str):
        raise ConfigError("output.dir: expected a string")
    return OutputConfig(dir=d, snapshots=_boolean(obj.get("snapshots", False), "output.snapshots"))


def parse_config(text: str) -> RunConfig:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise ConfigError("top level: expected a JSON object")
    _check_keys(obj, ("grid", "physics", "solver", "evolve", "output"), "top level")
    for key in obj:
        if not isinstance(obj[key], dict):
            raise ConfigError(f"{key}: expected a JSON object")
    return RunConfig(
        grid=_parse_grid(obj["grid"]) if "grid" in obj else None,
        physics=_parse_physics(obj.get("physics", {})),
        solver=_parse_solver(obj.get("solver", {})),
        evolve=_parse_evolve(obj["evolve"]) if "evolve" in obj else None,
        output=_parse_output(obj.get("output", {})),
    )


def load_config(path) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror or exc}") from exc


def serialize_config(cfg: RunConfig) -> str:
    """Inverse of parse_config (parse . serialize . parse is idempotent)."""
    obj = {}
    if cfg.grid is not None:
        g = cfg.grid
        obj["grid"] = {"nx": g.nx, "ny": g.ny, "lx": g.lx, "ly": g.ly}
    p = cfg.physics
    obj["physics"] = {"c": p.c, "m": p.m, "signed_power": p.signed_power}
    s = cfg.solver
    init = (
        {"kind": "gaussian", "amplitude": s.init.amplitude, "sigma_x": s.init.sigma_x, "sigma_y": s.init.sigma_y}
        if isinstance(s.init, GaussianInit)
        else {"kind": "file", "path": s.init.path}
    )
    obj["solver"] = {
        "method": s.method,
        "tol_residual": s.tol_residual,
        "tol_delta": s.tol_delta,
        "max_iter": s.max_iter,
        "gamma": s.gamma,
        "init": init,
        "descent_step": s.descent_step,
        "dealias_rule": s.dealias_rule,
    }
    if cfg.evolve is not None:
        e = cfg.evolve
        obj["evolve"] = {
            "dt": e.dt,
            "t_end": e.t_end,
            "record_every": e.record_every,
            "dealias_rule": e.dealias_rule,
        }
    obj["output"] = {"dir": cfg.output.dir, "snapshots": cfg.output.snapshots}
    return json.dumps(obj, indent=2)
