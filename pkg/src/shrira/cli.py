"""Command-line interface.

Exit codes: 0 success, 2 validation/configuration error, 3 solver
non-convergence (reports are still written).  `SHRIRA_THREADS` caps worker
parallelism for batch kernel evaluation (0 or unset = one worker per CPU).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import decay as dec
from . import evolution as evo
from . import kernels as ker
from . import solver as sol
from .config import load_config
from .errors import ConfigError, ConvergenceError, ShriraError
from .functionals import functional_report, nehari_scale
from .grid import Field, Grid
from .io import read_field, write_field

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NO_CONVERGENCE = 3


def worker_count() -> int:
    raw = os.environ.get("SHRIRA_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"SHRIRA_THREADS: expected an integer, got {raw!r}")
    return os.cpu_count() or 1 if n <= 0 else n


def _write_json(path: Path, obj) -> None:
    def clean(v):
        if isinstance(v, float) and not np.isfinite(v):
            return None
        if isinstance(v, dict):
            return {k: clean(x) for k, x in v.items()}
        if isinstance(v, (list, tuple)):
            return [clean(x) for x in v]
        return v

    with open(path, "w", encoding="utf-8") as fh:
        json.dump(clean(obj), fh, indent=2, allow_nan=False)
        fh.write("\n")


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _tail_csv(path: Path, field: Field, axis: str, alpha: float) -> None:
    vals, offs = dec._axis_samples(field, axis)
    order = np.argsort(offs)
    rows = [
        (f"{offs[i]:.17g}", f"{vals[i]:.17g}", f"{abs(offs[i]) ** alpha * vals[i]:.17g}")
        for i in order
        if offs[i] != 0.0
    ]
    _write_csv(path, ("r", "phi", "weighted_phi"), rows)


def _cmd_solve(args) -> int:
    cfg = load_config(args.config)
    grid = cfg.require_grid()
    out = Path(args.out or cfg.output.dir)
    out.mkdir(parents=True, exist_ok=True)
    code = EXIT_OK
    try:
        fld, report = sol.solve(cfg.solver, cfg.physics, grid)
    except ConvergenceError as exc:
        if exc.field is None or exc.report is None:
            raise
        fld, report = exc.field, exc.report
        code = EXIT_NO_CONVERGENCE
        print(f"solver did not converge: {exc}", file=sys.stderr)
    meta = {"c": cfg.physics.c, "m": cfg.physics.m, "producer": f"shrira {__version__}"}
    write_field(out / "phi.field", fld, meta)
    _write_json(out / "solve_report.json", report.to_dict())
    _write_json(out / "functionals.json", report.functionals.to_dict())
    return code


def _params_for(args, header):
    if args.config:
        return load_config(args.config).physics
    from .functionals import PhysicsParams

    return PhysicsParams(c=float(header["c"]), m=float(header["m"]))


def _cmd_verify(args) -> int:
    fld, header = read_field(args.field)
    params = _params_for(args, header)
    out = Path(args.out or Path(args.field).parent)
    out.mkdir(parents=True, exist_ok=True)
    residual = sol.spectral_residual(fld, params)
    fr = functional_report(fld, params)
    t_u = nehari_scale(fld, params)
    dr = dec.decay_report(fld, params)
    _write_json(
        out / "verify_report.json",
        {
            "spectral_residual": residual,
            "nehari_t_u": t_u,
            "functionals": fr.to_dict(),
        },
    )
    _write_json(out / "decay_report.json", dr.to_dict())
    _tail_csv(out / "tail_x.csv", fld, "x", 1.5)
    _tail_csv(out / "tail_y.csv", fld, "y", 3.0)
    return EXIT_OK


def _cmd_evolve(args) -> int:
    fld, header = read_field(args.field)
    cfg = load_config(args.config)
    if cfg.evolve is None:
        raise ConfigError("evolve: section is required for this command")
    params = _params_for(args, header)
    out = Path(args.out or cfg.output.dir)
    out.mkdir(parents=True, exist_ok=True)
    reference = (fld, args.reference_speed) if args.reference_speed is not None else None
    snapshots = []

    def snap(step, t, f):
        if cfg.output.snapshots:
            p = out / f"snap_{step:06d}.field"
            write_field(p, f, {"c": params.c, "m": params.m, "producer": f"shrira {__version__}"})
            snapshots.append(str(p))

    report = evo.evolve(fld, cfg.evolve, params, reference=reference, snapshot_cb=snap)
    rows = []
    for i, t in enumerate(report.times):
        shape = report.shape_error_series[i] if report.shape_error_series else ""
        rows.append((f"{t:.17g}", f"{report.mass_series[i]:.17g}", f"{report.energy_series[i]:.17g}", shape))
    _write_csv(out / "conservation.csv", ("t", "mass", "energy", "shape_error"), rows)
    d = report.to_dict()
    d["snapshots"] = snapshots
    _write_json(out / "evolve_report.json", d)
    write_field(
        out / "final.field",
        report.final,
        {"c": params.c, "m": params.m, "producer": f"shrira {__version__}"},
    )
    return EXIT_OK


def _read_points_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rd = csv.DictReader(fh)
        if rd.fieldnames is None or not {"x", "y"} <= set(rd.fieldnames):
            raise ConfigError(f"{path}: expected CSV with columns x,y")
        try:
            return [(float(row["x"]), float(row["y"])) for row in rd]
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"{path}: malformed point row ({exc})") from exc


def _cmd_kernel(args) -> int:
    spec = ker.KernelSpec(nu=args.nu, quad_tol=args.quad_tol)
    points = _read_points_csv(args.points)
    oracle_grid = Grid(nx=args.oracle_nx, ny=args.oracle_ny, lx=args.oracle_lx, ly=args.oracle_ly)
    oracle = ker.kernel_spectral_oracle(args.nu, oracle_grid)
    workers = worker_count()
    if workers > 1 and len(points) >= 16:
        from concurrent.futures import ProcessPoolExecutor

        chunks = [points[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_kernel_rows, [(spec, ch) for ch in chunks]))
        samples = [s for part in parts for s in part]
    else:
        samples = _kernel_rows((spec, points))
    rows = []
    for s in samples:
        xs, y2s, kv = ker.oracle_node_value(oracle, s.x, 2.0 * s.y)
        mapped = ker.SQRT_PI * s.value
        rel = abs(mapped - kv) / max(abs(kv), 1e-300)
        rows.append(
            (f"{s.x:.17g}", f"{s.y:.17g}", f"{s.value:.17g}", f"{s.est_error:.3g}",
             f"{kv:.17g}", f"{rel:.6g}")
        )
    _write_csv(Path(args.out), ("x", "y", "value", "est_error", "oracle", "rel_diff"), rows)
    return EXIT_OK


def _kernel_rows(job):
    spec, pts = job
    return [ker.h_nu_point(spec, x, y) for (x, y) in pts]


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    grid = cfg.require_grid()
    try:
        values = [float(v) for v in args.values.split(",") if v]
    except ValueError as exc:
        raise ConfigError(f"--values: {exc}") from exc
    if not values:
        raise ConfigError("--values: expected a comma-separated list of numbers")
    out = Path(args.out or cfg.output.dir)
    out.mkdir(parents=True, exist_ok=True)
    code = EXIT_OK
    try:
        rows = sol.sweep(args.param, values, cfg.solver, cfg.physics, grid)
    except ConvergenceError as exc:
        print(f"sweep aborted: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    _write_csv(
        out / "sweep.csv",
        ("value", "d", "l2_norm_sq", "exponent_x", "exponent_y", "iterations", "converged"),
        [
            (f"{r.value:.17g}", f"{r.d:.17g}", f"{r.l2_norm_sq:.17g}",
             f"{r.exponent_x:.17g}", f"{r.exponent_y:.17g}", r.iterations, int(r.converged))
            for r in rows
        ],
    )
    return code


def _cmd_lizorkin(args) -> int:
    reports = ker.lizorkin_report_all(n_samples=args.n_samples)
    rows = []
    for rep in reports:
        for mult, k1, k2, v in rep.rows():
            rows.append((mult, k1, k2, f"{v:.17g}", rep.n_samples))
    _write_csv(Path(args.out), ("multiplier", "k1", "k2", "sup_abs", "n_samples"), rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="shrira", description=__doc__)
    ap.add_argument("--version", action="version", version=f"shrira {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute a ground state")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("verify", help="recompute identities and decay for a stored field")
    p.add_argument("--field", required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("evolve", help="time-integrate a stored field")
    p.add_argument("--field", required=True)
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--reference-speed", type=float, default=None)
    p.set_defaults(fn=_cmd_evolve)

    p = sub.add_parser("kernel", help="kernel quadrature samples with oracle cross-check")
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--points", required=True, help="CSV with columns x,y")
    p.add_argument("--out", required=True)
    p.add_argument("--quad-tol", type=float, default=1e-10)
    p.add_argument("--oracle-nx", type=int, default=4096)
    p.add_argument("--oracle-ny", type=int, default=1024)
    p.add_argument("--oracle-lx", type=float, default=float(128 * np.pi))
    p.add_argument("--oracle-ly", type=float, default=float(32 * np.pi))
    p.set_defaults(fn=_cmd_kernel)

    p = sub.add_parser("sweep", help="continuation over c or m")
    p.add_argument("--param", choices=("c", "m"), required=True)
    p.add_argument("--values", required=True, help="comma-separated values")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("lizorkin", help="multiplier-condition sampling report")
    p.add_argument("--out", required=True)
    p.add_argument("--n-samples", type=int, default=256)
    p.set_defaults(fn=_cmd_lizorkin)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except (ShriraError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
