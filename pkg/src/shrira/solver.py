"""Ground-state solvers for the solitary-wave profile equation.

In spectral variables the profile equation reads s(xi,eta) * phi_hat = f(phi)_hat
with s = c + (xi^2 + eta^2)/|xi| on xi != 0; the xi = 0 modes of any solution
vanish (the equation's Green's function has no zero-x-mode content).  Two
routes are provided:

* `petviashvili`: the stabilized fixed point
      phi_{n+1} = M_n^gamma * f(phi_n)_hat / s,
      M_n = <s phi_hat, phi_hat> / <f_hat, phi_hat>,
  with gamma defaulting to m/(m-1).  M = 1 exactly at any fixed point.

* `nehari_descent`: gradient descent of the action S restricted to the Nehari
  manifold {I = 0}.  The descent direction is the energy-metric gradient
  u_hat - f_hat/s (the raw L2 gradient s*u_hat - f_hat is hopelessly stiff:
  s reaches ~1e2-1e3 on small-|xi|/large-eta modes, so any fixed L2 step either
  diverges or crawls).  Each step is followed by the exact Nehari rescaling;
  the step size backtracks on action increase and grows otherwise.

Nonlinear products are dealiased (2/3 rule for m <= 2, 1/2 rule otherwise), so
iterates solve the truncated Galerkin problem exactly at convergence.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict
from typing import Optional, Sequence

import numpy as np

from . import grid as sg
from .errors import (
    CollapseError,
    ConvergenceError,
    GridMismatchError,
    UndefinedResidualError,
)
from .functionals import PhysicsParams, FunctionalReport, functional_report

PETVIASHVILI = "petviashvili"
NEHARI_DESCENT = "nehari_descent"


def default_dealias_rule(m: float) -> str:
    """2/3 rule for quadratic nonlinearities, 1/2 rule beyond.

    u^m with m > 2 is treated with the stricter rule (for non-integer m the
    product is not band-limited at all; 1/2 is the conservative choice).
    """
    return sg.TWO_THIRDS if m <= 2 else sg.HALF


def profile_symbol(grid: sg.Grid, c: float) -> np.ndarray:
    """s = c + (xi^2+eta^2)/|xi| on xi != 0; +inf placeholder on xi = 0."""
    nz = grid.xi_nonzero
    s = np.full((grid.ny, grid.nx), np.inf)
    s[nz] = c + (grid.xi2d[nz] ** 2 + grid.eta2d[nz] ** 2) / grid.abs_xi[nz]
    return s


@dataclass(frozen=True)
class GaussianInit:
    amplitude: float = 1.0
    sigma_x: float = 2.0
    sigma_y: float = 2.0

    def build(self, grid: sg.Grid) -> np.ndarray:
        X, Y = grid.meshgrid()
        return self.amplitude * np.exp(
            -(X**2) / self.sigma_x**2 - (Y**2) / self.sigma_y**2
        )


@dataclass(frozen=True)
class FileInit:
    path: str

    def build(self, grid: sg.Grid) -> np.ndarray:
        from .io import read_field

        f, _ = read_field(self.path)
        if (f.grid.nx, f.grid.ny) != (grid.nx, grid.ny):
            raise GridMismatchError("initial-guess file has a different sample count")
        return f.values


@dataclass(frozen=True)
class SolverConfig:
    method: str = PETVIASHVILI
    tol_residual: float = 1e-10
    tol_delta: float = 1e-11
    max_iter: int = 2000
    gamma: Optional[float] = None  # None -> m/(m-1)
    init: object = GaussianInit()
    descent_step: float = 1e-2
    dealias_rule: Optional[str] = None  # None -> default for m

    def __post_init__(self):
        if self.method not in (PETVIASHVILI, NEHARI_DESCENT):
            raise GridMismatchError(f"unknown solver method {self.method!r}")
        if not (self.tol_residual > 0 and self.tol_delta > 0):
            raise GridMismatchError("tolerances must be positive")
        if self.gamma is not None and not 1.0 < self.gamma <= 3.0:
            raise GridMismatchError("gamma must lie in (1, 3]")


@dataclass
class SolveReport:
    method: str
    iterations: int
    converged: bool
    residual_history: list
    m_factor_history: list
    functionals: FunctionalReport
    d: float
    symmetry_defects: dict
    zero_x_mean_defect: float
    max_location: tuple
    max_abs: float

    def to_dict(self) -> dict:
        out = asdict(self)
        out["functionals"] = self.functionals.to_dict()
        out["max_location"] = list(self.max_location)
        return out


def _init_values(config: SolverConfig, grid: sg.Grid) -> np.ndarray:
    init = config.init
    if isinstance(init, np.ndarray):
        return np.array(init, dtype=float)
    if isinstance(init, sg.Field):
        if (init.grid.nx, init.grid.ny) != (grid.nx, grid.ny):
            raise GridMismatchError("warm-start field has a different sample count")
        return init.values.copy()
    return init.build(grid)


def _diagnostics(phi: np.ndarray, grid: sg.Grid) -> tuple:
    amax = float(np.max(np.abs(phi)))
    jy, jx = np.unravel_index(int(np.argmax(np.abs(phi))), phi.shape)
    loc = (float(grid.x[jx]), float(grid.y[jy]))
    scale = amax if amax > 0 else 1.0
    even_x = float(np.max(np.abs(phi - phi[:, (-np.arange(grid.nx)) % grid.nx])) / scale)
    even_y = float(np.max(np.abs(phi - phi[(-np.arange(grid.ny)) % grid.ny, :])) / scale)
    row_defect = float(np.max(np.abs(phi.sum(axis=1))) * grid.dx / scale)
    return {"even_x": even_x, "even_y": even_y}, row_defect, loc, amax


def _report(method, phi, grid, params, res_hist, m_hist, converged) -> SolveReport:
    f = sg.Field(grid, phi)
    fr = functional_report(f, params)
    sym, row_defect, loc, amax = _diagnostics(phi, grid)
    return SolveReport(
        method=method,
        iterations=len(res_hist),
        converged=converged,
        residual_history=[float(r) for r in res_hist],
        m_factor_history=[float(m) for m in m_hist],
        functionals=fr,
        d=fr.S,
        symmetry_defects=sym,
        zero_x_mean_defect=row_defect,
        max_location=loc,
        max_abs=amax,
    )


def spectral_residual(f: sg.Field, params: PhysicsParams, rule: Optional[str] = None) -> float:
    """Relative residual ||s*phi_hat - f_hat|| / ||s*phi_hat|| over xi != 0 modes.

    The nonlinear term is dealiased with the rule belonging to m.  The field is
    expected to carry no xi = 0 content (project first); those modes do not
    enter either norm.
    """
    g = f.grid
    rule = rule or default_dealias_rule(params.m)
    nz = g.xi_nonzero
    s = profile_symbol(g, params.c)
    ph = np.fft.fft2(f.values)
    fh = np.where(g.dealias_mask(rule), np.fft.fft2(params.f(f.values)), 0.0)
    den = np.linalg.norm(s[nz] * ph[nz])
    if den == 0.0:
        raise UndefinedResidualError("spectral residual of a zero field is undefined")
    return float(np.linalg.norm(s[nz] * ph[nz] - fh[nz]) / den)


def petviashvili(config: SolverConfig, params: PhysicsParams, grid: sg.Grid):
    """Stabilized fixed-point iteration; returns (Field, SolveReport).

    Raises ConvergenceError (with the partial report attached) when max_iter is
    exhausted, CollapseError when the normalization quotient turns non-positive.
    """
    rule = config.dealias_rule or default_dealias_rule(params.m)
    gamma = config.gamma if config.gamma is not None else params.m / (params.m - 1.0)
    s = profile_symbol(grid, params.c)
    keep = grid.dealias_mask(rule) & grid.xi_nonzero
    s_keep = np.where(keep, s, 1.0)

    ph = np.where(keep, np.fft.fft2(_init_values(config, grid)), 0.0)
    phi = np.real(np.fft.ifft2(ph))
    res_hist, m_hist = [], []
    delta = np.inf
    converged = False
    for _ in range(config.max_iter):
        fh = np.where(keep, np.fft.fft2(params.f(phi)), 0.0)
        num = float(np.sum(s_keep[keep] * np.abs(ph[keep]) ** 2))
        den = float(np.real(np.sum(fh[keep] * np.conj(ph[keep]))))
        if den == 0.0 or num == 0.0:
            raise CollapseError(
                "iterate lost all spectral content",
                report=_report(PETVIASHVILI, phi, grid, params, res_hist, m_hist, False),
            )
        M = num / den
        sph = s_keep * ph
        resid = float(np.linalg.norm(sph[keep] - fh[keep]) / np.linalg.norm(sph[keep]))
        res_hist.append(resid)
        m_hist.append(M)
        if resid <= config.tol_residual and delta <= config.tol_delta:
            converged = True
            break
        if M <= 0:
            raise CollapseError(
                f"Petviashvili factor M = {M:.3e} <= 0 (bad initial guess)",
                report=_report(PETVIASHVILI, phi, grid, params, res_hist, m_hist, False),
            )
        ph = np.where(keep, M**gamma * fh / s_keep, 0.0)
        new = np.real(np.fft.ifft2(ph))
        nrm = np.linalg.norm(phi)
        delta = float(np.linalg.norm(new - phi) / nrm) if nrm > 0 else np.inf
        phi = new

    report = _report(PETVIASHVILI, phi, grid, params, res_hist, m_hist, converged)
    if not converged:
        raise ConvergenceError(
            f"Petviashvili did not converge in {config.max_iter} iterations "
            f"(last residual {res_hist[-1]:.3e})",
            report=report,
            field=sg.Field(grid, phi),
        )
    return sg.Field(grid, phi), report


def nehari_descent(config: SolverConfig, params: PhysicsParams, grid: sg.Grid):
    """Preconditioned descent of S on the Nehari manifold; returns (Field, SolveReport)."""
    rule = config.dealias_rule or default_dealias_rule(params.m)
    s = profile_symbol(grid, params.c)
    keep = grid.dealias_mask(rule) & grid.xi_nonzero
    s_keep = np.where(keep, s, 1.0)
    w = grid.spectral_weight
    dA = grid.cell_area
    m = params.m

    def manifold_scale(zsq, uf):
        return (zsq / uf) ** (1.0 / (m - 1.0))

    phi = _init_values(config, grid)
    ph = np.where(keep, np.fft.fft2(phi), 0.0)
    phi = np.real(np.fft.ifft2(ph))
    zsq = float(np.sum(s_keep[keep] * np.abs(ph[keep]) ** 2)) * w
    uf = float(np.sum(phi * params.f(phi)) * dA)
    if uf <= 0:
        raise CollapseError("initial guess has int u f(u) <= 0", report=None)
    t = manifold_scale(zsq, uf)
    phi, ph = t * phi, t * ph
    zsq *= t * t
    S_old = 0.5 * zsq - float(np.sum(params.F(phi)) * dA)

    h = config.descent_step
    res_hist: list = []
    converged = False
    for _ in range(config.max_iter):
        fh = np.where(keep, np.fft.fft2(params.f(phi)), 0.0)
        sph = s_keep * ph
        resid = float(np.linalg.norm(sph[keep] - fh[keep]) / np.linalg.norm(sph[keep]))
        res_hist.append(resid)
        if resid <= config.tol_residual:
            converged = True
            break
        d = np.real(np.fft.ifft2(np.where(keep, ph - fh / s_keep, 0.0)))
        accepted = False
        for _try in range(40):
            v = phi - h * d
            vh = np.where(keep, np.fft.fft2(v), 0.0)
            zv = float(np.sum(s_keep[keep] * np.abs(vh[keep]) ** 2)) * w
            ufv = float(np.sum(v * params.f(v)) * dA)
            if ufv <= 0 or zv == 0.0:
                h *= 0.5
                continue
            tv = manifold_scale(zv, ufv)
            Sv = 0.5 * tv * tv * zv - float(np.sum(params.F(tv * v)) * dA)
            if Sv <= S_old + 1e-14 * abs(S_old):
                accepted = True
                break
            h *= 0.5
        if not accepted:
            raise ConvergenceError(
                "Nehari descent stalled: no step decreases the action",
                report=_report(NEHARI_DESCENT, phi, grid, params, res_hist, [], False),
                field=sg.Field(grid, phi),
            )
        phi, ph, S_old = tv * v, tv * vh, Sv
        h = min(h * 1.3, 0.9)

    report = _report(NEHARI_DESCENT, phi, grid, params, res_hist, [], converged)
    if not converged:
        raise ConvergenceError(
            f"Nehari descent did not converge in {config.max_iter} iterations "
            f"(last residual {res_hist[-1]:.3e})",
            report=report,
            field=sg.Field(grid, phi),
        )
    return sg.Field(grid, phi), report


def solve(config: SolverConfig, params: PhysicsParams, grid: sg.Grid):
    """Dispatch on config.method."""
    fn = petviashvili if config.method == PETVIASHVILI else nehari_descent
    return fn(config, params, grid)


def rescale_speed(f: sg.Field, c_from: float, c_to: float, m: float) -> sg.Field:
    """Map a profile solved at speed c_from to speed c_to, mode-exactly.

    phi_c2(x, y) = lam^(1/(m-1)) * phi_c1(lam x, lam y), lam = c_to/c_from; on
    the grid this is a pure amplitude factor with box lengths divided by lam
    (sample (i, j) keeps its indices), so there is no interpolation error.
    """
    if not (c_from > 0 and c_to > 0):
        raise GridMismatchError("speeds must be positive")
    lam = c_to / c_from
    g = f.grid
    new_grid = sg.Grid(g.nx, g.ny, g.lx / lam, g.ly / lam)
    return sg.Field(new_grid, lam ** (1.0 / (m - 1.0)) * f.values)


@dataclass
class SweepRow:
    value: float
    d: float
    l2_norm_sq: float
    exponent_x: float
    exponent_y: float
    iterations: int
    converged: bool


def sweep(
    param: str,
    values: Sequence[float],
    config: SolverConfig,
    params: PhysicsParams,
    grid: sg.Grid,
) -> list:
    """Continuation over c or m; each solve warm-starts from the previous one.

    For a c-sweep the warm start is the exact speed rescaling (the grid shrinks
    by c_new/c_old alongside); for an m-sweep the previous profile is reused on
    the same grid.  Rows carry d = S(phi), ||phi||_2^2 and the fitted tail
    exponents along both axes.
    """
    from .decay import tail_exponent_fit

    def fit_exponent(fld, axis):
        half = fld.grid.lx / 2 if axis == "x" else fld.grid.ly / 2
        for hi in (0.11, 0.25, 0.8):
            try:
                e, _ = tail_exponent_fit(fld, axis, (0.04 * half, hi * half))
                return e
            except GridMismatchError:
                continue  # too few radii on coarse grids: widen
        return float("nan")

    if param not in ("c", "m"):
        raise GridMismatchError("sweep parameter must be 'c' or 'm'")
    rows = []
    prev_field = None
    prev_value = None
    cur_grid = grid
    for v in values:
        if param == "c":
            p = PhysicsParams(c=float(v), m=params.m, signed_power=params.signed_power)
        else:
            p = PhysicsParams(c=params.c, m=float(v), signed_power=params.signed_power)
        cfg = config
        if prev_field is not None:
            if param == "c":
                warm = rescale_speed(prev_field, prev_value, float(v), p.m)
                cur_grid = warm.grid
            else:
                warm = prev_field
            cfg = SolverConfig(
                method=config.method,
                tol_residual=config.tol_residual,
                tol_delta=config.tol_delta,
                max_iter=config.max_iter,
                gamma=None if param == "m" else config.gamma,
                init=warm,
                descent_step=config.descent_step,
                dealias_rule=None if param == "m" else config.dealias_rule,
            )
        fld, rep = solve(cfg, p, cur_grid)
        ex = fit_exponent(fld, "x")
        ey = fit_exponent(fld, "y")
        rows.append(
            SweepRow(
                value=float(v),
                d=rep.d,
                l2_norm_sq=sg.lp_norm(fld, 2.0) ** 2,
                exponent_x=ex,
                exponent_y=ey,
                iterations=rep.iterations,
                converged=rep.converged,
            )
        )
        prev_field, prev_value = fld, float(v)
    return rows
