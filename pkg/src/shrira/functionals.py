"""Variational functionals for the solitary-wave problem.

With f(u) = u^m (or the signed power |u|^(m-1) u) and F its primitive, the
objects computed here are

    ||u||_Z^2 = c ||u||_2^2 + ||D_x^{1/2} u||_2^2 + ||D_x^{-1/2} u_y||_2^2
    S(u)      = 1/2 ||u||_Z^2 - int F(u)
    I(u)      = <S'(u), u> = ||u||_Z^2 - int u f(u)
    G(u)      = int (1/2 u f(u) - F(u))

together with the two Pohojaev residuals (testing the profile equation against
u and y*u_y), the unique Nehari rescaling t_u with I(t_u u) = 0, and the
anisotropic Gagliardo-Nirenberg ratio.  All integrals are rectangle-rule sums,
spectrally accurate for the trigonometric polynomials represented on the grid.

r1 equals -I identically: the Hilbert-transform pairing int u * H u_x is the
|xi|-weighted spectral sum, i.e. ||D_x^{1/2} u||_2^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np

from . import grid as sg
from .errors import DegenerateFieldError, GridMismatchError, NoScalingError

P_DECAY_THRESHOLD = (3.0 + math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class PhysicsParams:
    """Wave speed and nonlinearity.

    m is the power in f(u) = u^m; p = m + 1 is the growth index used by the
    decay theory (the proven decay range needs p >= (3+sqrt(5))/2).  Non-integer
    m requires signed_power, which switches f to |u|^(m-1) u.
    """

    c: float
    m: float
    signed_power: bool = False

    def __post_init__(self):
        if not self.c > 0:
            raise GridMismatchError("wave speed c must be positive")
        if not self.m > 1:
            raise GridMismatchError("nonlinearity exponent m must exceed 1")
        if not self.signed_power and self.m != int(self.m):
            raise GridMismatchError("non-integer m requires signed_power=True")

    @property
    def p(self) -> float:
        return self.m + 1.0

    @property
    def mu(self) -> float:
        """Superlinearity constant of the homogeneous nonlinearity."""
        return self.m + 1.0

    def f(self, u: np.ndarray) -> np.ndarray:
        if self.signed_power:
            return np.abs(u) ** (self.m - 1.0) * u
        return u ** int(self.m)

    def F(self, u: np.ndarray) -> np.ndarray:
        if self.signed_power:
            return np.abs(u) ** (self.m + 1.0) / (self.m + 1.0)
        return u ** (int(self.m) + 1) / (self.m + 1.0)


@dataclass(frozen=True)
class FunctionalReport:
    z_norm_sq: float
    S: float
    I: float
    G: float
    F_int: float
    uf_int: float
    pohozaev_r1: float
    pohozaev_r2: float
    gn_ratio: float

    def to_dict(self) -> dict:
        return asdict(self)


def z_norm_sq(f: sg.Field, params: PhysicsParams) -> float:
    """Squared energy-space norm, computed as one weighted spectral sum.

    xi = 0 modes contribute only through the mass term (the D_x^{+-1/2}
    operators map them to zero).
    """
    g = f.grid
    ch = np.fft.fft2(f.values)
    nz = g.xi_nonzero
    weight = np.full((g.ny, g.nx), params.c)
    weight[nz] += g.abs_xi[nz] + g.eta2d[nz] ** 2 / g.abs_xi[nz]
    return float(np.sum(weight * np.abs(ch) ** 2) * g.spectral_weight)


def _f_integrals(f: sg.Field, params: PhysicsParams):
    dA = f.grid.cell_area
    uf = float(np.sum(f.values * params.f(f.values)) * dA)
    Fi = float(np.sum(params.F(f.values)) * dA)
    return uf, Fi


def action_S(f: sg.Field, params: PhysicsParams) -> float:
    _, Fi = _f_integrals(f, params)
    return 0.5 * z_norm_sq(f, params) - Fi


def nehari_I(f: sg.Field, params: PhysicsParams) -> float:
    uf, _ = _f_integrals(f, params)
    return z_norm_sq(f, params) - uf


def G_functional(f: sg.Field, params: PhysicsParams) -> float:
    uf, Fi = _f_integrals(f, params)
    return 0.5 * uf - Fi


def nehari_scale(f: sg.Field, params: PhysicsParams, method: str = "auto") -> float:
    """Unique t_u > 0 with I(t_u u) = 0, maximizing t -> S(t u).

    For the homogeneous powers implemented here the closed form is
    t_u = (||u||_Z^2 / int u f(u))^(1/(m-1)).  method="golden" instead
    maximizes S(t u) by bracketed golden-section to 1e-12 relative, the route
    required for a general nonlinearity; both agree for homogeneous f.
    """
    uf, _ = _f_integrals(f, params)
    if uf <= 0:
        raise NoScalingError("int u f(u) <= 0: no positive Nehari rescaling")
    zsq = z_norm_sq(f, params)
    t_closed = (zsq / uf) ** (1.0 / (params.m - 1.0))
    if method in ("auto", "closed_form"):
        return t_closed
    if method != "golden":
        raise GridMismatchError(f"unknown nehari_scale method {method!r}")

    from scipy.optimize import minimize_scalar

    dA = f.grid.cell_area

    def neg_s(t):
        return -(0.5 * t * t * zsq - float(np.sum(params.F(t * f.values)) * dA))

    res = minimize_scalar(
        neg_s,
        bracket=(t_closed * 0.5, t_closed, t_closed * 2.0),
        method="golden",
        options={"xtol": 1e-12},
    )
    return float(res.x)


def pohozaev_residuals(f: sg.Field, params: PhysicsParams):
    """Absolute residuals of the two integral identities.

    r1 = int [-c u^2 - u*H(u_x) - (D_x^{-1/2} u_y)^2 + u f(u)]
    r2 = int [ c u^2 + u*H(u_x) - (D_x^{-1/2} u_y)^2 - 2 F(u)]

    Both vanish on an exact solitary wave; r1 = -I(u) for every field.
    """
    g = f.grid
    ch = np.fft.fft2(f.values)
    hux = np.real(np.fft.ifft2(g.abs_xi * ch))
    dmhy = sg.dx_neg_half_dy(f).values
    dA = g.cell_area
    u = f.values
    uf = u * params.f(u)
    r1 = float(np.sum(-params.c * u * u - u * hux - dmhy * dmhy + uf) * dA)
    r2 = float(
        np.sum(params.c * u * u + u * hux - dmhy * dmhy - 2.0 * params.F(u)) * dA
    )
    return r1, r2


def gn_ratio(f: sg.Field, p_gn: float) -> float:
    """Anisotropic Gagliardo-Nirenberg ratio for exponent p_gn in [0, 2]:

        ||u||_{p+2}^{p+2} / (||u||_2^{2-p} ||D_x^{-1/2}u_y||^{p/2} ||D_x^{1/2}u||^{3p/2})

    Invariant under amplitude scaling (exponents balance: 2-p + p/2 + 3p/2 = p+2).
    """
    if not 0.0 <= p_gn <= 2.0:
        raise GridMismatchError("gn_ratio exponent must lie in [0, 2]")
    num = sg.lp_norm(f, p_gn + 2.0) ** (p_gn + 2.0)
    l2 = sg.lp_norm(f, 2.0)
    dxh = sg.lp_norm(sg.dx_half(f), 2.0)
    dmy = sg.lp_norm(sg.dx_neg_half_dy(f), 2.0)
    if l2 == 0.0 or dxh == 0.0 or dmy == 0.0:
        raise DegenerateFieldError("a denominator norm of the GN ratio vanishes")
    return num / (l2 ** (2.0 - p_gn) * dmy ** (p_gn / 2.0) * dxh ** (1.5 * p_gn))


def functional_report(f: sg.Field, params: PhysicsParams) -> FunctionalReport:
    """All variational diagnostics in one pass.

    The GN ratio is evaluated at p_gn = m - 1 (clipped to the lemma's [0, 2]
    range), so its numerator is the nonlinearity's own Lebesgue norm.
    """
    zsq = z_norm_sq(f, params)
    uf, Fi = _f_integrals(f, params)
    r1, r2 = pohozaev_residuals(f, params)
    try:
        q = gn_ratio(f, min(2.0, max(0.0, params.m - 1.0)))
    except DegenerateFieldError:
        q = float("nan")
    return FunctionalReport(
        z_norm_sq=zsq,
        S=0.5 * zsq - Fi,
        I=zsq - uf,
        G=0.5 * uf - Fi,
        F_int=Fi,
        uf_int=uf,
        pohozaev_r1=r1,
        pohozaev_r2=r2,
        gn_ratio=q,
    )
