"""Anisotropic periodic grid, discrete Fourier transforms, and spectral operators.

The computational box is [-lx/2, lx/2) x [-ly/2, ly/2), sampled on nx x ny points
with x varying fastest (arrays are (ny, nx), C order).  Wavenumbers follow the
standard DFT layout xi[j] = 2*pi*j~/lx with signed index j~ in [-nx/2, nx/2).

Transform convention: `forward` is the plain unnormalized DFT, `inverse` carries
the 1/(nx*ny) factor.  Quadrature weights dx*dy convert sample sums to integrals,
so Parseval reads

    sum |f|^2 * dx*dy  ==  sum |f_hat|^2 * (lx*ly) / (nx*ny)^2

exactly for any discrete field.  The x-directional Hilbert transform is the
multiplier -i*sgn(xi); half-order derivatives are |xi|^(1/2) and |xi|^(-1/2),
the latter with all xi = 0 modes mapped to zero (membership in the energy space
requires finite D_x^{-1/2} u_y content, so the zero-x-mean convention is built in).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import GridMismatchError, SymbolDomainError

TWO_THIRDS = "two_thirds"
HALF = "half"


@dataclass(frozen=True)
class Grid:
    """Periodic rectangular grid with wavenumber tables.

    nx, ny must be even and >= 8; lx, ly are the box side lengths.
    """

    nx: int
    ny: int
    lx: float
    ly: float

    def __post_init__(self):
        for name, n in (("nx", self.nx), ("ny", self.ny)):
            if n < 8 or n % 2 != 0:
                raise GridMismatchError(f"{name} must be even and >= 8, got {n}")
        if not (self.lx > 0 and self.ly > 0):
            raise GridMismatchError("box lengths must be positive")

    @property
    def dx(self) -> float:
        return self.lx / self.nx

    @property
    def dy(self) -> float:
        return self.ly / self.ny

    @property
    def cell_area(self) -> float:
        return self.dx * self.dy

    @property
    def spectral_weight(self) -> float:
        """Factor converting sum |f_hat|^2 to the physical L2 norm squared."""
        return self.lx * self.ly / (self.nx * self.ny) ** 2

    @cached_property
    def x(self) -> np.ndarray:
        return -self.lx / 2 + self.dx * np.arange(self.nx)

    @cached_property
    def y(self) -> np.ndarray:
        return -self.ly / 2 + self.dy * np.arange(self.ny)

    @cached_property
    def xi(self) -> np.ndarray:
        return 2 * np.pi * np.fft.fftfreq(self.nx, d=self.dx)

    @cached_property
    def eta(self) -> np.ndarray:
        return 2 * np.pi * np.fft.fftfreq(self.ny, d=self.dy)

    @cached_property
    def xi2d(self) -> np.ndarray:
        return np.broadcast_to(self.xi[None, :], (self.ny, self.nx))

    @cached_property
    def eta2d(self) -> np.ndarray:
        return np.broadcast_to(self.eta[:, None], (self.ny, self.nx))

    @cached_property
    def abs_xi(self) -> np.ndarray:
        return np.abs(self.xi2d)

    @cached_property
    def xi_nonzero(self) -> np.ndarray:
        """Boolean mask of modes with xi != 0 (shape (ny, nx))."""
        return self.abs_xi > 0

    def index_x(self) -> np.ndarray:
        """Signed integer x-indices j~ per spectral entry."""
        return np.rint(self.xi2d / (2 * np.pi / self.lx)).astype(int)

    def index_y(self) -> np.ndarray:
        return np.rint(self.eta2d / (2 * np.pi / self.ly)).astype(int)

    def dealias_mask(self, rule: str = TWO_THIRDS) -> np.ndarray:
        """Boolean keep-mask for the given truncation rule."""
        frac = {TWO_THIRDS: 2.0 / 3.0, HALF: 0.5}[rule]
        return (np.abs(self.index_x()) <= frac * self.nx / 2) & (
            np.abs(self.index_y()) <= frac * self.ny / 2
        )

    def meshgrid(self):
        """Physical coordinate arrays X, Y of shape (ny, nx)."""
        return np.meshgrid(self.x, self.y, indexing="xy")


@dataclass(frozen=True)
class Field:
    """Real sample array on a grid; shape (ny, nx), x fastest."""

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (self.grid.ny, self.grid.nx):
            raise GridMismatchError(
                f"field shape {v.shape} does not match grid ({self.grid.ny}, {self.grid.nx})"
            )
        if not np.all(np.isfinite(v)):
            raise GridMismatchError("field contains non-finite entries")
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class Spectrum:
    """Complex DFT coefficient array on a grid; same layout as Field."""

    grid: Grid
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.shape != (self.grid.ny, self.grid.nx):
            raise GridMismatchError(
                f"spectrum shape {c.shape} does not match grid ({self.grid.ny}, {self.grid.nx})"
            )
        object.__setattr__(self, "coeffs", c)


def forward(f: Field) -> Spectrum:
    """Unnormalized forward DFT."""
    return Spectrum(f.grid, np.fft.fft2(f.values))


def inverse(s: Spectrum) -> Field:
    """Inverse DFT with the 1/(nx*ny) factor; returns the real part."""
    return Field(s.grid, np.real(np.fft.ifft2(s.coeffs)))


def apply_multiplier(s: Spectrum, symbol) -> Spectrum:
    """Pointwise multiply coefficients by symbol(xi, eta).

    `symbol` is a callable acting on broadcastable wavenumber arrays, or a
    precomputed (ny, nx) array.  Non-finite symbol values are allowed only on
    modes whose coefficient is exactly zero; those modes map to zero.
    """
    g = s.grid
    sym = symbol(g.xi2d, g.eta2d) if callable(symbol) else np.asarray(symbol)
    sym = np.broadcast_to(sym, s.coeffs.shape)
    bad = ~np.isfinite(sym)
    if bad.any():
        if np.any(bad & (s.coeffs != 0)):
            raise SymbolDomainError("non-finite symbol value on a used mode")
        out = np.where(bad, 0.0, sym) * s.coeffs
    else:
        out = sym * s.coeffs
    return Spectrum(g, out)


def _dx_half_symbol(grid: Grid) -> np.ndarray:
    return np.sqrt(grid.abs_xi)


def _dx_neg_half_dy_symbol(grid: Grid) -> np.ndarray:
    out = np.zeros((grid.ny, grid.nx), dtype=np.complex128)
    nz = grid.xi_nonzero
    out[nz] = grid.abs_xi[nz] ** -0.5 * (1j * grid.eta2d[nz])
    return out


def _hilbert_symbol(grid: Grid) -> np.ndarray:
    return -1j * np.sign(grid.xi2d)


def _spectral_op(f: Field, symbol: np.ndarray) -> Field:
    return inverse(Spectrum(f.grid, symbol * np.fft.fft2(f.values)))


def dx_half(f: Field) -> Field:
    """Half-order x-derivative, symbol |xi|^(1/2)."""
    return _spectral_op(f, _dx_half_symbol(f.grid))


def dx_neg_half_dy(f: Field) -> Field:
    """Symbol |xi|^(-1/2) * (i eta), with xi = 0 modes set to zero."""
    return _spectral_op(f, _dx_neg_half_dy_symbol(f.grid))


def hilbert_x(f: Field) -> Field:
    """x-directional Hilbert transform, symbol -i*sgn(xi)."""
    return _spectral_op(f, _hilbert_symbol(f.grid))


def project_zero_x(f: Field) -> Field:
    """Zero every coefficient with xi = 0; output rows have zero mean."""
    ch = np.fft.fft2(f.values)
    ch[:, 0] = 0.0
    return Field(f.grid, np.real(np.fft.ifft2(ch)))


def dealias(s: Spectrum, rule: str = TWO_THIRDS) -> Spectrum:
    """Zero all modes outside the rule's keep set (2/3 or 1/2 of Nyquist)."""
    if rule not in (TWO_THIRDS, HALF):
        raise GridMismatchError(f"unknown dealias rule {rule!r}")
    return Spectrum(s.grid, np.where(s.grid.dealias_mask(rule), s.coeffs, 0.0))


def lp_norm(f: Field, p: float) -> float:
    """Rectangle-rule L^p norm; p = inf gives the sample max."""
    if np.isinf(p):
        return float(np.max(np.abs(f.values)))
    if p <= 0:
        raise GridMismatchError("p must be positive")
    return float((np.sum(np.abs(f.values) ** p) * f.grid.cell_area) ** (1.0 / p))


def l2_inner(a: Field, b: Field) -> float:
    """Rectangle-rule L^2 inner product."""
    if a.grid != b.grid:
        raise GridMismatchError("fields live on different grids")
    return float(np.sum(a.values * b.values) * a.grid.cell_area)
