"""Pseudospectral solitary-wave computation for the generalized 2D Shrira equation.

The model is u_t - H(Laplacian u) + (f(u))_x = 0 with the x-directional
Hilbert transform H and f(u) = u^m.  The package computes ground-state
traveling waves (Petviashvili iteration or Nehari-manifold descent), verifies
the variational and Pohojaev identities, measures the algebraic spatial decay,
evaluates the equation's convolution kernels, and propagates profiles in time.
"""

__version__ = "0.1.0"

from .grid import (
    Grid,
    Field,
    Spectrum,
    forward,
    inverse,
    apply_multiplier,
    dx_half,
    dx_neg_half_dy,
    hilbert_x,
    project_zero_x,
    dealias,
    lp_norm,
    l2_inner,
)
from .functionals import (
    PhysicsParams,
    FunctionalReport,
    z_norm_sq,
    action_S,
    nehari_I,
    G_functional,
    nehari_scale,
    pohozaev_residuals,
    gn_ratio,
    functional_report,
)
from .solver import (
    SolverConfig,
    SolveReport,
    GaussianInit,
    FileInit,
    spectral_residual,
    petviashvili,
    nehari_descent,
    solve,
    rescale_speed,
    sweep,
    profile_symbol,
    default_dealias_rule,
)
from .kernels import (
    KernelSpec,
    KernelSample,
    h_nu_point,
    hk_point,
    kernel_spectral_oracle,
    quadrature_vs_oracle,
    kernel_decay_scan,
    decay_scan_to_csv,
    lizorkin_sample,
)
from .decay import (
    DecayReport,
    tail_exponent_fit,
    weighted_sup,
    two_box_sup_drift,
    y_weighted_seminorm,
    zero_x_mean_and_sign,
    mixed_norm,
    decay_report,
)
from .evolution import EvolveConfig, EvolveReport, linear_symbol, step_if_rk4, evolve
from .io import read_field, write_field

__all__ = [name for name in dir() if not name.startswith("_")]
