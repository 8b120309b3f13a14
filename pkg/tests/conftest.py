"""Shared fixtures: the expensive ground-state solves are computed once."""

import math

import numpy as np
import pytest

from shrira import (
    Grid,
    PhysicsParams,
    SolverConfig,
    petviashvili,
)

PI = math.pi


@pytest.fixture(scope="session")
def params_m2():
    return PhysicsParams(c=1.0, m=2)


@pytest.fixture(scope="session")
def ground_state_256(params_m2):
    """Criterion-1 run: c=1, m=2, 256^2 on [-32pi, 32pi]^2, plus wall time."""
    import time

    grid = Grid(256, 256, 64 * PI, 64 * PI)
    cfg = SolverConfig(max_iter=500)
    t0 = time.perf_counter()
    field, report = petviashvili(cfg, params_m2, grid)
    elapsed = time.perf_counter() - t0
    return field, report, elapsed


@pytest.fixture(scope="session")
def ground_state_fine(params_m2):
    """Well-resolved solve (cutoff ~10.7) for identity checks: 512^2 on [-12pi, 12pi]^2."""
    grid = Grid(512, 512, 24 * PI, 24 * PI)
    field, report = petviashvili(SolverConfig(), params_m2, grid)
    return field, report


@pytest.fixture(scope="session")
def ground_state_big(params_m2):
    """Criterion-5 run: 512^2 on [-64pi, 64pi]^2."""
    grid = Grid(512, 512, 128 * PI, 128 * PI)
    field, report = petviashvili(SolverConfig(), params_m2, grid)
    return field, report


@pytest.fixture(scope="session")
def small_wave(params_m2):
    """Quick converged wave for CLI and io tests: 64^2 on [-8pi, 8pi]^2."""
    grid = Grid(64, 64, 16 * PI, 16 * PI)
    field, report = petviashvili(SolverConfig(), params_m2, grid)
    return field, report


def random_field(grid, rng, band_limit=True):
    """Smooth random band-limited field with zero mean, unit-ish amplitude."""
    coeffs = rng.standard_normal((grid.ny, grid.nx)) + 1j * rng.standard_normal(
        (grid.ny, grid.nx)
    )
    jx, jy = grid.index_x(), grid.index_y()
    damp = np.exp(-0.3 * (np.abs(jx) + np.abs(jy)))
    coeffs *= damp
    if band_limit:
        coeffs[grid.dealias_mask("two_thirds") == False] = 0.0  # noqa: E712
    vals = np.real(np.fft.ifft2(coeffs))
    scale = np.max(np.abs(vals))
    from shrira import Field

    return Field(grid, vals / scale if scale > 0 else vals)
