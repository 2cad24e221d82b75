import numpy as np
import pytest

from fpme import Grid, RealField


@pytest.fixture
def grid64():
    return Grid(1, 64, 2 * np.pi)


@pytest.fixture
def grid2d():
    return Grid(2, 32, 2 * np.pi)


def random_field(grid: Grid, seed: int, k_max: int | None = None) -> RealField:
    """White noise, optionally truncated to |k| <= k_max per the radial
    frequency index.  Truncation keeps products alias-free in tests that
    need exact identities."""
    rng = np.random.default_rng(seed)
    vals = rng.standard_normal(grid.shape)
    if k_max is None:
        return RealField(grid, vals)
    coeffs = np.fft.fftn(vals) / grid.size
    r = grid.xi_magnitude / (2 * np.pi / grid.side_length)
    coeffs[r > k_max] = 0.0
    return RealField(grid, np.real(np.fft.ifftn(coeffs * grid.size)))
