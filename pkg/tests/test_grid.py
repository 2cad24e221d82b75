"""Transform layer: normalization, round trips, dealiasing, resampling."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpme import (
    Grid,
    GridMismatch,
    NonHermitianInput,
    RealField,
    SpectralField,
    dealias,
    dealiased_product,
    forward_transform,
    inverse_transform,
    resample,
)

from conftest import random_field
from helpers import dft_forward_oracle


class TestGridValidation:
    def test_bad_dim(self):
        with pytest.raises(ValueError):
            Grid(4, 64, 1.0)

    def test_not_power_of_two(self):
        with pytest.raises(ValueError):
            Grid(1, 48, 1.0)

    def test_too_small(self):
        with pytest.raises(ValueError):
            Grid(1, 4, 1.0)

    def test_bad_length(self):
        with pytest.raises(ValueError):
            Grid(1, 64, 0.0)

    def test_derived_quantities(self):
        g = Grid(2, 16, 3.0)
        assert g.spacing == pytest.approx(3.0 / 16)
        assert g.shape == (16, 16)
        assert g.size == 256
        assert g.volume == pytest.approx(9.0)
        assert g.dealias_cutoff == 5  # floor(16/3)

    def test_field_shape_coercion(self):
        g = Grid(2, 8, 1.0)
        flat = np.arange(64, dtype=float)
        f = RealField(g, flat)
        assert f.values.shape == (8, 8)
        with pytest.raises(ValueError):
            RealField(g, np.arange(63, dtype=float))

    def test_nonfinite_rejected(self):
        g = Grid(1, 8, 1.0)
        bad = np.zeros(8)
        bad[3] = np.nan
        with pytest.raises(ValueError):
            RealField(g, bad)


class TestTransformNormalization:
    """forward_transform must return mean-normalized coefficients: the
    zero mode is the plain average of the samples."""

    def test_zero_mode_is_mean(self, grid64):
        f = random_field(grid64, seed=5)
        F = forward_transform(f)
        assert F.coeffs.flat[0] == pytest.approx(np.mean(f.values), rel=1e-14)

    @pytest.mark.parametrize("dim,n", [(1, 16), (2, 8), (3, 8)])
    def test_matches_matrix_dft(self, dim, n):
        g = Grid(dim, n, 2.5)
        f = random_field(g, seed=dim * 10 + n)
        F = forward_transform(f)
        expected = dft_forward_oracle(f.values)
        assert np.max(np.abs(F.coeffs - expected)) < 1e-13

    def test_single_mode_amplitude(self, grid64):
        x = grid64.axes()[0]
        F = forward_transform(RealField(grid64, np.cos(3 * x)))
        # cos splits into two half-amplitude exponentials
        assert F.coeffs[3] == pytest.approx(0.5, abs=1e-14)
        assert F.coeffs[-3] == pytest.approx(0.5, abs=1e-14)

    def test_parseval(self, grid2d):
        f = random_field(grid2d, seed=9)
        F = forward_transform(f)
        physical = np.sum(f.values**2) * grid2d.spacing**2
        spectral = grid2d.volume * np.sum(np.abs(F.coeffs) ** 2)
        assert physical == pytest.approx(spectral, rel=1e-13)

    def test_round_trip_many(self, grid64):
        for seed in range(100):
            f = random_field(grid64, seed=seed)
            back = inverse_transform(forward_transform(f))
            assert np.max(np.abs(back.values - f.values)) < 1e-12

    @given(seed=st.integers(0, 2**31 - 1), scale=st.floats(1e-6, 1e6))
    @settings(max_examples=25, deadline=None)
    def test_linearity(self, seed, scale):
        g = Grid(1, 16, 1.0)
        a = random_field(g, seed)
        b = random_field(g, seed + 1)
        lhs = forward_transform(RealField(g, scale * a.values + b.values)).coeffs
        rhs = scale * forward_transform(a).coeffs + forward_transform(b).coeffs
        assert np.max(np.abs(lhs - rhs)) <= 1e-9 * scale + 1e-9

    def test_non_hermitian_rejected(self, grid64):
        coeffs = np.zeros(64, dtype=complex)
        coeffs[3] = 1.0  # no conjugate partner at -3
        with pytest.raises(NonHermitianInput):
            inverse_transform(SpectralField(grid64, coeffs))

    def test_hermitian_accepted(self, grid64):
        coeffs = np.zeros(64, dtype=complex)
        coeffs[3] = 0.5 - 0.25j
        coeffs[-3] = 0.5 + 0.25j
        f = inverse_transform(SpectralField(grid64, coeffs))
        x = grid64.axes()[0]
        assert np.max(np.abs(f.values - (np.cos(3 * x) + 0.5 * np.sin(3 * x)))) < 1e-13


class TestDealias:
    def test_small_grid_cutoff(self):
        # N=8: floor(8/3)=2, so modes 0,1,2 survive and 3,4 are zeroed
        g = Grid(1, 8, 2 * np.pi)
        coeffs = np.ones(8, dtype=complex)
        out = dealias(SpectralField(g, coeffs)).coeffs
        kept = sorted(int(k) for k in g.k_signed[np.abs(out) > 0])
        assert kept == [-2, -1, 0, 1, 2]

    def test_projection_idempotent(self, grid2d):
        F = forward_transform(random_field(grid2d, seed=3))
        once = dealias(F).coeffs
        twice = dealias(SpectralField(grid2d, once)).coeffs
        assert np.array_equal(once, twice)

    def test_axiswise_not_radial(self):
        # the 2/3 rule clips each axis independently; a corner mode with
        # both indices at the cutoff survives even though its radius is
        # cutoff*sqrt(2)
        g = Grid(2, 16, 2 * np.pi)
        c = g.dealias_cutoff
        coeffs = np.zeros(g.shape, dtype=complex)
        coeffs[c, c] = 1.0
        out = dealias(SpectralField(g, coeffs)).coeffs
        assert out[c, c] == 1.0

    def test_product_trig_identity(self, grid64):
        # cos(ax)cos(bx) = (cos((a+b)x)+cos((a-b)x))/2 holds exactly when
        # everything stays inside the retained band
        x = grid64.axes()[0]
        a, b = 7, 5
        f = RealField(grid64, np.cos(a * x))
        h = RealField(grid64, np.cos(b * x))
        prod = dealiased_product(f, h)
        expected = 0.5 * (np.cos((a + b) * x) + np.cos((a - b) * x))
        assert np.max(np.abs(prod.values - expected)) < 1e-13

    def test_product_clips_sum_mode(self, grid64):
        # modes 12 and 15 are both retained (cutoff 21) but their sum 27
        # is not; the projected product keeps only the difference mode
        x = grid64.axes()[0]
        prod = dealiased_product(
            RealField(grid64, np.cos(12 * x)), RealField(grid64, np.cos(15 * x))
        )
        expected = 0.5 * np.cos(3 * x)
        assert np.max(np.abs(prod.values - expected)) < 1e-13

    def test_triple_product_alias_free_mean(self, grid64):
        # 3*floor(N/3) < N for power-of-two N, so a product of three
        # dealiased factors cannot wrap around into the zero mode: the
        # discrete mean of f*D(g*h) equals the true triple convolution term
        f = random_field(grid64, seed=21, k_max=grid64.dealias_cutoff)
        h = random_field(grid64, seed=22, k_max=grid64.dealias_cutoff)
        w = random_field(grid64, seed=23, k_max=grid64.dealias_cutoff)
        gh = dealiased_product(h, w)
        lhs = np.mean(f.values * gh.values)
        rhs = np.mean(f.values * h.values * w.values)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-13)


class TestResample:
    def test_band_limited_exact(self):
        coarse = Grid(1, 32, 2 * np.pi)
        fine = Grid(1, 64, 2 * np.pi)
        x_c = coarse.axes()[0]
        x_f = fine.axes()[0]
        vals = np.cos(5 * x_c) + 0.3 * np.sin(11 * x_c)
        up = resample(RealField(coarse, vals), fine)
        expected = np.cos(5 * x_f) + 0.3 * np.sin(11 * x_f)
        assert np.max(np.abs(up.values - expected)) < 1e-12

    def test_round_trip_identity(self, grid2d):
        fine = Grid(2, 64, 2 * np.pi)
        f = random_field(grid2d, seed=14, k_max=grid2d.n_points // 2 - 1)
        back = resample(resample(f, fine), grid2d)
        assert np.max(np.abs(back.values - f.values)) < 1e-12

    def test_mean_preserved(self, grid64):
        fine = Grid(1, 128, 2 * np.pi)
        f = random_field(grid64, seed=2)
        up = resample(f, fine)
        assert np.mean(up.values) == pytest.approx(np.mean(f.values), rel=1e-13)

    def test_incompatible_grids(self, grid64):
        other_len = Grid(1, 128, 1.0)
        with pytest.raises(GridMismatch):
            resample(random_field(grid64, seed=0), other_len)
        other_dim = Grid(2, 64, 2 * np.pi)
        with pytest.raises(GridMismatch):
            resample(random_field(grid64, seed=0), other_dim)
