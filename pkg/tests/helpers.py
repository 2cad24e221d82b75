"""Slow reference implementations the tests trust instead of the package.

Everything here is written directly from the defining formulas (matrix
DFT, explicit convolution sums) so a bug in the fast FFT-based code
cannot hide in its own oracle.
"""

import numpy as np


def dft_matrix(n: int) -> np.ndarray:
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n) / n


def dft_forward_oracle(values: np.ndarray) -> np.ndarray:
    """Mean-normalized DFT by explicit matrix application, axis by axis."""
    out = values.astype(complex)
    for ax in range(values.ndim):
        w = dft_matrix(values.shape[ax])
        out = np.moveaxis(np.tensordot(w, np.moveaxis(out, ax, 0), axes=1), 0, ax)
    return out


def circular_convolution_oracle(a_hat: np.ndarray, b_hat: np.ndarray) -> np.ndarray:
    """Spectrum of the pointwise product a*b in 1d, done as the O(N^2)
    wrap-around convolution sum of mean-normalized coefficients."""
    n = a_hat.shape[0]
    out = np.zeros(n, dtype=complex)
    for k in range(n):
        for j in range(n):
            out[k] += a_hat[j] * b_hat[(k - j) % n]
    return out


def signed_mode(k: int, n: int) -> int:
    return k - n if k > n // 2 else k


def radial_symbol_oracle(dim: int, n: int, length: float, power: float) -> np.ndarray:
    """|xi|^power on the unshifted DFT layout, built from first principles
    (signed integer modes scaled by 2 pi / L); zero mode set to zero."""
    modes = np.array([signed_mode(k, n) for k in range(n)], dtype=float)
    axes = np.meshgrid(*([modes] * dim), indexing="ij")
    mags = np.sqrt(sum(a * a for a in axes)) * (2.0 * np.pi / length)
    out = np.zeros_like(mags)
    nz = mags > 0
    out[nz] = mags[nz] ** power
    return out
