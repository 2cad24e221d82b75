"""Pointwise inequality checks, commutator probes, trajectory records.

Tolerances scale with the field magnitude.  The inequality checks require
band-limited inputs: aliasing is the one discrete effect that can fake a
violation, so test fields keep their nonlinearities below the 2/3 cutoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDenominator, InvalidExponent, UnsupportedExponent
from .fracops import apply_radial_power, frac_laplacian
from .grid import (
    Grid,
    RealField,
    SpectralField,
    dealias,
    forward_transform,
    inverse_transform,
    require_same_grid,
)
from .norms import DyadicPartition, besov_norm, homogeneous_seminorm, lp_norm, sobolev_norm

__all__ = [
    "DiagnosticsRecord",
    "RecorderConfig",
    "record",
    "FieldGenerator",
    "InequalityReport",
    "check_cordoba",
    "check_pointwise_lp",
    "check_commutator",
    "run_property_suite",
]


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    dt: float
    l2: float
    h_alpha: float
    besov_alpha: float
    min_u: float
    mass: float
    c_meas: float

    def __post_init__(self):
        for name in ("t", "dt", "l2", "h_alpha", "besov_alpha", "min_u", "mass", "c_meas"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"non-finite diagnostics entry {name}")


@dataclass(frozen=True, eq=False)
class RecorderConfig:
    """What a trajectory record measures.

    coefficient_scale is the sup of the H^alpha norm of the frozen
    coefficient over the run; it normalizes the instantaneous Gronwall
    quotient c_meas.
    """

    alpha: float
    partition: DyadicPartition
    coefficient_scale: float


def record(
    u: RealField,
    t: float,
    dt: float,
    config: RecorderConfig,
    prev: DiagnosticsRecord | None = None,
) -> DiagnosticsRecord:
    """Measure one trajectory sample.

    c_meas is the finite-difference Gronwall quotient
    log(h(t)/h(t_prev)) / ((t - t_prev) * coefficient_scale), zero for the
    first record or when degenerate.
    """
    g = u.grid
    h = sobolev_norm(u, config.alpha)
    c_meas = 0.0
    if (
        prev is not None
        and t > prev.t
        and prev.h_alpha > 0
        and h > 0
        and config.coefficient_scale > 0
    ):
        c_meas = math.log(h / prev.h_alpha) / ((t - prev.t) * config.coefficient_scale)
    return DiagnosticsRecord(
        t=float(t),
        dt=float(dt),
        l2=lp_norm(u, 2),
        h_alpha=h,
        besov_alpha=besov_norm(u, config.alpha, config.partition),
        min_u=float(np.min(u.values)),
        mass=float(np.mean(u.values) * g.volume),
        c_meas=c_meas,
    )


# ---------------------------------------------------------------------------
# test field generation


@dataclass(frozen=True)
class FieldGenerator:
    """Reproducible band-limited test fields.

    kind is one of gaussian_bump, multi_bump, random_trig, constant.
    width is a physical length: for bumps the Gaussian radius, for
    random_trig the shortest admitted wavelength (modes up to L/width).
    Bump kinds and constants with amplitude >= 0 are pointwise nonnegative.
    """

    kind: str
    seed: int = 0
    amplitude: float = 1.0
    width: float = 1.0

    def generate(self, grid: Grid) -> RealField:
        if self.kind == "constant":
            return RealField(grid, np.full(grid.shape, self.amplitude))
        if self.kind == "gaussian_bump":
            return self._bump_sum(grid, [(0.5, 1.0, self.amplitude)])
        if self.kind == "multi_bump":
            rng = np.random.default_rng(self.seed)
            n_bumps = int(rng.integers(2, 4))
            spots = [
                (float(rng.uniform()), float(1.0 + 0.4 * rng.uniform()),
                 float(self.amplitude * (0.5 + 0.5 * rng.uniform())))
                for _ in range(n_bumps)
            ]
            return self._bump_sum(grid, spots)
        if self.kind == "random_trig":
            return self._random_trig(grid)
        raise ValueError(f"unknown field kind {self.kind!r}")

    def _bump_sum(self, grid: Grid, spots) -> RealField:
        L = grid.side_length
        w_min = 11.4 * L / (2.0 * np.pi * grid.dealias_cutoff)
        if self.width < w_min:
            raise ValueError(
                f"width {self.width} too narrow to stay band-limited on this grid "
                f"(needs >= {w_min:.4g})"
            )
        x = np.arange(grid.n_points) * grid.spacing
        total = np.zeros(grid.shape)
        for frac, w_fac, amp in spots:
            w = self.width * w_fac
            prof = np.zeros(grid.n_points)
            for m in (-1, 0, 1):
                d = x - frac * L + m * L
                prof += np.exp(-(d / w) ** 2)
            field = prof
            for _ in range(grid.dim - 1):
                field = np.multiply.outer(field, prof)
            total += amp * field
        return RealField(grid, total)

    def _random_trig(self, grid: Grid) -> RealField:
        rng = np.random.default_rng(self.seed)
        noise = rng.standard_normal(grid.shape)
        F = np.fft.fftn(noise) / grid.size
        r = grid.xi_magnitude / (2.0 * np.pi / grid.side_length)
        k_max = max(1, min(grid.dealias_cutoff, int(grid.side_length / self.width)))
        filt = (r <= k_max) / (1.0 + r)
        f = inverse_transform(SpectralField(grid, F * filt))
        peak = float(np.max(np.abs(f.values)))
        if peak == 0.0:
            return f
        return RealField(grid, f.values * (self.amplitude / peak))


# ---------------------------------------------------------------------------
# pointwise inequalities


@dataclass(frozen=True)
class InequalityReport:
    min_gap: float
    tol: float
    passed: bool


def _gap_field(f: RealField, sigma: float, p: int) -> RealField:
    lam_f = frac_laplacian(f, sigma)
    power = f.values ** (p - 1)
    first = p * power * lam_f.values
    f_p = RealField(f.grid, f.values**p)
    lam_fp = inverse_transform(
        apply_radial_power(dealias(forward_transform(f_p)), sigma)
    )
    return RealField(f.grid, first - lam_fp.values)


def check_cordoba(f: RealField, s: float) -> InequalityReport:
    """Pointwise gap 2 f Lambda^s f - Lambda^s(f^2) >= 0, 0 <= s <= 2.

    f must be band-limited so that f^2 survives dealiasing unchanged.
    """
    if not (0.0 <= s <= 2.0):
        raise InvalidExponent(f"cordoba check needs s in [0, 2], got {s}")
    gap = _gap_field(f, s, 2)
    min_gap = float(np.min(gap.values))
    tol = 1e-9 * (1.0 + lp_norm(f, np.inf) ** 2)
    return InequalityReport(min_gap=min_gap, tol=tol, passed=min_gap >= -tol)


def check_pointwise_lp(f: RealField, sigma: float, p: int) -> InequalityReport:
    """L^p variant: p f^(p-1) Lambda^sigma f - Lambda^sigma(f^p) >= 0, p in {2, 4}."""
    if p not in (2, 4):
        raise UnsupportedExponent(f"only even p in {{2, 4}} supported, got {p}")
    if not (0.0 <= sigma <= 2.0):
        raise InvalidExponent(f"pointwise check needs sigma in [0, 2], got {sigma}")
    gap = _gap_field(f, sigma, p)
    min_gap = float(np.min(gap.values))
    tol = 1e-9 * (1.0 + lp_norm(f, np.inf) ** 2)
    return InequalityReport(min_gap=min_gap, tol=tol, passed=min_gap >= -tol)


def check_commutator(f: RealField, g: RealField, alpha: float) -> float:
    """Ratio of the commutator norm to its product-rule bound.

    numerator:   || Lambda^alpha(f g) - f Lambda^alpha g ||_L2
    denominator: ||grad f||_inf ||g||_{H'^(alpha-1)} + ||f||_{H'^alpha} ||g||_inf
    """
    if not (alpha > 0):
        raise InvalidExponent(f"commutator check needs alpha > 0, got {alpha}")
    require_same_grid(f, g)
    grid = f.grid
    prod = RealField(grid, f.values * g.values)
    lam_prod = inverse_transform(
        apply_radial_power(dealias(forward_transform(prod)), alpha)
    )
    lam_g = inverse_transform(apply_radial_power(forward_transform(g), alpha))
    diff = RealField(grid, lam_prod.values - f.values * lam_g.values)
    numerator = lp_norm(diff, 2)

    Ff = forward_transform(f)
    grad_sq = np.zeros(grid.shape)
    for ax in range(grid.dim):
        comp = inverse_transform(SpectralField(grid, 1j * grid.xi[ax] * Ff.coeffs))
        grad_sq += comp.values**2
    grad_f_inf = float(np.sqrt(np.max(grad_sq)))
    denominator = grad_f_inf * homogeneous_seminorm(g, alpha - 1.0) + (
        homogeneous_seminorm(f, alpha) * lp_norm(g, np.inf)
    )
    if denominator < 1e-14:
        raise DegenerateDenominator(
            f"commutator bound denominator {denominator:.3e} below 1e-14"
        )
    return numerator / denominator


# ---------------------------------------------------------------------------
# batch suite (used by the properties CLI mode)


def run_property_suite(grid: Grid, seed: int = 0, count: int = 100, map_fn=map):
    """Run the inequality and operator checks over generated field suites.

    Returns (rows, all_passed) where each row is
    (check name, field seed, statistic, passed).
    """
    from .fracops import MollifierKernel, mollify

    L = grid.side_length
    rows = []

    def trig(seed_i: int, k_limit: int) -> RealField:
        width = L / max(1, k_limit)
        gen = FieldGenerator("random_trig", seed=seed_i, amplitude=1.0, width=width)
        return gen.generate(grid)

    k_half = max(1, grid.dealias_cutoff // 2)
    k_quarter = max(1, grid.dealias_cutoff // 4)

    def cordoba_job(args):
        s, i = args
        f = trig(seed + i, k_half)
        rep = check_cordoba(f, s)
        return (f"cordoba_s{s}", seed + i, rep.min_gap, rep.passed)

    jobs = [(s, i) for s in (0.5, 0.8, 1.2, 2.0) for i in range(count)]
    rows.extend(map_fn(cordoba_job, jobs))

    def lp_job(args):
        sigma, p, i = args
        f = trig(seed + 1000 + i, k_quarter)
        rep = check_pointwise_lp(f, sigma, p)
        return (f"pointwise_p{p}_sigma{sigma}", seed + 1000 + i, rep.min_gap, rep.passed)

    jobs = [(sig, p, i) for sig in (0.6, 1.0) for p in (2, 4) for i in range(count)]
    rows.extend(map_fn(lp_job, jobs))

    eps = max(0.05 * L, 2.5 * grid.spacing)
    kernel = MollifierKernel(grid, eps)

    def moll_job(i):
        f = trig(seed + 2000 + i, k_half)
        lam_moll = frac_laplacian(mollify(f, kernel), 0.7)
        moll_lam = mollify(frac_laplacian(f, 0.7), kernel)
        scale = 1.0 + lp_norm(lam_moll, np.inf)
        resid = float(np.max(np.abs(lam_moll.values - moll_lam.values))) / scale
        return ("mollifier_commute", seed + 2000 + i, resid, resid <= 1e-11)

    rows.extend(map_fn(moll_job, range(max(4, count // 4))))

    def commutator_job(i):
        f = trig(seed + 3000 + i, k_quarter)
        g = trig(seed + 4000 + i, k_quarter)
        ratio = check_commutator(f, g, 2.1)
        return ("commutator_alpha2.1", seed + 3000 + i, ratio, math.isfinite(ratio))

    rows.extend(map_fn(commutator_job, range(max(4, count // 4))))

    rows = list(rows)
    return rows, all(r[3] for r in rows)
