"""Pseudo-spectral tools for a fractional porous medium flow on the torus."""

from .errors import (
    BlowUp,
    DegenerateDenominator,
    FpmeError,
    GridMismatch,
    InvalidExponent,
    NoConvergence,
    NonHermitianInput,
    ParseError,
    UnresolvedKernel,
    UnsupportedExponent,
    ValidationError,
)
from .grid import (
    Grid,
    RealField,
    SpectralField,
    dealias,
    dealiased_product,
    forward_transform,
    inverse_transform,
    resample,
)
from .fracops import (
    MollifierKernel,
    frac_laplacian,
    gradient,
    inv_frac_laplacian,
    mollify,
)
from .norms import (
    DyadicPartition,
    besov_norm,
    dyadic_blocks,
    homogeneous_seminorm,
    lp_norm,
    sobolev_norm,
)
from .diagnostics import (
    DiagnosticsRecord,
    FieldGenerator,
    InequalityReport,
    check_commutator,
    check_cordoba,
    check_pointwise_lp,
    run_property_suite,
)
from .linear import (
    LinearProblem,
    LinearSolution,
    TimeStepPolicy,
    positivity_report,
    rhs,
    solve_linear,
)
from .picard import (
    PicardConfig,
    PicardResult,
    PicardState,
    horizon,
    nonlinear_residual,
    run_picard,
    uniqueness_probe,
)
from .config import MODES, RunSpec, parse_config
from .snapshots import read_snapshot, write_snapshot

__version__ = "0.1.0"

__all__ = [
    "BlowUp",
    "DegenerateDenominator",
    "DiagnosticsRecord",
    "DyadicPartition",
    "FieldGenerator",
    "FpmeError",
    "Grid",
    "GridMismatch",
    "InequalityReport",
    "InvalidExponent",
    "LinearProblem",
    "LinearSolution",
    "MollifierKernel",
    "NoConvergence",
    "NonHermitianInput",
    "ParseError",
    "PicardConfig",
    "PicardResult",
    "PicardState",
    "RealField",
    "RunSpec",
    "SpectralField",
    "TimeStepPolicy",
    "UnresolvedKernel",
    "UnsupportedExponent",
    "ValidationError",
    "besov_norm",
    "check_commutator",
    "check_cordoba",
    "check_pointwise_lp",
    "dealias",
    "dealiased_product",
    "dyadic_blocks",
    "forward_transform",
    "frac_laplacian",
    "gradient",
    "homogeneous_seminorm",
    "horizon",
    "inv_frac_laplacian",
    "inverse_transform",
    "lp_norm",
    "mollify",
    "nonlinear_residual",
    "MODES",
    "parse_config",
    "positivity_report",
    "read_snapshot",
    "resample",
    "rhs",
    "run_picard",
    "run_property_suite",
    "sobolev_norm",
    "solve_linear",
    "uniqueness_probe",
    "write_snapshot",
]
