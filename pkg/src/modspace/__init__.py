"""Numerical toolkit for modulation spaces on R and R^2.

Sampling grids, a centered discrete Fourier transform, the short-time
Fourier transform, mixed M^{p,q} and FL^q norms, composition operators and
Fourier multipliers.
"""
from .changeofvar import (
    affine_invariance_ratio,
    chirp_blowup_sweep,
    covariance_check,
    covariance_sides,
    nonlinear_blowup_sweep,
    piece_decomposition,
    piecewise_boundedness_sweep,
    piecewise_ratios,
)
from .errors import (
    CoverageError,
    DegenerateInputError,
    DomainCoverageError,
    DomainError,
    EvaluationError,
    ModspaceError,
    ParameterError,
    PreconditionError,
)
from .expr import (
    FunctionExpr,
    bump,
    chirp,
    compose,
    constant,
    gaussian,
    indicator,
    plane_wave,
    plateau,
    translate,
)
from .family import bump_chirp_family, test_family
from .grid import Grid, SampledSignal, default_grid, l2_norm, sample
from .maps import AffineMap, Box, NonlinearMap, PiecewiseAffineMap, abs_map, quadratic_map
from .multiplier import (
    MultiplierSymbol,
    apply_multiplier,
    idempotence_residual,
    multiplier_norm_ratio,
    multiplier_ratios,
)
from .norms import (
    EquivalenceReport,
    NormParams,
    fourier_lebesgue_norm,
    local_equivalence_report,
    local_equivalence_reports,
    mixed_norm,
    modulation_norm,
    modulation_norms,
)
from .spectral import Spectrum, forward_ft, inverse_ft, parseval_check
from .stft import TFMatrix, WindowSpec, stft, stft_at, stft_magnitude_identity_check

__version__ = "0.1.0"
