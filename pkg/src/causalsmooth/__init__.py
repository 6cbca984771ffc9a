"""Causal near-ideal smoothing filters and one-step prediction for real sequences.

The package provides closed-form transfer functions (`xfer`), their
realization as causal finite kernels via circle sampling and the inverse DFT
(`realization`), batch/streaming convolution (`stream`), a numerical
verification suite for the filters' defining conditions (`conditions`),
seeded autoregression simulation (`arsim`), a Monte-Carlo forecasting
benchmark (`bench`), and a CLI (`causalsmooth`).
"""

from .arsim import ArModel, TrialRng, is_stationary, sample_ar2_coeffs, simulate_ar
from .bench import BenchConfig, BenchReport, TrialResult, error_ratio, run_benchmark
from .conditions import (
    BandSpec,
    ConditionReport,
    check_bounded_gain,
    check_domination,
    check_identity_approx,
    check_small_neighborhood,
    check_zero_at_pi,
)
from .realization import (
    AliasingError,
    CausalityViolation,
    FrequencyResponse,
    Kernel,
    aliasing_check,
    impulse_from_spec,
    sample_response,
    truncate,
)
from .stream import Series, StreamState, convolve
from .xfer import (
    NearIdealParams,
    PredictorParams,
    Product,
    ReferenceParams,
    SingularityError,
    TransferSpec,
    eval_near_ideal,
    eval_predictor,
    eval_reference,
    eval_spec,
    gamma_coef,
    xi_coef,
)

__version__ = "0.1.0"

__all__ = [
    "ArModel",
    "TrialRng",
    "is_stationary",
    "sample_ar2_coeffs",
    "simulate_ar",
    "BenchConfig",
    "BenchReport",
    "TrialResult",
    "error_ratio",
    "run_benchmark",
    "BandSpec",
    "ConditionReport",
    "check_bounded_gain",
    "check_domination",
    "check_identity_approx",
    "check_small_neighborhood",
    "check_zero_at_pi",
    "AliasingError",
    "CausalityViolation",
    "FrequencyResponse",
    "Kernel",
    "aliasing_check",
    "impulse_from_spec",
    "sample_response",
    "truncate",
    "Series",
    "StreamState",
    "convolve",
    "NearIdealParams",
    "PredictorParams",
    "Product",
    "ReferenceParams",
    "SingularityError",
    "TransferSpec",
    "eval_near_ideal",
    "eval_predictor",
    "eval_reference",
    "eval_spec",
    "gamma_coef",
    "xi_coef",
    "__version__",
]
