"""Monte-Carlo forecasting benchmark: predictor alone versus predictor with prefilter.

Each trial draws autoregression coefficients, simulates a path, runs the
truncated predictor kernel (`e_KK`) and the truncated composite
predictor-after-prefilter kernel (`e_KH`) over it, and scores both against the
one-step linear predictor with oracle coefficients and with the population
means (0.5, 0).  A ratio of 1 means parity with the oracle; no causal
predictor can average below 1.

Trials are embarrassingly parallel: each owns its own random stream and the
aggregation is an ordered reduction, so worker count never changes the report.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from multiprocessing import get_context
from typing import Dict, Optional

import numpy as np

from .arsim import ArModel, TrialRng, sample_stationary_ar2, simulate_ar
from .realization import Kernel, impulse_from_spec
from .stream import Series, convolve
from .xfer import NearIdealParams, PredictorParams, Product, describe_spec

__all__ = [
    "DegenerateDenominator",
    "BenchConfig",
    "TrialResult",
    "BenchReport",
    "error_ratio",
    "build_trial_kernels",
    "run_trial",
    "run_benchmark",
]

METRIC_NAMES = ("e_KK_oracle", "e_KH_oracle", "e_KK_mean", "e_KH_mean")

#: coefficients of the population-mean baseline predictor.
BASELINE_COEFFS = (0.5, 0.0)


class DegenerateDenominator(ArithmeticError):
    """The linear-predictor residual collapsed; indicates a wiring bug upstream."""


@dataclass(frozen=True)
class BenchConfig:
    """Full configuration of one benchmark run; echoed verbatim in the report."""

    trials: int = 10000
    n: int = 100
    d: int = 100
    sigma: float = 0.3
    model_kind: str = "ar2"
    predictor: PredictorParams = PredictorParams(gamma=1.1, r=1.1)
    prefilter: NearIdealParams = NearIdealParams(a=0.6, p=0.7, N=100, m=2)
    grid_L: int = 65536
    master_seed: int = 1
    composite_window: str = "d"
    burn_in: int = 1000

    def __post_init__(self):
        if self.trials < 1 or self.n < 1 or self.d < 1:
            raise ValueError("trials, n and d must be >= 1")
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma!r}")
        if self.model_kind not in ("ar1", "ar2"):
            raise ValueError(f"model_kind must be 'ar1' or 'ar2', got {self.model_kind!r}")
        if self.composite_window not in ("d", "2d"):
            raise ValueError(f"composite_window must be 'd' or '2d', got {self.composite_window!r}")
        if self.burn_in < 0:
            raise ValueError("burn_in must be non-negative")

    def to_json_dict(self) -> dict:
        return {
            "trials": self.trials,
            "n": self.n,
            "d": self.d,
            "sigma": self.sigma,
            "model_kind": self.model_kind,
            "predictor": describe_spec(self.predictor),
            "prefilter": describe_spec(self.prefilter),
            "grid_L": self.grid_L,
            "master_seed": self.master_seed,
            "composite_window": self.composite_window,
            "burn_in": self.burn_in,
        }


@dataclass(frozen=True)
class TrialResult:
    beta1: float
    beta2: float
    e_KK_oracle: float
    e_KH_oracle: float
    e_KK_mean: float
    e_KH_mean: float
    resamples: int


@dataclass
class BenchReport:
    """Aggregated per-metric mean and standard error, plus full provenance."""

    config: BenchConfig
    metrics: Dict[str, dict]
    trials: int
    seed: int
    seconds: float
    resamples_total: int

    def to_json_dict(self) -> dict:
        return {
            "config": self.config.to_json_dict(),
            "metrics": self.metrics,
            "trials": self.trials,
            "seed": self.seed,
            "seconds": self.seconds,
            "resamples_total": self.resamples_total,
        }


def error_ratio(y: Series, x: Series, b1: float, b2: float, n: int) -> float:
    """Forecast-error ratio over t = 1..n.

    Numerator: Euclidean norm of y(t-1) - x(t); y(t-1) is the prediction of
    x(t) formed at t-1.  Denominator: the same norm for the linear predictor
    b1*x(t-1) + b2*x(t-2).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    pred = y.window(0, n - 1)
    target = x.window(1, n)
    lag1 = x.window(0, n - 1)
    lag2 = x.window(-1, n - 2)
    num = math.sqrt(float(np.dot(pred - target, pred - target)))
    resid = b1 * lag1 + b2 * lag2 - target
    den = math.sqrt(float(np.dot(resid, resid)))
    if den < 1e-300:
        raise DegenerateDenominator("linear-predictor residual is numerically zero")
    return num / den


def build_trial_kernels(config: BenchConfig) -> Dict[str, Kernel]:
    """Realize the two truncated kernels shared by every trial.

    ``k_d`` is the predictor kernel on lags 0..d.  ``kh_d`` is the composite
    predictor-after-prefilter kernel: under the default 'd' window it is the
    inverse transform of the product response truncated to lags 0..d, so the
    output at t still only reads x(t-d..t); under '2d' the two kernels are
    truncated separately and convolved, giving support 2d+1.
    """
    d, L = config.d, config.grid_L
    k_d = impulse_from_spec(config.predictor, L, d + 1)
    if config.composite_window == "d":
        kh_d = impulse_from_spec(Product((config.predictor, config.prefilter)), L, d + 1)
    else:
        h_d = impulse_from_spec(config.prefilter, L, d + 1)
        taps = np.convolve(k_d.taps, h_d.taps)
        residuals = {
            key: max(k_d.residuals[key], h_d.residuals[key]) for key in k_d.residuals
        }
        kh_d = Kernel(
            taps=taps,
            support=len(taps),
            origin_spec=Product((config.predictor, config.prefilter)),
            grid_L=L,
            residuals=residuals,
        )
    return {"k_d": k_d, "kh_d": kh_d}


def run_trial(config: BenchConfig, trial_index: int, kernels: Dict[str, Kernel]) -> TrialResult:
    """One seeded trial: draw coefficients, simulate, filter, score four ratios."""
    rng = TrialRng(config.master_seed, trial_index)
    if config.model_kind == "ar2":
        beta1, beta2, resamples = sample_stationary_ar2(rng)
    else:
        beta1, beta2, resamples = rng.uniform(), 0.0, 0
    model = ArModel(beta1=beta1, beta2=beta2, sigma=config.sigma)
    hist = config.d + 2 if config.composite_window == "d" else 2 * config.d + 2
    x = simulate_ar(
        model,
        length=config.n + hist + 1,
        burn_in=config.burn_in,
        rng=rng,
        start_index=-hist,
    )
    y_kk = convolve(kernels["k_d"], x)
    y_kh = convolve(kernels["kh_d"], x)
    b1_ref, b2_ref = BASELINE_COEFFS
    return TrialResult(
        beta1=beta1,
        beta2=beta2,
        e_KK_oracle=error_ratio(y_kk, x, beta1, beta2, config.n),
        e_KH_oracle=error_ratio(y_kh, x, beta1, beta2, config.n),
        e_KK_mean=error_ratio(y_kk, x, b1_ref, b2_ref, config.n),
        e_KH_mean=error_ratio(y_kh, x, b1_ref, b2_ref, config.n),
        resamples=resamples,
    )


def _pool_trial(args) -> TrialResult:
    config, trial_index, kernels = args
    return run_trial(config, trial_index, kernels)


def _mean_se(values) -> dict:
    """Mean and standard error accumulated in ascending trial order."""
    count = len(values)
    mean = math.fsum(values) / count
    if count > 1:
        var = math.fsum((v - mean) ** 2 for v in values) / (count - 1)
        se = math.sqrt(var / count)
    else:
        se = 0.0
    return {"mean": mean, "se": se, "count": count}


def run_benchmark(config: BenchConfig, workers: int = 1) -> BenchReport:
    """Run trials 0..trials-1 and aggregate; identical output for any worker count."""
    start = time.perf_counter()
    kernels = build_trial_kernels(config)
    indices = range(config.trials)
    if workers <= 1:
        results = [run_trial(config, i, kernels) for i in indices]
    else:
        ctx = get_context("spawn")
        with ctx.Pool(processes=workers) as pool:
            results = pool.map(_pool_trial, [(config, i, kernels) for i in indices])
    metrics = {
        name: _mean_se([getattr(res, name) for res in results]) for name in METRIC_NAMES
    }
    seconds = time.perf_counter() - start
    return BenchReport(
        config=config,
        metrics=metrics,
        trials=config.trials,
        seed=config.master_seed,
        seconds=seconds,
        resamples_total=sum(res.resamples for res in results),
    )
