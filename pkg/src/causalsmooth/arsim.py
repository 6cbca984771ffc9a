"""AR(1)/AR(2) sample paths and the random-coefficient law for Monte-Carlo trials.

Reproducibility contract
------------------------
Each trial owns one counter-based stream: ``PCG64`` keyed by
``SeedSequence(master_seed, spawn_key=(trial_index,))``.  Uniform variates are
``(k + 0.5) * 2**-53`` with k a 53-bit integer draw (strictly inside (0, 1));
Gaussians are the inverse normal CDF of such uniforms.  Both transforms are
fixed and platform-stable, so a (seed, trial) pair replays bit-identically
anywhere.

Within :func:`simulate_ar`, path innovations are drawn *before* burn-in
innovations and assigned to time in reverse (the latest time gets the first
draw).  The observed window is therefore invariant under lengthening the
burn-in or extending the window into the past, which keeps burn-in and
truncation comparisons free of fresh Monte-Carlo noise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.signal import lfilter
from scipy.special import ndtri

from .stream import Series

__all__ = [
    "ArModel",
    "TrialRng",
    "is_stationary",
    "sample_ar2_coeffs",
    "sample_stationary_ar2",
    "simulate_ar",
]

_INV = 2.0 ** -53


def is_stationary(beta1: float, beta2: float) -> bool:
    """True iff both roots of z^2 - beta1*z - beta2 lie strictly inside the unit disk."""
    return abs(beta2) < 1.0 and beta1 + beta2 < 1.0 and beta2 - beta1 < 1.0


@dataclass(frozen=True)
class ArModel:
    """Autoregression x(t) = beta1*x(t-1) + beta2*x(t-2) + sigma*eta(t)."""

    beta1: float
    beta2: float
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma!r}")
        if not is_stationary(self.beta1, self.beta2):
            raise ValueError(f"non-stationary coefficients ({self.beta1!r}, {self.beta2!r})")


class TrialRng:
    """Per-trial random stream; (seed, i) and (seed, j) are independent for i != j."""

    def __init__(self, master_seed: int, trial_index: int):
        self.master_seed = int(master_seed)
        self.trial_index = int(trial_index)
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(self.trial_index,))
        self._gen = np.random.Generator(np.random.PCG64(seq))

    def uniform(self) -> float:
        """One uniform draw, strictly inside (0, 1)."""
        k = int(self._gen.integers(0, 1 << 53, dtype=np.int64))
        return (k + 0.5) * _INV

    def standard_normal(self, size: int) -> np.ndarray:
        """Standard normals via the inverse CDF of 53-bit open-interval uniforms."""
        k = self._gen.integers(0, 1 << 53, size=size, dtype=np.int64)
        return ndtri((k + 0.5) * _INV)


def sample_ar2_coeffs(rng) -> Tuple[float, float]:
    """Draw (beta1, beta2): beta1 ~ U(0,1), beta2 = xi*sqrt(1-beta1^2), xi ~ U(-1,1).

    Consumes exactly two uniforms, in the order (beta1, xi).  The pair lands in
    the right half of the unit disk; that does *not* imply stationarity.
    """
    beta1 = rng.uniform()
    xi = 2.0 * rng.uniform() - 1.0
    return beta1, xi * np.sqrt(1.0 - beta1 * beta1)


def sample_stationary_ar2(rng) -> Tuple[float, float, int]:
    """Rejection-sample :func:`sample_ar2_coeffs` until stationary.

    Returns (beta1, beta2, resamples).  The guard exists because the raw law
    does put mass on non-stationary pairs (about 21% of it); the resample
    count documents how often it fires.
    """
    resamples = 0
    while True:
        beta1, beta2 = sample_ar2_coeffs(rng)
        if is_stationary(beta1, beta2):
            return beta1, beta2, resamples
        resamples += 1


def simulate_ar(
    model: ArModel,
    length: int,
    burn_in: int,
    rng: Optional[TrialRng] = None,
    noise: Optional[np.ndarray] = None,
    start_index: int = 0,
) -> Series:
    """Simulate the recursion from a zero pre-state and discard the burn-in.

    The recursion starts from x = 0 two steps before the first burn-in sample;
    ``burn_in`` samples are dropped and the remaining ``length`` samples are
    returned with the given start index.  ``noise`` substitutes the Gaussian
    innovations (time order, length burn_in + length) and exists for tests.
    """
    if length < 0 or burn_in < 0:
        raise ValueError("length and burn_in must be non-negative")
    total = burn_in + length
    if noise is not None:
        eta = np.asarray(noise, dtype=float)
        if eta.shape != (total,):
            raise ValueError(f"noise must have shape ({total},), got {eta.shape}")
    else:
        if rng is None:
            raise ValueError("either rng or noise must be provided")
        path = rng.standard_normal(length)
        burn = rng.standard_normal(burn_in)
        eta = np.concatenate([burn[::-1], path[::-1]])
    x = lfilter([1.0], [1.0, -model.beta1, -model.beta2], model.sigma * eta)
    return Series(values=x[burn_in:], start_index=start_index)
