"""Closed-form evaluation of the filter transfer functions on the unit circle.

Four families are supported, plus pointwise products of them:

* near-ideal causal smoothers ``(exp((1-a)^p/(z+a)) + G(z))^m`` whose gain
  vanishes at ``z = -1`` together with ``m`` derivatives,
* the non-causal reference smoothers ``exp(-mu/|1+e^{i omega}|^q)``,
* the causal one-step predictor ``z*(1 - exp(-gamma/(z+1-gamma^{-r})))``.

Every evaluator is a pure function of an immutable parameter object.  Scalar
complex arguments and numpy arrays are both accepted; arrays evaluate
elementwise.  Evaluation is only meaningful for ``|z| >= 1`` (the filters are
causal, so their transforms live on and outside the unit circle); this is a
documented precondition, not a checked one.

Integer powers are computed by parity and binary exponentiation, never through
the complex logarithm, so there are no branch-cut artifacts on the circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "SingularityError",
    "NearIdealParams",
    "ReferenceParams",
    "PredictorParams",
    "Product",
    "TransferSpec",
    "xi_coef",
    "gamma_coef",
    "eval_psi",
    "eval_g",
    "eval_near_ideal",
    "eval_reference",
    "eval_predictor",
    "eval_spec",
    "describe_spec",
]

#: Distance below which an evaluation point is treated as sitting on a pole.
SINGULARITY_TOL = 1e-14

#: |1 + e^{i omega}| gaps below this are treated as the omega = +/-pi limit.
_PI_GAP_TOL = 1e-12


class SingularityError(ValueError):
    """The evaluation point is numerically on top of a pole."""


def _check_open_range(name: str, value: float, low: float, high: float) -> None:
    if not (low < float(value) < high):
        raise ValueError(f"{name} must lie in ({low}, {high}), got {value!r}")


def _check_positive_int(name: str, value: int) -> None:
    if not (isinstance(value, (int, np.integer)) and not isinstance(value, bool) and value >= 1):
        raise ValueError(f"{name} must be a positive integer, got {value!r}")


@dataclass(frozen=True)
class NearIdealParams:
    """Parameters of the causal near-ideal smoothing family.

    a : damping knob in (0, 1); the filter tends to the identity as a -> 1.
    p : decay exponent in (1/2, 1).
    N : order of the oscillatory correction term, integer >= 1.
    m : multiplicity of the zero at z = -1, integer >= 1.
    """

    a: float
    p: float
    N: int
    m: int

    def __post_init__(self):
        _check_open_range("a", self.a, 0.0, 1.0)
        _check_open_range("p", self.p, 0.5, 1.0)
        _check_positive_int("N", self.N)
        _check_positive_int("m", self.m)


@dataclass(frozen=True)
class ReferenceParams:
    """Parameters of the non-causal reference smoothing family (mu > 0, q > 1)."""

    mu: float
    q: float

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu!r}")
        if not self.q > 1:
            raise ValueError(f"q must exceed 1, got {self.q!r}")


@dataclass(frozen=True)
class PredictorParams:
    """Parameters of the one-step predictor kernel.

    gamma is the predictor gain (distinct from the near-ideal coefficient
    computed by :func:`gamma_coef`; the two are never abbreviated to the same
    name in this package).  The accuracy class of the predictor additionally
    asks for input spectra dominated by a reference gain with q > 1 + 2/r;
    that is a property of the inputs, not of these parameters.
    """

    gamma: float
    r: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma!r}")
        if not self.r > 0:
            raise ValueError(f"r must be positive, got {self.r!r}")


@dataclass(frozen=True)
class Product:
    """Pointwise product of transfer specs, e.g. predictor times prefilter."""

    factors: tuple

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise ValueError("Product requires at least one factor")
        for factor in factors:
            if not isinstance(factor, (NearIdealParams, ReferenceParams, PredictorParams, Product)):
                raise TypeError(f"unsupported transfer spec factor: {factor!r}")
        object.__setattr__(self, "factors", factors)


TransferSpec = Union[NearIdealParams, ReferenceParams, PredictorParams, Product]


def _is_scalar(z) -> bool:
    return np.ndim(z) == 0


def _ipow(w, n: int):
    """w**n for integer n >= 0 by binary exponentiation."""
    if n < 0:
        raise ValueError("negative exponent")
    result = np.ones_like(w)
    while n:
        if n & 1:
            result = result * w
        w = w * w
        n >>= 1
    return result


def xi_coef(a: float, p: float) -> float:
    """Constant term exp(-(1-a)^(p-1)) of the correction polynomial.

    Strictly positive, and sinks to 0 as a -> 1 because the exponent
    (1-a)^(p-1) blows up for p < 1.
    """
    _check_open_range("a", a, 0.0, 1.0)
    _check_open_range("p", p, 0.5, 1.0)
    return math.exp(-((1.0 - a) ** (p - 1.0)))


def gamma_coef(a: float, p: float) -> float:
    """Slope coefficient |1-a|^(p-2) * xi_coef(a, p) of the correction term."""
    _check_open_range("a", a, 0.0, 1.0)
    _check_open_range("p", p, 0.5, 1.0)
    return abs(1.0 - a) ** (p - 2.0) * xi_coef(a, p)


def eval_psi(params: NearIdealParams, z):
    """Pole kernel (1-a)^p / (z + a); the exponent inside the smoother."""
    scalar = _is_scalar(z)
    z = np.asarray(z, dtype=complex)
    denom = z + params.a
    if np.min(np.abs(denom)) < SINGULARITY_TOL:
        raise SingularityError(f"z within {SINGULARITY_TOL} of the pole at {-params.a}")
    out = (1.0 - params.a) ** params.p / denom
    return complex(out) if scalar else out


def eval_g(params: NearIdealParams, z):
    """Correction term -xi + (gamma/N) * ((-1)^N z^(-N) - 1).

    (-1)^N comes from integer parity and z^(-N) from binary exponentiation of
    1/z, so z = -1 cancels exactly and the value there is -xi_coef(a, p).
    """
    scalar = _is_scalar(z)
    z = np.asarray(z, dtype=complex)
    if np.min(np.abs(z)) < SINGULARITY_TOL:
        raise SingularityError("z too close to 0")
    sign = 1.0 if params.N % 2 == 0 else -1.0
    osc = sign * _ipow(1.0 / z, params.N) - 1.0
    out = -xi_coef(params.a, params.p) + gamma_coef(params.a, params.p) / params.N * osc
    return complex(out) if scalar else out


def eval_near_ideal(params: NearIdealParams, z):
    """Near-ideal smoother (exp(psi) + G)^m, the power by repeated multiplication."""
    scalar = _is_scalar(z)
    base = np.exp(eval_psi(params, z)) + eval_g(params, z)
    out = _ipow(base, params.m)
    return complex(out) if scalar else out


def eval_reference(params: ReferenceParams, omega):
    """Reference gain exp(-mu / |1 + e^{i omega}|^q) on the circle.

    Real and non-negative.  At omega = +/-pi the gap |1 + e^{i omega}| closes
    and the gain is the limit value 0; gaps below ``1e-12`` are clamped there.
    """
    scalar = _is_scalar(omega)
    omega = np.asarray(omega, dtype=float)
    gap = 2.0 * np.abs(np.cos(omega / 2.0))
    with np.errstate(divide="ignore", over="ignore"):
        gain = np.where(gap > _PI_GAP_TOL, np.exp(-params.mu / gap ** params.q), 0.0)
    return float(gain) if scalar else gain


def eval_predictor(params: PredictorParams, z):
    """One-step predictor z * (1 - exp(-gamma / (z + 1 - gamma^{-r}))).

    gamma^{-r} is computed as exp(-r * log(gamma)).
    """
    scalar = _is_scalar(z)
    z = np.asarray(z, dtype=complex)
    shift = 1.0 - math.exp(-params.r * math.log(params.gamma))
    denom = z + shift
    if np.min(np.abs(denom)) < SINGULARITY_TOL:
        raise SingularityError(f"z within {SINGULARITY_TOL} of the pole at {-shift}")
    out = z * (1.0 - np.exp(-params.gamma / denom))
    return complex(out) if scalar else out


def eval_spec(spec: TransferSpec, z):
    """Evaluate any transfer spec at z; Product multiplies its factors pointwise."""
    scalar = _is_scalar(z)
    if isinstance(spec, NearIdealParams):
        out = eval_near_ideal(spec, z)
    elif isinstance(spec, ReferenceParams):
        out = np.asarray(eval_reference(spec, np.angle(np.asarray(z, dtype=complex))), dtype=complex)
        if scalar:
            out = complex(out)
    elif isinstance(spec, PredictorParams):
        out = eval_predictor(spec, z)
    elif isinstance(spec, Product):
        out = eval_spec(spec.factors[0], z)
        for factor in spec.factors[1:]:
            out = out * eval_spec(factor, z)
    else:
        raise TypeError(f"unsupported transfer spec: {spec!r}")
    return out


def describe_spec(spec: TransferSpec) -> dict:
    """JSON-friendly description of a spec, used in reports and config echoes."""
    if isinstance(spec, NearIdealParams):
        return {"kind": "near_ideal", "a": spec.a, "p": spec.p, "N": int(spec.N), "m": int(spec.m)}
    if isinstance(spec, ReferenceParams):
        return {"kind": "reference", "mu": spec.mu, "q": spec.q}
    if isinstance(spec, PredictorParams):
        return {"kind": "predictor", "gamma": spec.gamma, "r": spec.r}
    if isinstance(spec, Product):
        return {"kind": "product", "factors": [describe_spec(f) for f in spec.factors]}
    raise TypeError(f"unsupported transfer spec: {spec!r}")
