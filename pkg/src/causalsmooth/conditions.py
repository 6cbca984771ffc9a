"""Numerical verification of the defining conditions of the near-ideal family.

The filters promise: uniformly bounded gain (a1), convergence to the identity
on any fixed low-frequency band as a -> 1 (a2), a zero at z = -1 with m flat
derivatives (b1), an arbitrarily small gain neighborhood of omega = pi (b2),
and gain domination by a non-causal reference smoother on a band (c).  Each
check is a falsifiable grid or finite-difference computation returning a
ConditionReport with every measured quantity in its witness; nothing in this
module is random, so reports reproduce bit for bit.

Derivatives at omega = pi are estimated with central differences plus a
Richardson tableau, and judged relative to the same-stencil derivative at
omega = pi/2, where nothing vanishes; absolute tolerances would be
meaningless because derivative scales swing over orders of magnitude in
(a, p).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Sequence

import numpy as np

from .xfer import (
    NearIdealParams,
    ReferenceParams,
    describe_spec,
    eval_near_ideal,
    eval_psi,
    eval_reference,
)

__all__ = [
    "BandSpec",
    "ConditionReport",
    "check_bounded_gain",
    "check_identity_approx",
    "check_zero_at_pi",
    "check_small_neighborhood",
    "check_domination",
    "richardson_derivative",
    "DEFAULT_GRID",
    "DEFAULT_BAND",
    "DEFAULT_DOMINATION_REFERENCE",
    "BOUNDED_GAIN_FACTOR",
    "IDENTITY_PASS_LIMIT",
]

DEFAULT_GRID = 4096

#: engineering bound for (a1): max gain must stay below 2 * (e + 1)^m.
BOUNDED_GAIN_FACTOR = 2.0

#: (a2) passes when the final identity error drops below this.
IDENTITY_PASS_LIMIT = 0.05

#: relative tolerance of the zero-value check at omega = pi.
ZERO_REL_TOL = 1e-12

#: relative tolerance of the derivative checks at omega = pi.
DERIVATIVE_REL_TOL = 1e-5


@dataclass(frozen=True)
class BandSpec:
    """Bands for the domination check: identity on [-Omega, Omega], gain
    domination on +/-[Omega0, Omega1], identity tolerance epsilon.

    Omega0 == Omega1 is allowed and makes the domination band empty
    (vacuously satisfied); the identity band is still checked.
    """

    Omega: float
    Omega0: float
    Omega1: float
    epsilon: float
    grid_points: int = DEFAULT_GRID

    def __post_init__(self):
        if not (0.0 < self.Omega < self.Omega0 <= self.Omega1 < math.pi):
            raise ValueError(
                f"need 0 < Omega < Omega0 <= Omega1 < pi, got "
                f"({self.Omega}, {self.Omega0}, {self.Omega1})"
            )
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon!r}")
        if self.grid_points < 2:
            raise ValueError("grid_points must be >= 2")


#: band used by the standard verification suite.  The proof of the domination
#: condition only guarantees existence of a working band; this one was chosen
#: so that the a = 0.99, p = 0.6, N = 50, m = 2 filter stays strictly below 1
#: on the gain band, which is what makes domination by a sub-unit reference
#: gain possible at all.
DEFAULT_BAND = BandSpec(Omega=1.0, Omega0=3.08, Omega1=3.12, epsilon=0.1)

#: reference smoother paired with DEFAULT_BAND in the standard suite.
DEFAULT_DOMINATION_REFERENCE = ReferenceParams(mu=0.005, q=1.01)


@dataclass
class ConditionReport:
    """Outcome of one check: id, verdict, and every measured quantity."""

    condition_id: str
    passed: bool
    witness: dict
    tolerances: dict
    parameters: dict

    def to_json_dict(self) -> dict:
        return {
            "condition_id": self.condition_id,
            "pass": self.passed,
            "witness": _plain(self.witness),
            "tolerances": _plain(self.tolerances),
            "parameters": _plain(self.parameters),
        }


def _plain(value):
    """Recursively convert numpy scalars/arrays for JSON serialization."""
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    return value


def _gain_on(params: NearIdealParams, omega: np.ndarray) -> np.ndarray:
    return np.abs(eval_near_ideal(params, np.exp(1j * omega)))


def check_bounded_gain(
    p: float, N: int, m: int, a_list: Sequence[float], grid: int = DEFAULT_GRID
) -> ConditionReport:
    """(a1): the gain stays under the engineering bound 2*(e+1)^m across a_list."""
    bound = BOUNDED_GAIN_FACTOR * (math.e + 1.0) ** m
    omega = np.linspace(0.0, math.pi, grid)
    max_gain = 0.0
    argmax = {"a": None, "omega": None}
    per_a = {}
    for a in a_list:
        gains = _gain_on(NearIdealParams(a=a, p=p, N=N, m=m), omega)
        j = int(np.argmax(gains))
        per_a[repr(float(a))] = float(gains[j])
        if gains[j] > max_gain:
            max_gain = float(gains[j])
            argmax = {"a": float(a), "omega": float(omega[j])}
    return ConditionReport(
        condition_id="a1",
        passed=max_gain <= bound,
        witness={"max_gain": max_gain, "argmax": argmax, "per_a_max": per_a},
        tolerances={"bound": bound, "grid": grid},
        parameters={"p": p, "N": int(N), "m": int(m), "a_list": [float(a) for a in a_list]},
    )


def check_identity_approx(
    params_seq: Sequence[NearIdealParams], Omega: float, grid: int = DEFAULT_GRID
) -> ConditionReport:
    """(a2): sup |H - 1| over [-Omega, Omega] decreases along the a-sequence.

    Passes when the last error is below both the first error and
    IDENTITY_PASS_LIMIT.  Omega = 0 degenerates to the single point z = 1.
    """
    if len(params_seq) < 2:
        raise ValueError("need at least two parameter sets with increasing a")
    head = params_seq[0]
    for prev, cur in zip(params_seq, params_seq[1:]):
        if (cur.p, cur.N, cur.m) != (head.p, head.N, head.m):
            raise ValueError("all parameter sets must share (p, N, m)")
        if not cur.a > prev.a:
            raise ValueError("a values must be strictly increasing")
    if Omega < 0:
        raise ValueError("Omega must be non-negative")
    omega = np.linspace(-Omega, Omega, grid)
    sup_err = [
        float(np.max(np.abs(eval_near_ideal(params, np.exp(1j * omega)) - 1.0)))
        for params in params_seq
    ]
    passed = sup_err[-1] < sup_err[0] and sup_err[-1] < IDENTITY_PASS_LIMIT
    return ConditionReport(
        condition_id="a2",
        passed=passed,
        witness={"a": [params.a for params in params_seq], "sup_err": sup_err},
        tolerances={"final_limit": IDENTITY_PASS_LIMIT, "grid": grid, "Omega": Omega},
        parameters={"p": head.p, "N": int(head.N), "m": int(head.m)},
    )


_STENCILS = {
    # order -> (offsets, coefficients, h power); all are O(h^2) central stencils
    1: ((-1, 1), (-0.5, 0.5), 1),
    2: ((-1, 0, 1), (1.0, -2.0, 1.0), 2),
    3: ((-2, -1, 1, 2), (-0.5, 1.0, -1.0, 0.5), 3),
    4: ((-2, -1, 0, 1, 2), (1.0, -4.0, 6.0, -4.0, 1.0), 4),
}


def richardson_derivative(
    func: Callable[[float], complex],
    x0: float,
    order: int,
    h0: float = 1e-3,
    levels: int = 5,
):
    """Estimate the order-th derivative at x0 by central differencing with a
    Richardson tableau over step halvings.

    Returns (estimate, diagonal) where diagonal holds the successive
    extrapolated values; their convergence is the caller's stencil sanity
    check.
    """
    if order not in _STENCILS:
        raise ValueError(f"derivative order must be one of {sorted(_STENCILS)}, got {order}")
    offsets, coeffs, power = _STENCILS[order]
    tableau: List[List[complex]] = []
    for i in range(levels):
        h = h0 / 2.0 ** i
        d = sum(c * func(x0 + k * h) for k, c in zip(offsets, coeffs)) / h ** power
        row = [d]
        for j in range(1, i + 1):
            factor = 4.0 ** j
            row.append((factor * row[j - 1] - tableau[i - 1][j - 1]) / (factor - 1.0))
        tableau.append(row)
    diagonal = [tableau[i][i] for i in range(levels)]
    return diagonal[-1], diagonal


def check_zero_at_pi(
    params: NearIdealParams,
    omit_correction: bool = False,
    h0: float = 1e-3,
    levels: int = 5,
    grid: int = DEFAULT_GRID,
) -> ConditionReport:
    """(b1): the gain vanishes at omega = pi together with m derivatives.

    Derivative estimates for k = 1..m must fall below DERIVATIVE_REL_TOL times
    the same-stencil estimate at omega = pi/2; orders m+1..2m-1 are reported
    in the witness without being asserted.  ``omit_correction`` evaluates the
    exponential factor alone (the correction polynomial dropped); the check
    must then fail, which pins the flat zero on the correction term.
    """

    def response(omega: float) -> complex:
        if omit_correction:
            base = np.exp(eval_psi(params, complex(math.cos(omega), math.sin(omega))))
            out = base
            for _ in range(params.m - 1):
                out = out * base
            return out
        return eval_near_ideal(params, complex(math.cos(omega), math.sin(omega)))

    gains = np.abs([response(w) for w in np.linspace(0.0, math.pi, grid)])
    max_gain = float(np.max(gains))
    value_at_pi = abs(response(math.pi))
    zero_ok = value_at_pi <= ZERO_REL_TOL * max_gain

    derivatives = {}
    asserted_ok = True
    top_order = min(2 * params.m - 1, max(_STENCILS))
    for k in range(1, top_order + 1):
        est, diag = richardson_derivative(response, math.pi, k, h0=h0, levels=levels)
        ref, _ = richardson_derivative(response, math.pi / 2.0, k, h0=h0, levels=levels)
        tol = DERIVATIVE_REL_TOL * abs(ref)
        step = abs(diag[-1] - diag[-2])
        entry = {
            "estimate": abs(est),
            "reference_at_half_pi": abs(ref),
            "tolerance": tol,
            "last_refinement_step": step,
            "asserted": k <= params.m,
        }
        if k <= params.m:
            entry["pass"] = abs(est) <= tol
            asserted_ok = asserted_ok and entry["pass"]
        derivatives[str(k)] = entry

    return ConditionReport(
        condition_id="b1",
        passed=zero_ok and asserted_ok,
        witness={
            "value_at_pi": value_at_pi,
            "max_gain": max_gain,
            "derivatives": derivatives,
        },
        tolerances={
            "zero_rel": ZERO_REL_TOL,
            "derivative_rel": DERIVATIVE_REL_TOL,
            "h0": h0,
            "levels": levels,
        },
        parameters={**describe_spec(params), "omit_correction": omit_correction},
    )


def check_small_neighborhood(
    params: NearIdealParams, epsilon: float, grid: int = DEFAULT_GRID
) -> ConditionReport:
    """(b2): find the widest symmetric band about pi where the gain stays under
    epsilon, by bisection on the half-width; passes when the width is positive."""
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon!r}")

    def sup_within(delta: float) -> float:
        omega = np.linspace(math.pi - delta, math.pi, grid)
        return float(np.max(_gain_on(params, omega)))

    if sup_within(math.pi) < epsilon:
        delta = math.pi
        sup = sup_within(math.pi)
    else:
        lo, hi = 0.0, math.pi
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if sup_within(mid) < epsilon:
                lo = mid
            else:
                hi = mid
        delta = lo
        sup = sup_within(delta) if delta > 0 else abs(
            eval_near_ideal(params, complex(-1.0, 0.0))
        )
    return ConditionReport(
        condition_id="b2",
        passed=delta > 0,
        witness={"delta": delta, "sup_within_delta": sup},
        tolerances={"epsilon": epsilon, "grid": grid},
        parameters=describe_spec(params),
    )


def check_domination(
    near: NearIdealParams, ref: ReferenceParams, band: BandSpec
) -> ConditionReport:
    """(c): |H - 1| <= epsilon on the identity band and |H| <= reference gain on
    the domination band, at every grid point; worst margins recorded either way."""
    grid = band.grid_points
    omega_low = np.linspace(-band.Omega, band.Omega, grid)
    identity_err = np.abs(eval_near_ideal(near, np.exp(1j * omega_low)) - 1.0)
    j = int(np.argmax(identity_err))
    identity_margin = band.epsilon - float(identity_err[j])
    witness = {
        "identity_max_err": float(identity_err[j]),
        "identity_margin": identity_margin,
        "identity_argmax_omega": float(omega_low[j]),
    }

    if band.Omega0 == band.Omega1:
        domination_ok = True
        witness["domination_margin"] = None
        witness["domination_band_empty"] = True
    else:
        half = np.linspace(band.Omega0, band.Omega1, grid)
        omega_band = np.concatenate([-half[::-1], half])
        gain = _gain_on(near, omega_band)
        bound = eval_reference(ref, omega_band)
        margins = bound - gain
        k = int(np.argmin(margins))
        domination_ok = bool(margins[k] >= 0.0)
        witness["domination_margin"] = float(margins[k])
        witness["domination_argmin_omega"] = float(omega_band[k])
        witness["domination_band_empty"] = False

    return ConditionReport(
        condition_id="c",
        passed=bool(identity_margin >= 0.0) and domination_ok,
        witness=witness,
        tolerances={"epsilon": band.epsilon, "grid": grid},
        parameters={
            "near": describe_spec(near),
            "reference": describe_spec(ref),
            "band": {
                "Omega": band.Omega,
                "Omega0": band.Omega0,
                "Omega1": band.Omega1,
            },
        },
    )
