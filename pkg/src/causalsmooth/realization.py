"""Realize transfer specs as causal, finitely supported real kernels.

The frequency response is sampled on a uniform power-of-two grid of the unit
circle and inverted with the inverse DFT.  The grid stands in for the inverse
transform integral (1/2pi) * integral of H(e^{i omega}) e^{i omega t}; the
kernels decay but are not finitely supported, so aliasing is the dominant
error and every realization is re-checked on the doubled grid.

Three certificates guard a realization:

* causality: the negative-time half of the circular buffer must be at noise
  level, otherwise the spec is not causal (the reference family trips this);
* realness: imaginary residue at noise level;
* aliasing: the retained taps must agree between grids L and 2L.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .xfer import TransferSpec, eval_spec

__all__ = [
    "RealizationError",
    "CausalityViolation",
    "RealnessViolation",
    "AliasingError",
    "FrequencyResponse",
    "Kernel",
    "sample_response",
    "impulse_from_spec",
    "aliasing_check",
    "truncate",
    "write_kernel_csv",
    "read_kernel_csv",
    "DEFAULT_GRID_L",
]

DEFAULT_GRID_L = 65536

#: max negative-time magnitude allowed, relative to the largest retained tap.
CAUSALITY_REL_TOL = 1e-8
#: max imaginary residue allowed, relative to the largest retained tap.
REALNESS_REL_TOL = 1e-9
#: max tap drift between grids L and 2L, relative to the largest retained tap.
ALIASING_REL_TOL = 1e-9


class RealizationError(Exception):
    """Base class for realization certificate failures."""


class CausalityViolation(RealizationError):
    """The inverse transform has significant mass at negative time."""


class RealnessViolation(RealizationError):
    """The inverse transform has a significant imaginary residue."""


class AliasingError(RealizationError):
    """Doubling the grid moved the retained taps; the grid is too coarse."""


def _require_grid(L: int) -> None:
    if not (isinstance(L, (int, np.integer)) and L >= 16 and (L & (L - 1)) == 0):
        raise ValueError(f"grid size must be a power of two >= 16, got {L!r}")


def _grid_points(L: int) -> np.ndarray:
    # 2pi/L is an exact float scaling for power-of-two L, which makes samples
    # at shared points of grids L and 2L bit-identical.
    omega = np.arange(L) * (2.0 * math.pi / L)
    return np.exp(1j * omega)


@dataclass
class FrequencyResponse:
    """Samples of a transfer spec at the L-th roots of unity, samples[j] = H(e^{2pi i j/L})."""

    spec: TransferSpec
    L: int
    samples: np.ndarray


def sample_response(spec: TransferSpec, L: int) -> FrequencyResponse:
    """Evaluate ``spec`` on the uniform L-point circle grid (L a power of two >= 16)."""
    _require_grid(L)
    samples = np.asarray(eval_spec(spec, _grid_points(L)), dtype=complex)
    return FrequencyResponse(spec=spec, L=L, samples=samples)


def _raw_inverse(spec: TransferSpec, L: int) -> np.ndarray:
    return np.fft.ifft(sample_response(spec, L).samples)


@dataclass
class Kernel:
    """Causal real impulse response: taps[t] for t = 0..support-1.

    ``residuals`` records what the realization discarded (negative-time mass,
    imaginary residue, aliasing drift).  Kernels read back from CSV carry no
    provenance: origin_spec/grid_L are None and the residuals are NaN.
    """

    taps: np.ndarray
    support: int
    origin_spec: Optional[TransferSpec]
    grid_L: Optional[int]
    residuals: dict


def aliasing_check(spec: TransferSpec, L: int, support: int) -> float:
    """Max absolute drift of taps 0..support-1 between grids L and 2L."""
    _require_grid(L)
    lo = _raw_inverse(spec, L)[:support].real
    hi = _raw_inverse(spec, 2 * L)[:support].real
    return float(np.max(np.abs(lo - hi)))


def impulse_from_spec(spec: TransferSpec, L: int, support: int) -> Kernel:
    """Realize ``spec`` as a causal kernel of the given support.

    Raises CausalityViolation / RealnessViolation / AliasingError when the
    respective certificate fails; a bare reference spec always fails the
    causality certificate.
    """
    _require_grid(L)
    if not 1 <= support <= L // 2:
        raise ValueError(f"support must lie in [1, L/2], got {support!r} for L={L}")
    coef = _raw_inverse(spec, L)
    taps = coef[:support].real.copy()
    scale = float(np.max(np.abs(taps)))
    if scale == 0.0:
        raise RealizationError("realized kernel is identically zero over the requested support")
    max_anticausal = float(np.max(np.abs(coef[L // 2:])))
    max_imag = float(np.max(np.abs(coef.imag)))
    if max_anticausal > CAUSALITY_REL_TOL * scale:
        raise CausalityViolation(
            f"negative-time mass {max_anticausal:.3e} exceeds "
            f"{CAUSALITY_REL_TOL:.0e} * max|taps| = {CAUSALITY_REL_TOL * scale:.3e}; "
            "the spec is not causal"
        )
    if max_imag > REALNESS_REL_TOL * scale:
        raise RealnessViolation(
            f"imaginary residue {max_imag:.3e} exceeds "
            f"{REALNESS_REL_TOL:.0e} * max|taps| = {REALNESS_REL_TOL * scale:.3e}"
        )
    drift = aliasing_check(spec, L, support)
    if drift > ALIASING_REL_TOL * scale:
        raise AliasingError(
            f"grid-doubling drift {drift:.3e} exceeds "
            f"{ALIASING_REL_TOL:.0e} * max|taps| = {ALIASING_REL_TOL * scale:.3e}; "
            "increase L"
        )
    residuals = {"max_anticausal": max_anticausal, "max_imag": max_imag, "aliasing": drift}
    return Kernel(taps=taps, support=support, origin_spec=spec, grid_L=L, residuals=residuals)


def truncate(kernel: Kernel, d: int) -> Kernel:
    """Truncated kernel keeping lags t <= d (so support d+1, or less if shorter)."""
    if not (isinstance(d, (int, np.integer)) and d >= 0):
        raise ValueError(f"d must be a non-negative integer, got {d!r}")
    if d > kernel.support:
        raise ValueError(f"d={d} exceeds the kernel support {kernel.support}")
    keep = min(d + 1, kernel.support)
    return Kernel(
        taps=kernel.taps[:keep].copy(),
        support=keep,
        origin_spec=kernel.origin_spec,
        grid_L=kernel.grid_L,
        residuals=dict(kernel.residuals),
    )


def write_kernel_csv(kernel: Kernel, path) -> None:
    """Write taps as CSV with header ``t,h`` at full double precision."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "h"])
        for t, h in enumerate(kernel.taps):
            writer.writerow([t, format(h, ".17g")])


def read_kernel_csv(path) -> Kernel:
    """Read a ``t,h`` CSV back into a Kernel (provenance fields are empty)."""
    taps = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [c.strip() for c in header] != ["t", "h"]:
            raise ValueError(f"expected header 't,h' in {path}")
        for t, row in enumerate(reader):
            if len(row) != 2 or int(row[0]) != t:
                raise ValueError(f"malformed kernel row {row!r} at position {t}")
            taps.append(float(row[1]))
    if not taps:
        raise ValueError(f"kernel file {path} has no taps")
    nan = float("nan")
    return Kernel(
        taps=np.asarray(taps, dtype=float),
        support=len(taps),
        origin_spec=None,
        grid_L=None,
        residuals={"max_anticausal": nan, "max_imag": nan, "aliasing": nan},
    )
