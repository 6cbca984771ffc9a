"""Apply causal kernels to real sequences, batch and one sample at a time.

Both paths accumulate taps in ascending lag order, so the streaming output is
bit-identical to the batch output on the same prefix.  History before the
first observed sample is zero.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .realization import Kernel

__all__ = ["Series", "StreamState", "convolve", "write_series_csv", "read_series_csv"]


@dataclass
class Series:
    """Real sequence with an explicit time index for values[0]."""

    values: np.ndarray
    start_index: int = 0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("Series values must be one-dimensional")
        if not np.all(np.isfinite(values)):
            raise ValueError("Series values must be finite")
        self.values = values

    def __len__(self) -> int:
        return len(self.values)

    @property
    def end_index(self) -> int:
        """Time index of the last value."""
        return self.start_index + len(self.values) - 1

    def window(self, first: int, last: int) -> np.ndarray:
        """Values for time indices first..last inclusive."""
        if first < self.start_index or last > self.end_index or first > last:
            raise ValueError(
                f"window [{first}, {last}] outside series range "
                f"[{self.start_index}, {self.end_index}]"
            )
        offset = first - self.start_index
        return self.values[offset : offset + (last - first + 1)]


def convolve(kernel: Kernel, x: Series) -> Series:
    """Causal convolution y(t) = sum_j taps[j] * x(t-j), zeros before the series.

    The output covers the same index range as the input.  Accumulation order
    is ascending lag j, matching the brute-force double loop and the streaming
    path bit for bit.
    """
    xs = x.values
    n = len(xs)
    y = np.zeros(n, dtype=float)
    taps = kernel.taps
    for j in range(min(kernel.support, n)):
        y[j:] += taps[j] * xs[: n - j]
    return Series(values=y, start_index=x.start_index)


@dataclass
class StreamState:
    """Single-owner streaming convolution state over the last `support` samples."""

    kernel: Kernel
    _ring: np.ndarray = field(init=False, repr=False)
    _pos: int = field(init=False, default=-1, repr=False)
    _count: int = field(init=False, default=0, repr=False)

    def __post_init__(self):
        self._ring = np.zeros(self.kernel.support, dtype=float)

    def push(self, sample: float) -> float:
        """Ingest one sample and return the convolution output at its index."""
        sample = float(sample)
        if not np.isfinite(sample):
            raise ValueError(f"stream sample must be finite, got {sample!r}")
        support = self.kernel.support
        self._pos = (self._pos + 1) % support
        self._ring[self._pos] = sample
        self._count += 1
        taps = self.kernel.taps
        acc = 0.0
        for j in range(min(self._count, support)):
            acc += taps[j] * self._ring[(self._pos - j) % support]
        return acc


def write_series_csv(series: Series, path) -> None:
    """Write a series as CSV with header ``t,x`` at full double precision."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "x"])
        for k, v in enumerate(series.values):
            writer.writerow([series.start_index + k, format(v, ".17g")])


def read_series_csv(path) -> Series:
    """Read a ``t,x`` CSV; t must be integers ascending by 1."""
    times = []
    values = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [c.strip() for c in header] != ["t", "x"]:
            raise ValueError(f"expected header 't,x' in {path}")
        for row in reader:
            if len(row) != 2:
                raise ValueError(f"malformed series row {row!r}")
            times.append(int(row[0]))
            values.append(float(row[1]))
    if not times:
        raise ValueError(f"series file {path} is empty")
    for prev, cur in zip(times, times[1:]):
        if cur != prev + 1:
            raise ValueError(f"series time index must ascend by 1, got {prev} -> {cur}")
    return Series(values=np.asarray(values, dtype=float), start_index=times[0])
