"""Render figure files next to the CSV data the CLI emits.

Every function takes plain arrays plus an output path; the CLI wires them to
the same values it writes as CSV, so a figure never shows anything the data
file does not contain.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

__all__ = [
    "save_freqresp_plot",
    "save_impulse_plot",
    "save_smooth_plot",
    "save_predict_plot",
]

_FIGSIZE = (7.0, 4.0)
_DPI = 150


def save_freqresp_plot(omega, gain, err1, path, title: str) -> None:
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.plot(omega, gain, label="gain")
    ax.plot(omega, err1, "--", label="|response - 1|")
    ax.set_xlabel("omega")
    ax.set_title(title)
    ax.legend(loc="best")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_impulse_plot(taps, path, title: str) -> None:
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.stem(range(len(taps)), taps, basefmt=" ")
    ax.set_xlabel("t")
    ax.set_ylabel("h(t)")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_smooth_plot(t, x, y, path, title: str) -> None:
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.plot(t, x, label="input", alpha=0.6)
    ax.plot(t, y, label="filtered")
    ax.set_xlabel("t")
    ax.set_title(title)
    ax.legend(loc="best")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_predict_plot(t, x, yhat, path, title: str) -> None:
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.plot(t, x, label="x(t)", alpha=0.6)
    ax.plot(t, yhat, label="prediction of x(t)")
    ax.set_xlabel("t")
    ax.set_title(title)
    ax.legend(loc="best")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
