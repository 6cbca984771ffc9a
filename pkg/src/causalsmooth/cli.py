"""Command-line front end.

Subcommands:

* ``freqresp``  -- sample a transfer function on the circle, CSV ``omega,re,im,gain,err1``
* ``impulse``   -- realize a causal kernel, CSV ``t,h``
* ``smooth``    -- filter a series from CSV, CSV ``t,x,y``
* ``predict``   -- one-step prediction of a series, CSV ``t,x,yhat``
* ``verify``    -- run the condition verification suite, JSON report
* ``bench``     -- Monte-Carlo forecasting benchmark, JSON report

Exit codes: 0 success (verify: all conditions hold; bench: run completed),
1 benchmark trial error, 2 invalid flags, 3 write failure, 4 causality
violation or condition failure.  Data-emitting commands accept ``--plot`` to
render a PNG next to the output file.

Every number printed here comes from a library call; the CLI only formats.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .bench import BenchConfig, run_benchmark
from .conditions import (
    DEFAULT_BAND,
    DEFAULT_DOMINATION_REFERENCE,
    BandSpec,
    check_bounded_gain,
    check_domination,
    check_identity_approx,
    check_small_neighborhood,
    check_zero_at_pi,
)
from .realization import (
    RealizationError,
    impulse_from_spec,
    write_kernel_csv,
)
from .stream import Series, convolve, read_series_csv
from .xfer import (
    NearIdealParams,
    PredictorParams,
    Product,
    ReferenceParams,
    TransferSpec,
    eval_spec,
)

#: a-grid used by the bounded-gain check in the verification suite.
VERIFY_A_LIST = (0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 0.99)

#: a-sequence used by the identity-approximation check.
VERIFY_A_SEQUENCE = (0.9, 0.99, 0.999)


def _fmt(value: float) -> str:
    return format(value, ".17g")


def _add_spec_flags(sub: argparse.ArgumentParser) -> None:
    group = sub.add_argument_group("filter selection (combine --predictor with --near-ideal for the composite)")
    group.add_argument("--near-ideal", action="store_true", help="causal smoothing filter")
    group.add_argument("--a", type=float, default=0.6, help="near-ideal damping knob in (0,1)")
    group.add_argument("--p", type=float, default=0.7, help="near-ideal decay exponent in (1/2,1)")
    group.add_argument("--N", type=int, default=100, help="near-ideal correction order")
    group.add_argument("--m", type=int, default=2, help="near-ideal zero multiplicity")
    group.add_argument("--reference", action="store_true", help="non-causal reference smoother")
    group.add_argument("--mu", type=float, default=0.02, help="reference damping intensity")
    group.add_argument("--q", type=float, default=1.01, help="reference decay exponent")
    group.add_argument("--predictor", action="store_true", help="one-step predictor kernel")
    group.add_argument("--gamma", type=float, default=1.1, help="predictor gain")
    group.add_argument("--r", type=float, default=1.1, help="predictor pole-shift exponent")


def _spec_from_args(args: argparse.Namespace) -> TransferSpec:
    factors = []
    if args.predictor:
        factors.append(PredictorParams(gamma=args.gamma, r=args.r))
    if args.near_ideal:
        factors.append(NearIdealParams(a=args.a, p=args.p, N=args.N, m=args.m))
    if args.reference:
        if factors:
            raise ValueError("--reference cannot be combined with other filter flags")
        return ReferenceParams(mu=args.mu, q=args.q)
    if not factors:
        raise ValueError("select a filter: --near-ideal, --reference or --predictor")
    return factors[0] if len(factors) == 1 else Product(tuple(factors))


def _write_rows(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _plot_path(out) -> Path:
    return Path(out).with_suffix(".png")


def _cmd_freqresp(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    if args.grid < 2:
        raise ValueError(f"--grid must be >= 2, got {args.grid}")
    omega = -math.pi + 2.0 * math.pi * np.arange(args.grid) / args.grid
    values = np.asarray(eval_spec(spec, np.exp(1j * omega)), dtype=complex)
    gain = np.abs(values)
    err1 = np.abs(values - 1.0)
    rows = (
        (_fmt(w), _fmt(v.real), _fmt(v.imag), _fmt(g), _fmt(e))
        for w, v, g, e in zip(omega, values, gain, err1)
    )
    _write_rows(args.out, ("omega", "re", "im", "gain", "err1"), rows)
    if args.plot:
        from . import plotting

        plotting.save_freqresp_plot(omega, gain, err1, _plot_path(args.out), "frequency response")
    return 0


def _cmd_impulse(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    kernel = impulse_from_spec(spec, args.grid, args.support)
    write_kernel_csv(kernel, args.out)
    if args.plot:
        from . import plotting

        plotting.save_impulse_plot(kernel.taps, _plot_path(args.out), "impulse response")
    return 0


def _cmd_smooth(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    series = read_series_csv(args.input)
    kernel = impulse_from_spec(spec, args.grid, args.support)
    out = convolve(kernel, series)
    rows = (
        (str(series.start_index + k), _fmt(x), _fmt(y))
        for k, (x, y) in enumerate(zip(series.values, out.values))
    )
    _write_rows(args.out, ("t", "x", "y"), rows)
    if args.plot:
        from . import plotting

        t = np.arange(len(series)) + series.start_index
        plotting.save_smooth_plot(t, series.values, out.values, _plot_path(args.out), "smoothing")
    return 0


def _cmd_predict(args: argparse.Namespace) -> int:
    predictor = PredictorParams(gamma=args.gamma, r=args.r)
    if args.prefilter:
        spec: TransferSpec = Product(
            (predictor, NearIdealParams(a=args.a, p=args.p, N=args.N, m=args.m))
        )
    else:
        spec = predictor
    series = read_series_csv(args.input)
    kernel = impulse_from_spec(spec, args.grid, args.d + 1)
    y = convolve(kernel, series)
    # yhat(t) is the prediction of x(t) formed at t-1; the first row has no
    # predecessor inside the file and zero pre-history makes that value 0.
    yhat = np.concatenate([[0.0], y.values[:-1]])
    rows = (
        (str(series.start_index + k), _fmt(x), _fmt(p))
        for k, (x, p) in enumerate(zip(series.values, yhat))
    )
    _write_rows(args.out, ("t", "x", "yhat"), rows)
    if args.plot:
        from . import plotting

        t = np.arange(len(series)) + series.start_index
        plotting.save_predict_plot(t, series.values, yhat, _plot_path(args.out), "one-step prediction")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    params = NearIdealParams(a=args.a, p=args.p, N=args.N, m=args.m)
    a_list = sorted(set(VERIFY_A_LIST) | {args.a})
    sequence = [
        NearIdealParams(a=a, p=args.p, N=args.N, m=args.m) for a in VERIFY_A_SEQUENCE
    ]
    reports = [
        check_bounded_gain(args.p, args.N, args.m, a_list, grid=args.grid),
        check_identity_approx(sequence, Omega=math.pi / 2.0, grid=args.grid),
        check_zero_at_pi(params),
        check_small_neighborhood(params, args.epsilon, grid=args.grid),
    ]
    if args.domination:
        band = BandSpec(
            Omega=args.band_omega,
            Omega0=args.band_omega0,
            Omega1=args.band_omega1,
            epsilon=args.epsilon,
            grid_points=args.grid,
        )
        reports.append(check_domination(params, ReferenceParams(mu=args.mu, q=args.q), band))
    payload = {
        "parameters": {"a": args.a, "p": args.p, "N": args.N, "m": args.m},
        "conditions": [rep.to_json_dict() for rep in reports],
        "all_pass": all(rep.passed for rep in reports),
    }
    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.report:
        Path(args.report).write_text(text + "\n")
    else:
        print(text)
    return 0 if payload["all_pass"] else 4


def _cmd_bench(args: argparse.Namespace) -> int:
    config = BenchConfig(
        trials=args.trials,
        n=args.n,
        d=args.d,
        sigma=args.sigma,
        model_kind=args.model,
        predictor=PredictorParams(gamma=args.gamma, r=args.r),
        prefilter=NearIdealParams(a=args.a, p=args.p, N=args.N, m=args.m),
        grid_L=args.grid,
        master_seed=args.seed,
        composite_window=args.window,
        burn_in=args.burn_in,
    )
    try:
        report = run_benchmark(config, workers=args.workers)
    except Exception as exc:  # trial failure: exit contract is 1, not a traceback
        print(f"benchmark error: {exc}", file=sys.stderr)
        return 1
    text = json.dumps(report.to_json_dict(), indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="causalsmooth",
        description="Causal near-ideal smoothing filters, one-step prediction, "
        "condition verification, and a Monte-Carlo forecasting benchmark.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("freqresp", help="sample a frequency response to CSV")
    _add_spec_flags(sp)
    sp.add_argument("--grid", type=int, default=4096, help="number of omega samples over [-pi, pi)")
    sp.add_argument("--out", required=True, help="output CSV path")
    sp.add_argument("--plot", action="store_true", help="also render a PNG next to the CSV")
    sp.set_defaults(handler=_cmd_freqresp)

    sp = sub.add_parser("impulse", help="realize a causal impulse response to CSV")
    _add_spec_flags(sp)
    sp.add_argument("--grid", type=int, default=65536, help="inverse-transform grid size (power of two)")
    sp.add_argument("--support", type=int, default=200, help="number of taps to keep")
    sp.add_argument("--out", required=True, help="output CSV path")
    sp.add_argument("--plot", action="store_true", help="also render a PNG next to the CSV")
    sp.set_defaults(handler=_cmd_impulse)

    sp = sub.add_parser("smooth", help="filter a series read from CSV")
    _add_spec_flags(sp)
    sp.add_argument("--input", required=True, help="input series CSV with header t,x")
    sp.add_argument("--grid", type=int, default=65536, help="inverse-transform grid size (power of two)")
    sp.add_argument("--support", type=int, default=200, help="kernel taps to use")
    sp.add_argument("--out", required=True, help="output CSV path")
    sp.add_argument("--plot", action="store_true", help="also render a PNG next to the CSV")
    sp.set_defaults(handler=_cmd_smooth)

    sp = sub.add_parser("predict", help="one-step-ahead prediction of a series from CSV")
    sp.add_argument("--input", required=True, help="input series CSV with header t,x")
    sp.add_argument("--d", type=int, default=100, help="history window length (kernel keeps lags 0..d)")
    sp.add_argument("--gamma", type=float, default=1.1, help="predictor gain")
    sp.add_argument("--r", type=float, default=1.1, help="predictor pole-shift exponent")
    sp.add_argument("--prefilter", action="store_true", help="smooth with the near-ideal filter first")
    sp.add_argument("--a", type=float, default=0.6, help="prefilter damping knob")
    sp.add_argument("--p", type=float, default=0.7, help="prefilter decay exponent")
    sp.add_argument("--N", type=int, default=100, help="prefilter correction order")
    sp.add_argument("--m", type=int, default=2, help="prefilter zero multiplicity")
    sp.add_argument("--grid", type=int, default=65536, help="inverse-transform grid size (power of two)")
    sp.add_argument("--out", required=True, help="output CSV path")
    sp.add_argument("--plot", action="store_true", help="also render a PNG next to the CSV")
    sp.set_defaults(handler=_cmd_predict)

    sp = sub.add_parser("verify", help="run the filter condition verification suite")
    sp.add_argument("--a", type=float, required=True, help="damping knob of the filter under test")
    sp.add_argument("--p", type=float, required=True, help="decay exponent")
    sp.add_argument("--N", type=int, required=True, help="correction order")
    sp.add_argument("--m", type=int, required=True, help="zero multiplicity")
    sp.add_argument("--grid", type=int, default=4096, help="grid points per check")
    sp.add_argument("--epsilon", type=float, default=0.1, help="gain threshold for the pi-neighborhood check")
    sp.add_argument("--domination", action="store_true", help="also check domination by the reference smoother")
    sp.add_argument("--mu", type=float, default=DEFAULT_DOMINATION_REFERENCE.mu, help="reference damping intensity")
    sp.add_argument("--q", type=float, default=DEFAULT_DOMINATION_REFERENCE.q, help="reference decay exponent")
    sp.add_argument("--band-omega", type=float, default=DEFAULT_BAND.Omega, help="identity band edge")
    sp.add_argument("--band-omega0", type=float, default=DEFAULT_BAND.Omega0, help="domination band start")
    sp.add_argument("--band-omega1", type=float, default=DEFAULT_BAND.Omega1, help="domination band end")
    sp.add_argument("--report", default=None, help="write the JSON report here instead of stdout")
    sp.set_defaults(handler=_cmd_verify)

    sp = sub.add_parser("bench", help="run the Monte-Carlo forecasting benchmark")
    sp.add_argument("--trials", type=int, default=10000)
    sp.add_argument("--n", type=int, default=100, help="scored steps per trial")
    sp.add_argument("--d", type=int, default=100, help="kernel truncation lag")
    sp.add_argument("--sigma", type=float, default=0.3, help="innovation intensity")
    sp.add_argument("--model", choices=("ar1", "ar2"), default="ar2")
    sp.add_argument("--seed", type=int, default=1, help="master seed")
    sp.add_argument("--window", choices=("d", "2d"), default="d", help="composite kernel window reading")
    sp.add_argument("--gamma", type=float, default=1.1)
    sp.add_argument("--r", type=float, default=1.1)
    sp.add_argument("--a", type=float, default=0.6)
    sp.add_argument("--p", type=float, default=0.7)
    sp.add_argument("--N", type=int, default=100)
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--grid", type=int, default=65536)
    sp.add_argument("--burn-in", type=int, default=1000, dest="burn_in")
    sp.add_argument("--workers", type=int, default=1, help="parallel trial workers")
    sp.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
    sp.set_defaults(handler=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except RealizationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (ValueError, TypeError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        print(parser.format_usage(), file=sys.stderr, end="")
        return 2
    except OSError as exc:
        print(f"write error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
