import json
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from causalsmooth.arsim import TrialRng, sample_stationary_ar2
from causalsmooth.bench import (
    BenchConfig,
    DegenerateDenominator,
    build_trial_kernels,
    error_ratio,
    run_benchmark,
    run_trial,
)
from causalsmooth.stream import Series
from causalsmooth.xfer import NearIdealParams, PredictorParams


def brute_conv(taps, xs):
    out = np.zeros(len(xs))
    for t in range(len(xs)):
        acc = 0.0
        for j in range(len(taps)):
            if 0 <= t - j < len(xs):
                acc += taps[j] * xs[t - j]
        out[t] = acc
    return out


class TestErrorRatio:
    def test_linear_predictor_scores_exactly_one(self):
        rng = np.random.default_rng(0)
        xs = rng.normal(size=12)
        x = Series(xs, start_index=-2)
        b1, b2 = 0.7, -0.3
        # y(t) = b1*x(t) + b2*x(t-1) so that y(t-1) equals the linear predictor
        ys = b1 * xs[1:] + b2 * xs[:-1]
        y = Series(ys, start_index=-1)
        assert error_ratio(y, x, b1, b2, n=8) == 1.0

    def test_perfect_prediction_scores_zero(self):
        rng = np.random.default_rng(1)
        xs = rng.normal(size=12)
        x = Series(xs, start_index=-2)
        # y(s) = x(s+1), so y(t-1) predicts x(t) exactly
        y = Series(xs[3:], start_index=0)
        assert error_ratio(y, x, 0.5, 0.0, n=8) == 0.0

    def test_hand_sized_instance(self):
        x = Series(np.array([2.0, -1.0, 0.5, 3.0, -2.0]), start_index=-1)
        y = Series(np.array([0.4, 1.1, -0.7]), start_index=0)
        b1, b2, n = 0.3, -0.2, 3
        num = math.sqrt((0.4 - 0.5) ** 2 + (1.1 - 3.0) ** 2 + (-0.7 + 2.0) ** 2)
        den = math.sqrt(
            (0.3 * -1.0 - 0.2 * 2.0 - 0.5) ** 2
            + (0.3 * 0.5 - 0.2 * -1.0 - 3.0) ** 2
            + (0.3 * 3.0 - 0.2 * 0.5 + 2.0) ** 2
        )
        assert_allclose(error_ratio(y, x, b1, b2, n), num / den, rtol=1e-15)

    def test_degenerate_denominator(self):
        x = Series(np.zeros(6), start_index=-2)
        y = Series(np.zeros(4), start_index=0)
        with pytest.raises(DegenerateDenominator):
            error_ratio(y, x, 0.0, 0.0, n=3)

    def test_insufficient_coverage_rejected(self):
        x = Series(np.ones(4), start_index=0)  # lacks index -1
        y = Series(np.ones(4), start_index=0)
        with pytest.raises(ValueError):
            error_ratio(y, x, 0.5, 0.0, n=3)


class TestConfig:
    def test_defaults_echo(self):
        cfg = BenchConfig()
        echo = cfg.to_json_dict()
        assert echo["prefilter"] == {"kind": "near_ideal", "a": 0.6, "p": 0.7, "N": 100, "m": 2}
        assert echo["predictor"] == {"kind": "predictor", "gamma": 1.1, "r": 1.1}
        assert echo["composite_window"] == "d"

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(trials=0),
            dict(sigma=0.0),
            dict(model_kind="ar3"),
            dict(composite_window="dd"),
            dict(burn_in=-1),
        ],
    )
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            BenchConfig(**kwargs)


class TestKernels:
    def test_d_window_supports(self):
        cfg = BenchConfig(d=50, grid_L=4096, prefilter=NearIdealParams(0.6, 0.7, 20, 2))
        kernels = build_trial_kernels(cfg)
        assert kernels["k_d"].support == 51
        assert kernels["kh_d"].support == 51

    def test_two_d_window_supports(self):
        cfg = BenchConfig(
            d=50, grid_L=4096, composite_window="2d",
            prefilter=NearIdealParams(0.6, 0.7, 20, 2),
        )
        kernels = build_trial_kernels(cfg)
        assert kernels["kh_d"].support == 101
        # separate truncation then convolution matches numpy reference
        k = kernels["k_d"].taps
        h_cfg = BenchConfig(d=50, grid_L=4096, prefilter=NearIdealParams(0.6, 0.7, 20, 2))
        from causalsmooth.realization import impulse_from_spec

        h = impulse_from_spec(h_cfg.prefilter, 4096, 51).taps
        assert_allclose(kernels["kh_d"].taps, np.convolve(k, h), rtol=1e-15)

    def test_predictor_kernel_leading_taps(self):
        # k(0) = gamma and k(1) = -(gamma*(1-gamma^-r) + gamma^2/2) from the
        # series of the transfer at infinity
        cfg = BenchConfig(grid_L=4096, d=30)
        k = build_trial_kernels(cfg)["k_d"]
        gamma, r = 1.1, 1.1
        shift = 1.0 - math.exp(-r * math.log(gamma))
        assert_allclose(k.taps[0], gamma, rtol=1e-12)
        assert_allclose(k.taps[1], -(gamma * shift + gamma * gamma / 2.0), rtol=1e-10)


class TestTrials:
    def test_deterministic(self):
        cfg = BenchConfig(trials=1, n=10, d=10, grid_L=1024)
        kernels = build_trial_kernels(cfg)
        assert run_trial(cfg, 0, kernels) == run_trial(cfg, 0, kernels)

    def test_ar1_has_zero_beta2(self):
        cfg = BenchConfig(trials=1, n=10, d=10, grid_L=1024, model_kind="ar1")
        kernels = build_trial_kernels(cfg)
        for index in range(5):
            assert run_trial(cfg, index, kernels).beta2 == 0.0

    def test_end_to_end_hand_trace(self):
        cfg = BenchConfig(trials=1, n=3, d=2, sigma=0.3, grid_L=1024, master_seed=123, burn_in=5)
        kernels = build_trial_kernels(cfg)
        res = run_trial(cfg, 0, kernels)

        rng = TrialRng(123, 0)
        b1, b2, resamples = sample_stationary_ar2(rng)
        assert res.beta1 == b1 and res.beta2 == b2 and res.resamples == resamples
        hist = cfg.d + 2
        length = cfg.n + hist + 1
        path = rng.standard_normal(length)
        burn = rng.standard_normal(cfg.burn_in)
        eta = np.concatenate([burn[::-1], path[::-1]])
        xs, x1, x2 = [], 0.0, 0.0
        for e in eta:
            x = cfg.sigma * e + (b1 * x1 + b2 * x2)
            xs.append(x)
            x1, x2 = x, x1
        xs = np.asarray(xs[cfg.burn_in:])  # times -4..3

        def ratio(y, c1, c2):
            # t = 1..3; series index of time t is t + hist
            num = sum((y[t - 1 + hist] - xs[t + hist]) ** 2 for t in range(1, 4))
            den = sum(
                (c1 * xs[t - 1 + hist] + c2 * xs[t - 2 + hist] - xs[t + hist]) ** 2
                for t in range(1, 4)
            )
            return math.sqrt(num) / math.sqrt(den)

        y_kk = brute_conv(kernels["k_d"].taps, xs)
        y_kh = brute_conv(kernels["kh_d"].taps, xs)
        assert_allclose(res.e_KK_oracle, ratio(y_kk, b1, b2), rtol=1e-12)
        assert_allclose(res.e_KH_oracle, ratio(y_kh, b1, b2), rtol=1e-12)
        assert_allclose(res.e_KK_mean, ratio(y_kk, 0.5, 0.0), rtol=1e-12)
        assert_allclose(res.e_KH_mean, ratio(y_kh, 0.5, 0.0), rtol=1e-12)


class TestBenchmark:
    def test_single_trial_report(self):
        cfg = BenchConfig(trials=1, n=10, d=10, grid_L=1024, master_seed=9)
        report = run_benchmark(cfg)
        result = run_trial(cfg, 0, build_trial_kernels(cfg))
        for name in ("e_KK_oracle", "e_KH_oracle", "e_KK_mean", "e_KH_mean"):
            assert report.metrics[name]["mean"] == getattr(result, name)
            assert report.metrics[name]["se"] == 0.0
            assert report.metrics[name]["count"] == 1

    def test_parallel_equals_serial(self):
        cfg = BenchConfig(trials=6, n=10, d=10, grid_L=1024, master_seed=3)
        serial = run_benchmark(cfg, workers=1).to_json_dict()
        parallel = run_benchmark(cfg, workers=2).to_json_dict()
        serial.pop("seconds")
        parallel.pop("seconds")
        assert serial == parallel

    def test_report_replays_bit_identically(self):
        cfg = BenchConfig(trials=4, n=10, d=10, grid_L=1024, master_seed=8)
        a = run_benchmark(cfg).to_json_dict()
        b = run_benchmark(cfg).to_json_dict()
        a.pop("seconds")
        b.pop("seconds")
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)

    def test_json_schema(self):
        cfg = BenchConfig(trials=2, n=10, d=10, grid_L=1024)
        payload = run_benchmark(cfg).to_json_dict()
        assert set(payload) == {"config", "metrics", "trials", "seed", "seconds", "resamples_total"}
        assert set(payload["metrics"]) == {"e_KK_oracle", "e_KH_oracle", "e_KK_mean", "e_KH_mean"}
        for entry in payload["metrics"].values():
            assert set(entry) == {"mean", "se", "count"}

    def test_filtering_improves_and_respects_floor(self):
        report = run_benchmark(BenchConfig(trials=400, master_seed=5))
        kk = report.metrics["e_KK_oracle"]
        kh = report.metrics["e_KH_oracle"]
        assert kh["mean"] < kk["mean"]
        assert kk["mean"] >= 1.0 - 3.0 * kk["se"]
        assert kh["mean"] >= 1.0 - 3.0 * kh["se"]

    def test_burn_in_doubling_is_negligible(self):
        # path innovations are positioned independently of the burn-in length,
        # so doubling it only moves the means through the decayed carry-over
        base = run_benchmark(BenchConfig(trials=400, master_seed=3, burn_in=1000))
        longer = run_benchmark(BenchConfig(trials=400, master_seed=3, burn_in=2000))
        for name in base.metrics:
            delta = abs(base.metrics[name]["mean"] - longer.metrics[name]["mean"])
            assert delta < 0.005
