import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from causalsmooth.conditions import (
    DEFAULT_BAND,
    DEFAULT_DOMINATION_REFERENCE,
    BandSpec,
    check_bounded_gain,
    check_domination,
    check_identity_approx,
    check_small_neighborhood,
    check_zero_at_pi,
    richardson_derivative,
)
from causalsmooth.realization import impulse_from_spec
from causalsmooth.stream import Series, convolve
from causalsmooth.xfer import NearIdealParams, ReferenceParams, eval_near_ideal

P99 = NearIdealParams(a=0.99, p=0.6, N=50, m=2)
P80 = NearIdealParams(a=0.8, p=0.6, N=10, m=1)

A_GRID = (0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 0.99)


def seq(p, N, m, a_values=(0.9, 0.99, 0.999)):
    return [NearIdealParams(a=a, p=p, N=N, m=m) for a in a_values]


class TestBoundedGain:
    def test_passes_across_a_grid(self):
        report = check_bounded_gain(0.6, 50, 2, A_GRID)
        assert report.passed
        assert report.witness["max_gain"] < report.tolerances["bound"]

    def test_empty_list_is_vacuous(self):
        report = check_bounded_gain(0.6, 50, 2, [])
        assert report.passed
        assert report.witness["max_gain"] == 0.0

    def test_grid_refinement_stability(self):
        coarse = check_bounded_gain(0.6, 50, 2, A_GRID, grid=4096)
        fine = check_bounded_gain(0.6, 50, 2, A_GRID, grid=8192)
        rel = abs(fine.witness["max_gain"] - coarse.witness["max_gain"]) / fine.witness["max_gain"]
        assert rel < 0.01


class TestIdentityApprox:
    @pytest.mark.parametrize("p,N,m", [(0.6, 50, 2), (0.6, 10, 1)])
    def test_error_decreases_toward_identity(self, p, N, m):
        report = check_identity_approx(seq(p, N, m), Omega=math.pi / 2)
        assert report.passed
        errs = report.witness["sup_err"]
        assert errs[-1] < errs[0]
        assert errs[-1] < 0.05

    def test_degenerate_band_is_dc_error(self):
        report = check_identity_approx(seq(0.6, 50, 2), Omega=0.0)
        expected = abs(eval_near_ideal(NearIdealParams(0.999, 0.6, 50, 2), 1.0 + 0j) - 1.0)
        assert_allclose(report.witness["sup_err"][-1], expected, rtol=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            check_identity_approx([P99], Omega=1.0)
        with pytest.raises(ValueError):
            check_identity_approx(
                [NearIdealParams(0.9, 0.6, 50, 2), NearIdealParams(0.99, 0.7, 50, 2)],
                Omega=1.0,
            )
        with pytest.raises(ValueError):
            check_identity_approx(
                [NearIdealParams(0.99, 0.6, 50, 2), NearIdealParams(0.9, 0.6, 50, 2)],
                Omega=1.0,
            )

    def test_filtered_bandlimited_sequence_converges(self):
        # sequence-domain spot check: filtering a low-frequency input with
        # increasing a drives the sup error to the input down
        t = np.arange(2048)
        xs = np.cos(0.3 * t) + 0.5 * np.sin(1.1 * t + 0.2)
        x = Series(xs)
        errors = []
        for a in (0.8, 0.9, 0.99):
            kernel = impulse_from_spec(NearIdealParams(a, 0.6, 50, 2), 16384, 4096)
            y = convolve(kernel, x)
            errors.append(np.max(np.abs(y.values[1024:] - xs[1024:])))
        assert errors[0] > errors[1] > errors[2]


class TestZeroAtPi:
    @pytest.mark.parametrize("params", [P99, P80])
    def test_zero_and_flat_derivatives(self, params):
        report = check_zero_at_pi(params)
        assert report.passed
        assert report.witness["value_at_pi"] <= 1e-12 * report.witness["max_gain"]
        for k in range(1, params.m + 1):
            entry = report.witness["derivatives"][str(k)]
            assert entry["pass"]
            assert entry["estimate"] <= entry["tolerance"]

    def test_higher_orders_reported_not_asserted(self):
        report = check_zero_at_pi(P99)
        assert report.witness["derivatives"]["3"]["asserted"] is False
        assert "pass" not in report.witness["derivatives"]["3"]

    @pytest.mark.parametrize("params", [P99, P80])
    def test_without_correction_term_the_zero_is_gone(self, params):
        report = check_zero_at_pi(params, omit_correction=True)
        assert not report.passed
        assert report.witness["value_at_pi"] > 1e-6
        assert not report.witness["derivatives"]["1"]["pass"]

    def test_richardson_estimates_converged(self):
        report = check_zero_at_pi(P99)
        for k in ("1", "2"):
            entry = report.witness["derivatives"][k]
            # once under tolerance, a further halving moves the estimate by
            # less than 10% of the tolerance: no stencil artifact
            assert entry["last_refinement_step"] <= 0.1 * max(entry["tolerance"], entry["estimate"])

    def test_richardson_on_known_function(self):
        est, diag = richardson_derivative(lambda x: math.sin(2.0 * x), 0.3, 1)
        assert_allclose(est, 2.0 * math.cos(0.6), rtol=1e-10)
        est2, _ = richardson_derivative(lambda x: math.sin(2.0 * x), 0.3, 2)
        assert_allclose(est2, -4.0 * math.sin(0.6), rtol=1e-8)
        with pytest.raises(ValueError):
            richardson_derivative(math.sin, 0.0, 5)


class TestSmallNeighborhood:
    @pytest.mark.parametrize("params", [P99, P80])
    def test_positive_width_exists(self, params):
        report = check_small_neighborhood(params, epsilon=0.1)
        assert report.passed
        assert report.witness["delta"] > 1e-4
        assert report.witness["sup_within_delta"] < 0.1

    def test_threshold_above_peak_gain_covers_circle(self):
        report = check_small_neighborhood(P99, epsilon=10.0)
        assert report.witness["delta"] == math.pi

    def test_width_shrinks_as_a_grows(self):
        wide = check_small_neighborhood(NearIdealParams(0.9, 0.6, 50, 2), 0.1)
        narrow = check_small_neighborhood(NearIdealParams(0.99, 0.6, 50, 2), 0.1)
        assert narrow.witness["delta"] < wide.witness["delta"]

    def test_epsilon_validation(self):
        with pytest.raises(ValueError):
            check_small_neighborhood(P99, epsilon=0.0)


class TestDomination:
    def test_default_band_passes(self):
        report = check_domination(P99, DEFAULT_DOMINATION_REFERENCE, DEFAULT_BAND)
        assert report.passed
        assert report.witness["identity_margin"] > 0.0
        assert report.witness["domination_margin"] > 0.0

    def test_wide_band_fails_with_margins_recorded(self):
        # near the positive-real-part arc the filter gain exceeds 1, and no
        # sub-unit reference gain can dominate it: margins point at the spot
        band = BandSpec(Omega=2.0, Omega0=2.6, Omega1=3.0, epsilon=0.1)
        report = check_domination(P99, ReferenceParams(mu=0.02, q=1.01), band)
        assert not report.passed
        assert report.witness["identity_margin"] < 0.0
        assert report.witness["domination_margin"] < 0.0

    def test_smaller_mu_improves_domination_margin(self):
        tighter = check_domination(P99, ReferenceParams(mu=0.002, q=1.01), DEFAULT_BAND)
        looser = check_domination(P99, DEFAULT_DOMINATION_REFERENCE, DEFAULT_BAND)
        assert tighter.witness["domination_margin"] > looser.witness["domination_margin"]

    def test_zero_width_band_is_vacuous_but_identity_still_checked(self):
        band = BandSpec(Omega=1.0, Omega0=3.1, Omega1=3.1, epsilon=0.1)
        report = check_domination(P99, DEFAULT_DOMINATION_REFERENCE, band)
        assert report.witness["domination_band_empty"]
        assert report.passed == (report.witness["identity_margin"] >= 0.0)

    def test_band_validation(self):
        with pytest.raises(ValueError):
            BandSpec(Omega=2.0, Omega0=1.0, Omega1=3.0, epsilon=0.1)
        with pytest.raises(ValueError):
            BandSpec(Omega=1.0, Omega0=2.0, Omega1=3.2, epsilon=0.1)
        with pytest.raises(ValueError):
            BandSpec(Omega=1.0, Omega0=2.0, Omega1=3.0, epsilon=-0.1)


class TestReports:
    def test_bit_reproducible(self):
        first = check_zero_at_pi(P99).to_json_dict()
        second = check_zero_at_pi(P99).to_json_dict()
        assert first == second

    def test_json_schema(self):
        report = check_bounded_gain(0.6, 50, 2, [0.9]).to_json_dict()
        assert set(report) == {"condition_id", "pass", "witness", "tolerances", "parameters"}
        assert isinstance(report["pass"], bool)
