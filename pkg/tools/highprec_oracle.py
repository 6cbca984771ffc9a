#!/usr/bin/env python3
"""Regenerate the high-precision reference constants frozen in tests/oracle_values.py.

Evaluates the closed forms with mpmath at 40 significant digits, independently
of the double-precision code under src/.  Run it and paste the printed block
into tests/oracle_values.py whenever a frozen constant needs to change.

Inputs are passed through Python floats on purpose: the constants must describe
the exact binary parameter values the test suite feeds to the library.
"""

import mpmath as mp

mp.mp.dps = 40


def xi(a, p):
    return mp.exp(-(1 - mp.mpf(a)) ** (mp.mpf(p) - 1))


def gamma_coef(a, p):
    return abs(1 - mp.mpf(a)) ** (mp.mpf(p) - 2) * xi(a, p)


def psi(a, p, z):
    return (1 - mp.mpf(a)) ** mp.mpf(p) / (mp.mpc(z) + mp.mpf(a))


def g_term(a, p, N, z):
    osc = (-1) ** N * mp.mpc(z) ** (-N) - 1
    return -xi(a, p) + gamma_coef(a, p) / N * osc


def near_ideal(a, p, N, m, z):
    return (mp.exp(psi(a, p, z)) + g_term(a, p, N, z)) ** m


def reference(mu, q, omega):
    gap = abs(1 + mp.exp(1j * mp.mpf(omega)))
    return mp.exp(-mp.mpf(mu) / gap ** mp.mpf(q))


def predictor(gamma, r, z):
    gamma = mp.mpf(gamma)
    shift = 1 - mp.exp(-mp.mpf(r) * mp.log(gamma))
    return mp.mpc(z) * (1 - mp.exp(-gamma / (mp.mpc(z) + shift)))


def main():
    base = near_ideal(0.6, 0.7, 100, 1, 1.0)
    rows = [
        ("XI_A06_P07", xi(0.6, 0.7)),
        ("XI_A099_P06", xi(0.99, 0.6)),
        ("GAMMA_A06_P07", gamma_coef(0.6, 0.7)),
        ("GAMMA_A099_P06", gamma_coef(0.99, 0.6)),
        ("PSI_A06_P07_Z1", psi(0.6, 0.7, 1.0).real),
        ("NEAR_IDEAL_BASE_A06_P07_N100_Z1", base.real),
        ("NEAR_IDEAL_A06_P07_N100_M2_Z1", near_ideal(0.6, 0.7, 100, 2, 1.0).real),
        ("REFERENCE_MU002_Q101_W0", reference(0.02, 1.01, 0.0)),
        ("PREDICTOR_G11_R11_Z1", predictor(1.1, 1.1, 1.0).real),
        ("PREDICTOR_G11_R11_ZM1", predictor(1.1, 1.1, -1.0).real),
    ]
    for name, value in rows:
        print(f"{name} = {mp.nstr(value, 32)}")


if __name__ == "__main__":
    main()
