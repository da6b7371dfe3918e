import cmath
import math

import numpy as np
import pytest

from inoqes import elliptic as el
from inoqes.errors import (
    DivisionByNearZeroError,
    PoleProximityError,
    SeriesNotConvergedError,
)

TAUS = [1.0j, 1.3j, 0.3 + 1.1j]


def params(tau=1.3j, **kw):
    return el.EllipticParams.from_tau(tau, **kw)


def random_cell_points(tau, n, seed=0):
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < n:
        x = complex(rng.uniform(-0.45, 0.45), rng.uniform(-0.45, 0.45) * tau.imag)
        if min(abs(x), abs(x - 0.5), abs(x + 0.5), abs(x - tau / 2), abs(x + tau / 2)) > 0.07:
            pts.append(x)
    return pts


def test_half_period_values_sum_to_zero():
    for tau in TAUS:
        P = params(tau)
        assert abs(sum(P.e)) <= P.tol
        assert abs(P.g2 - (-4) * (P.e[0] * P.e[1] + P.e[1] * P.e[2] + P.e[2] * P.e[0])) <= P.tol
        assert abs(P.g3 - 4 * P.e[0] * P.e[1] * P.e[2]) <= P.tol


def test_wp_even_and_periodic():
    P = params()
    for x in random_cell_points(P.tau, 6, seed=1):
        w = el.weierstrass_p(x, P)
        assert abs(el.weierstrass_p(-x, P) - w) < 1e-12
        assert abs(el.weierstrass_p(x + 1, P) - w) < 1e-12
        assert abs(el.weierstrass_p(x + P.tau, P) - w) < 1e-12


def test_wp_qseries_vs_lattice_oracle():
    # frozen spot value plus sweep; corrected lattice sum is the oracle
    P = params(1.3j)
    x = 0.23 + 0.11j
    assert abs(el.weierstrass_p(x, P) - el.wp_lattice_sum(x, P.tau)) < 1e-10
    for tau in TAUS:
        P = params(tau)
        for x in random_cell_points(P.tau, 3, seed=2):
            assert abs(el.weierstrass_p(x, P) - el.wp_lattice_sum(x, tau)) < 1e-10


def test_wp_prime_vanishes_at_half_periods():
    for tau in TAUS:
        P = params(tau)
        for i in (1, 2, 3):
            assert abs(el.weierstrass_p_prime(P.half_periods[i], P)) < 1e-11
            assert abs(el.weierstrass_p(P.half_periods[i], P) - P.e[i - 1]) < 1e-11


def test_wp_differential_equation():
    for tau in TAUS:
        P = params(tau)
        for x in random_cell_points(P.tau, 5, seed=3):
            w = el.weierstrass_p(x, P)
            wp = el.weierstrass_p_prime(x, P)
            assert abs(wp**2 - (4 * w**3 - P.g2 * w - P.g3)) < 1e-10


def test_wp_second_log_derivative_identity():
    for tau in TAUS:
        P = params(tau)
        for x in random_cell_points(P.tau, 5, seed=4):
            w = el.weierstrass_p(x, P)
            wp = el.weierstrass_p_prime(x, P)
            ws = el.weierstrass_p_second(x, P)
            rhs = 0.5 * sum(1.0 / (w - e) for e in P.e)
            assert abs(ws / wp**2 - rhs) < 1e-10


def test_shift_identities_residuals():
    for tau in TAUS:
        P = params(tau)
        for x in random_cell_points(P.tau, 4, seed=5):
            res = el.wp_shift_identities_check(x, P)
            assert max(res.values()) < 1e-10, (tau, x, res)


def test_addition_formula_degenerate_rejected():
    P = params()
    with pytest.raises(PoleProximityError):
        el.wp_shift_identities_check(0.2 + 0.1j, P, y=0.2 + 0.1j)


def test_pole_proximity():
    P = params()
    with pytest.raises(PoleProximityError):
        el.weierstrass_p(1e-8, P)
    with pytest.raises(PoleProximityError):
        el.weierstrass_p(1 + P.tau + 1e-8j, P)


def test_series_not_converged_reported():
    import dataclasses

    P = dataclasses.replace(el.EllipticParams.from_tau(0.3j), series_terms=6)
    with pytest.raises(SeriesNotConvergedError):
        el.weierstrass_p(0.25 + 0.14j, P)


def test_series_self_consistency():
    for tau in TAUS:
        P1 = params(tau)
        P2 = params(tau, series_terms=P1.series_terms + 16)
        for x in random_cell_points(tau, 3, seed=6):
            assert abs(el.weierstrass_p(x, P1) - el.weierstrass_p(x, P2)) < P1.tol
            assert abs(el.theta(2, x, P1) - el.theta(2, x, P2)) < P1.tol


def test_theta1_odd_zero():
    P = params()
    assert el.theta(1, 0, P) == 0
    for x in random_cell_points(P.tau, 3, seed=7):
        assert abs(el.theta(1, -x, P) + el.theta(1, x, P)) < 1e-12
        for j in (0, 2, 3):
            assert abs(el.theta(j, -x, P) - el.theta(j, x, P)) < 1e-12


def test_theta_one_periodicity_signs():
    P = params()
    for x in random_cell_points(P.tau, 4, seed=8):
        assert abs(el.theta(1, x + 1, P) + el.theta(1, x, P)) < 1e-12
        assert abs(el.theta(2, x + 1, P) + el.theta(2, x, P)) < 1e-12
        assert abs(el.theta(3, x + 1, P) - el.theta(3, x, P)) < 1e-12
        assert abs(el.theta(0, x + 1, P) - el.theta(0, x, P)) < 1e-12


def test_theta_quasiperiod_factor():
    for tau in TAUS:
        P = params(tau)
        for x in random_cell_points(P.tau, 3, seed=9):
            f = cmath.exp(-1j * math.pi * (2 * x + tau))
            assert abs(el.theta_quasiperiod_factor(3, x, P) - f) < 1e-10
            assert abs(el.theta_quasiperiod_factor(2, x, P) - f) < 1e-10
            assert abs(el.theta_quasiperiod_factor(1, x, P) + f) < 1e-10
            assert abs(el.theta_quasiperiod_factor(0, x, P) + f) < 1e-10


def test_theta_duplication_and_derivative_identities():
    for tau in TAUS:
        P = params(tau)
        c = el.theta(2, 0, P) * el.theta(3, 0, P) * el.theta(0, 0, P)
        assert abs(el.theta_deriv(1, 0, P) - math.pi * c) < 1e-10
        for x in random_cell_points(P.tau, 3, seed=10):
            lhs = el.theta(1, 2 * x, P) * c
            rhs = 2 * el.theta(1, x, P) * el.theta(2, x, P) * el.theta(3, x, P) * el.theta(0, x, P)
            assert abs(lhs - rhs) < 1e-10


def test_theta_quasiperiod_division_guard():
    P = params()
    # theta_1 vanishes at 0
    with pytest.raises(DivisionByNearZeroError):
        el.theta_quasiperiod_factor(1, 0, P)


def test_wp_is_minus_second_log_derivative_of_theta1_up_to_constant():
    # Richardson-extrapolated central differences of log theta_1
    for tau in (1.0j, 1.3j):
        P = params(tau)
        xs = np.linspace(0.13, 0.44, 10)
        consts = []
        for x in xs:
            h = 1e-3

            def d2(hh, x=x):
                f = lambda u: cmath.log(el.theta(1, u, P))
                return (f(x + hh) - 2 * f(x) + f(x - hh)) / hh**2

            val = (4 * d2(h / 2) - d2(h)) / 3
            consts.append(-val - el.weierstrass_p(x, P))
        consts = np.asarray(consts)
        assert np.max(np.abs(consts - consts.mean())) < 1e-6


def test_theta_deriv_second_order_consistency():
    P = params()
    x = 0.21
    h = 1e-4
    for j in (0, 1, 2, 3):
        fd = (el.theta(j, x + h, P) - 2 * el.theta(j, x, P) + el.theta(j, x - h, P)) / h**2
        assert abs(el.theta_deriv(j, x, P, order=2) - fd) < 1e-5
        fd1 = (el.theta(j, x + h, P) - el.theta(j, x - h, P)) / (2 * h)
        assert abs(el.theta_deriv(j, x, P, order=1) - fd1) < 1e-6
