import math
import random
from fractions import Fraction

import mpmath as mp
import pytest

from besselkit import lfunc
from besselkit.spherical import set_precision, unit_param

set_precision(50)


def test_gamma_factorization():
    for j in range(50):
        s = mp.mpf(1) / 4 + j * mp.mpf(7) / 100 + (1j * j) / 17
        lhs = lfunc.gamma_C(s)
        rhs = lfunc.gamma_R(s) * lfunc.gamma_R(s + 1)
        assert abs(lhs - rhs) / abs(lhs) < 1e-25


def test_arch_shifts():
    shifts = sorted(abs(r) for r in lfunc.rs_arch_shifts(32))
    assert shifts == [Fraction(1, 2), Fraction(3, 2), Fraction(29, 2),
                      Fraction(33, 2), Fraction(59, 2), Fraction(61, 2)]
    assert sum(lfunc.rs_arch_shifts(32), Fraction(0)) == 0
    assert sum(lfunc.rs_arch_shifts(20), Fraction(0)) == 0
    assert lfunc.arch_root_number(32) == 1
    assert len(lfunc.gamma_r_shift_multiset(32)) == 12
    v = lfunc.l_infty_rs(mp.mpf(1) / 2 + 1j, 32)
    assert mp.isfinite(abs(v)) and abs(v) > 0


def test_conductor():
    c = lfunc.conductor_and_sign(3, 7)
    assert c["Cf"] == 9529569
    assert c["eps"] == 1
    assert all(v == 1 for v in c["local_signs"].values())
    assert lfunc.conductor_and_sign(1, 1)["Cf"] == 1
    with pytest.raises(ValueError):
        lfunc.conductor_and_sign(14, 7)


def test_analytic_conductor():
    v = lfunc.analytic_conductor(mp.mpf(1) / 2, 32, 3, 7)
    assert v > 0
    # k-scaling exponent 8 from the log-slope at large k
    v1 = lfunc.analytic_conductor(mp.mpf(1) / 2, 2**10, 1, 1)
    v2 = lfunc.analytic_conductor(mp.mpf(1) / 2, 2**11, 1, 1)
    slope = mp.log(v2 / v1) / mp.log(2)
    assert abs(slope - 8) < 0.02
    cb = lfunc.convexity_bound(32, 3, 7)
    assert cb["proxy_fourth_root"] > 0 and cb["shape"] > 0


def test_euler_series_oracle():
    # Delta_{G,p}: inverse factors match directly expanded geometric series
    p = 3
    got = lfunc.euler_local("deltaG", p, "inert", (1, 1), 0)
    série = (sum((mp.mpf(-1) / 3) ** j for j in range(200))
             * sum(mp.mpf(1) / 9 ** j for j in range(100))
             * sum((mp.mpf(-1) / 27) ** j for j in range(80)))
    assert abs(1 / got - 1 / série) < 1e-30
    # deg-12 RS factor at split p: product over 12 linear factors
    z = (unit_param(0.3), mp.mpc(1), 1 / unit_param(0.3))
    w = (unit_param(0.9), 1 / unit_param(0.9))
    v = lfunc.euler_local("rs", 5, "split", (z, w), mp.mpf(1) / 2)
    assert mp.isfinite(abs(v))
    # adjoint GL2 factor has no pole at s = 1 for tempered beta
    v = lfunc.euler_local("adjoint2", 5, "split", (z, w), 1)
    assert mp.isfinite(abs(v))


def test_l_ratio_trend():
    vals = []
    for p in (3, 5, 7, 11):
        v = lfunc.l_ratio_local(p, "inert", (unit_param(0.9), unit_param(0.4)))
        vals.append(float(abs(v - 1) * mp.sqrt(p)))
    # 1 + O(p^{-1/2}): the normalized deviations stay bounded and shrink
    assert max(vals) < 4
    assert vals[-1] <= vals[0]


def test_main_term():
    assert lfunc.psi_of_N(5) == Fraction(21, 25)
    assert lfunc.siegel_of_Nprime(7) == Fraction(49, 48)
    assert lfunc.formal_degree_dlambda(32) == Fraction(54808, 3)
    assert lfunc.formal_degree_dlambda(8) == Fraction(280, 3)
    assert lfunc.formal_degree_dk(32) == 31
    assert (lfunc.w_E_of(1), lfunc.w_E_of(3), lfunc.w_E_of(2)) == (4, 6, 2)
    m = lfunc.main_term(32, 3, 7, 1, 1.0, 1)
    assert m["rational_part"] == 4 * Fraction(54808, 3) / 31 * Fraction(9, 49) * \
        Fraction(7, 9) * Fraction(49, 48)


def test_hecke_lambda():
    a = unit_param(0.73)
    p = 7
    lam = lambda r: lfunc.hecke_lambda_pi(a, p, r)
    assert abs(lam(0) - 1) < 1e-40
    assert abs(lam(1) ** 2 - (lam(2) + lam(1) / p + 1)) < 1e-35
    assert abs(lam(2) ** 2 - (lam(4) + lam(3) / p + lam(2) + lam(1) / p + 1)) < 1e-35
    # generating series
    X = mp.mpf(1) / 9
    ser = (1 + X / p) / ((1 - a * X) * (1 - X / a))
    assert abs(ser - sum(lam(r) * X**r for r in range(80))) < 1e-30
    # Deligne-type bound: r + 1 + r/p (so r+2 whenever r <= p)
    rnd = random.Random(0)
    for _ in range(1000):
        b = unit_param(rnd.uniform(0, 2 * math.pi))
        for r in range(11):
            v = abs(lfunc.hecke_lambda_pi(b, 11, r))
            assert v <= r + 2 + 1e-25
            assert v <= r + 1 + r / 11 + 1e-25


def test_tilde_and_dirichlet():
    a = unit_param(1.21)
    for r in range(9):
        d = lfunc.dirichlet_tilde_pi(a, 3, r)
        c = lfunc.chebyshev_C(r, (a + 1 / a).real)
        assert abs(d - c) < 1e-30
        assert abs(lfunc.hecke_lambda_pi_tilde(a, 3, r) - c) < 1e-30
    # primed variants
    for r in range(7):
        assert abs(lfunc.hecke_lambda_piprime(1.3, 5, r)
                   - lfunc.chebyshev_C(r, 1.3)) < 1e-30
        assert abs(lfunc.lambda_tilde_piprime(1.3, 5, r) * 5**r
                   - lfunc.chebyshev_C(r, 1.3)) < 1e-30
    assert abs(lfunc.hecke_lambda("pi", a, 3, 2) - lfunc.hecke_lambda_pi(a, 3, 2)) < 1e-40


def test_chebyshev():
    for r in range(11):
        for th in (mp.mpf("0.3"), mp.mpf("1.0"), mp.mpf("2.2")):
            lhs = lfunc.chebyshev_C(r, 2 * mp.cos(th)) * mp.sin(th)
            assert abs(lhs - mp.sin((r + 1) * th)) < 1e-12
    assert lfunc.chebyshev_C(2, 1.0) == 0  # C_2(x) = x^2 - 1
    assert lfunc.chebyshev_C(2, mp.mpf(1)) == 0


def test_weighted_density():
    for p in (3, 5):
        for lamv in (-1.9, 0.0, 1.2):
            for x in (-1.7, 0.3, 1.99):
                s = lfunc.weighted_density(x, lamv, p)
                c = lfunc.weighted_density_closed(x, lamv, p)
                assert abs(s - c) < 1e-22
                assert (1 - 1 / mp.mpf(p)) ** 6 <= c <= (1 + 1 / mp.mpf(p)) ** 6


def test_moment_identity():
    m = lfunc.sato_tate_moment(5, 1.0, 2)
    assert abs(m["target"]) < 1e-30  # C_2(1) = 0
    assert m["error"] < 1e-10
    m = lfunc.sato_tate_moment(3, float(mp.sqrt(2)), 3)
    assert m["error"] < 1e-10
    m = lfunc.sato_tate_moment(3, -2.0, 1)
    assert m["error"] < 1e-10
    # r = 0, unweighted: total mass 1
    f = lambda x: lfunc.st_density(x)
    assert abs(mp.quad(f, [-2, 2]) - 1) < 1e-15


def test_amplifier():
    assert lfunc.amplifier_select(0.6, 0.6**2 - 0.6 / 5 - 1, 5) == 1
    assert lfunc.amplifier_select(0.0, -1.0, 5) == 2
    assert lfunc.amplifier_select(2 + 1 / 5, (2 + 1 / 5) ** 2 - (2 + 1 / 5) / 5 - 1, 5) == 1
    with pytest.raises(ValueError):
        lfunc.amplifier_select(0.6, 0.6, 5)
