from fractions import Fraction

import mpmath as mp
import pytest

from besselkit import orbital
from besselkit.fieldarith import field
from besselkit.spherical import set_precision, unit_param

set_precision(50)
CTX = field(1)
A = unit_param(0.61)


def test_support_grid():
    for case in ("unram-split", "unram-inert", "N-coprime", "N-divides",
                 "ramified", "Nprime"):
        for p in (3, 5, 7):
            for nu in (-3, -2, -1):
                assert orbital.unip_orbital_p(case, p, nu, A).kind == "zero"
    assert orbital.unip_orbital_p("N-divides", 3, 0, A).kind == "zero"
    for nu in (0, 1, 2):
        assert orbital.unip_orbital_p("ramified", 3, nu, A).kind == "zero"
    assert orbital.unip_orbital_p("ramified", 3, 3, A).kind == "exact"


def test_exact_values():
    assert orbital.unip_orbital_p("unram-split", 5, 0, A).value == 1
    assert orbital.unip_orbital_p("unram-inert", 3, 0, A).value == 1
    for p in (3, 5, 7):
        c = orbital.unip_orbital_p("N-coprime", p, 0, A)
        assert c.value == Fraction(p * p - p + 1, p + 1)
    assert orbital.unip_orbital_p("N-coprime", 3, 0, A).value == Fraction(7, 4)
    c = orbital.unip_orbital_p("Nprime", 7, 0, A)
    assert c.value == Fraction(5, 48 * 48)
    assert orbital.unip_orbital_p("Nprime", 7, 2, A).kind == "bound"
    # positive-valuation values are finite positive reals
    v = orbital.unip_orbital_p("unram-inert", 3, 4, A).value
    assert v.real > 0 and abs(v.imag) < 1e-30


def test_regular_support():
    assert orbital.regular_support_test(CTX.elem(2), 3, 1, 1) is True
    assert orbital.regular_support_test(CTX.elem(2), 5, 1, 1) is False
    assert orbital.regular_support_test(CTX.elem(Fraction(1, 2)), 3, 1, 1) is False
    assert orbital.regular_support_test(CTX.elem(Fraction(1, 2)), 1, 2, 1) is True
    with pytest.raises(ValueError):
        orbital.regular_support_test(CTX.elem(0, 1), 3, 1, 1)


def test_peter_x():
    assert orbital.peter_x(CTX.elem(2)) == 4
    assert orbital.peter_x(CTX.elem(Fraction(1, 2))) == Fraction(5, 4)
    with pytest.raises(ValueError):
        orbital.peter_x(CTX.elem(0, 1))


def test_xi_set():
    xs = orbital.xi_set_enumerate(CTX, 3, 1, 1, 10)
    strs = {(str(x.re), str(x.im)) for x in xs}
    assert ("2", "0") in strs and ("0", "2") in strs
    assert all(x.norm() != 1 for x in xs)
    assert len(xs) == orbital.xi_set_scan(CTX, 3, 1, 1, 10)
    assert orbital.xi_set_enumerate(CTX, 3, 1, 1, Fraction(1, 100)) == []
    # with a level: x = z/(ell N') denominators appear
    xs2 = orbital.xi_set_enumerate(CTX, 3, 2, 1, 4)
    assert len(xs2) == orbital.xi_set_scan(CTX, 3, 2, 1, 4)
    assert any(x.re.denominator == 2 or x.im.denominator == 2 for x in xs2)


def test_regular_local_eval_nonsplit():
    # nu(x) < 0 vanishing
    c = orbital.regular_local_eval(CTX, 3, CTX.elem(Fraction(1, 3), 1))
    assert c.kind == "zero"
    # generic value 1
    c = orbital.regular_local_eval(CTX, 7, CTX.elem(2))
    assert c.kind == "exact" and c.value == 1
    c = orbital.regular_local_eval(CTX, 3, CTX.elem(1, 2))
    assert c.kind == "exact" and c.value == 1  # N(x)-1 = 4 coprime to 3
    # p | N with unit norm difference vanishes
    c = orbital.regular_local_eval(CTX, 3, CTX.elem(2, 1), divides_N=True)
    assert c.kind == "zero"  # N(x)-1 = 4, nu_3 = 0
    # p | N with positive valuation: certificate
    c = orbital.regular_local_eval(CTX, 3, CTX.elem(2), divides_N=True)
    assert c.kind == "bound"
    # Hecke case support
    c = orbital.regular_local_eval(CTX, 3, CTX.elem(Fraction(1, 9)), hecke_r=1)
    assert c.kind == "zero"
    c = orbital.regular_local_eval(CTX, 3, CTX.elem(Fraction(1, 3)), hecke_r=1)
    assert c.kind == "bound"


def test_regular_local_eval_split():
    p5 = CTX.classify_place(5)
    # generic split value 1
    c = orbital.regular_local_eval(CTX, 5, CTX.elem(3))
    assert c.kind == "exact" and c.value == 1
    # negative valuation at one factor vanishes (p coprime to N')
    x = CTX.elem(2, 1) / 5  # valuations (1,0) - 1 = (0,-1)... build directly
    x = CTX.elem(Fraction(2, 5), Fraction(1, 5))
    from besselkit.fieldarith import valuation

    assert min(valuation(x, p5)) < 0
    c = orbital.regular_local_eval(CTX, 5, x)
    assert c.kind == "zero"
    # p | N': support down to valuation -1
    c = orbital.regular_local_eval(CTX, 5, x, divides_Nprime=True)
    assert c.kind in ("bound", "zero")
    deep = CTX.elem(Fraction(2, 25), Fraction(1, 25))
    c = orbital.regular_local_eval(CTX, 5, deep, divides_Nprime=True)
    assert c.kind == "zero"


def test_multiplicative_consistency():
    # product over places of certificates for an X-set member is finite and
    # almost all factors are exactly 1
    x = CTX.elem(2)
    exact_ones = 0
    for p in (3, 7, 11, 13, 17, 19, 23):
        if CTX.classify_place(p).kind == "ramified":
            continue
        c = orbital.regular_local_eval(CTX, p, x)
        if c.kind == "exact" and c.value == 1:
            exact_ones += 1
    assert exact_ones >= 6
