import random
from fractions import Fraction

import mpmath as mp
import pytest

from besselkit.cosets import An, CellWord, cell_reps, mat_val
from besselkit.fieldarith import field
from besselkit.spherical import (
    cs_whittaker_gl2,
    cs_whittaker_inert,
    gl2_spherical,
    gl3_hecke_eigenvalue,
    macdonald_gl3,
    macdonald_gl3_value,
    macdonald_u2,
    macdonald_u3,
    oldform_phistar,
    set_precision,
    ssum,
    steinberg_recursions,
    steinberg_xi,
    tsum,
    u2_bound,
    u3_bound,
    u3_paper_bound,
    unit_param,
)
from besselkit.unitary import mat_mul

set_precision(50)
TOL = mp.mpf(10) ** -20


def test_ssum_tsum():
    a = unit_param(0.37)
    for m in range(-5, 8):
        assert abs(ssum(a, m) - (a**m - a**-m) / (a - 1 / a)) < TOL
    assert ssum(a, 0) == 0
    assert abs(tsum(a, 2) - (a**2 + a + 1 + 1 / a + a**-2)) < TOL
    assert tsum(a, -1) == -1
    assert ssum(1, 5) == 5 and ssum(-1, 4) == -4


def test_normalizations_and_support():
    g = unit_param(0.7)
    assert abs(macdonald_u2(0, g, 3) - 1) < TOL
    assert abs(macdonald_u3(0, g, 3) - 1) < TOL
    assert macdonald_u2(-1, g, 3) == 0
    assert macdonald_u3(-2, g, 3) == 0


def test_boundary_parameters():
    # gamma' = 1 limit equals [(2n+1)(1-1/p)+2/p]/((1+1/p)p^n)
    for p in (3, 5):
        for n in (1, 2, 5):
            P = mp.mpf(p)
            expect = ((2 * n + 1) * (1 - 1 / P) + 2 / P) / ((1 + 1 / P) * P**n)
            assert abs(macdonald_u2(n, 1, p) - expect) < TOL
    # gamma = -1 finite and real
    v = macdonald_u3(3, -1, 3)
    assert abs(v.imag) < TOL


def test_bounds():
    for p in (3, 5, 7):
        for n in range(1, 31):
            for th in (0.1, 0.9, 1.7, 2.8):
                g = unit_param(th)
                assert abs(macdonald_u2(n, g, p)) <= u2_bound(n, p) + TOL
                assert abs(macdonald_u3(n, g, p)) <= u3_bound(n, p) + TOL
                assert abs(macdonald_u3(n, g, p)) <= u3_paper_bound(n, p) + TOL


def _hecke_reps(D, p, size):
    ctx = field(D)
    reps = []
    for w in ("A", "JA"):
        reps.extend(cell_reps(ctx, CellWord(w, 1, size), p))
    return ctx, reps


@pytest.mark.parametrize("D,p", [(3, 2), (1, 3)])
def test_convolution_oracle_u3(D, p):
    ctx, reps = _hecke_reps(D, p, 3)
    assert len(reps) == p * (p**3 + 1)
    alpha = unit_param(0.83)
    lam = mp.mpf(p) ** 2 * (alpha + 1 / alpha) + p - 1
    for m in (0, 1, 2):
        Am = An(ctx, p, m, 3)
        s = sum((macdonald_u3(-mat_val(mat_mul(Am, g), p), alpha, p) for g in reps),
                mp.mpc(0))
        assert abs(s - lam * macdonald_u3(m, alpha, p)) < TOL


def test_convolution_oracle_u2():
    ctx, reps = _hecke_reps(1, 3, 2)
    assert len(reps) == 3 * 4
    beta = unit_param(-0.41)
    lam = mp.mpf(3) * (beta + 1 / beta) + 2
    for m in (0, 1, 2, 3):
        Am = An(ctx, 3, m, 2)
        s = sum((macdonald_u2(-mat_val(mat_mul(Am, g), 3), beta, 3) for g in reps),
                mp.mpc(0))
        assert abs(s - lam * macdonald_u2(m, beta, 3)) < TOL


def test_gl3_macdonald():
    chi = (unit_param(0.4), unit_param(-1.1), 1 / (unit_param(0.4) * unit_param(-1.1)))
    assert abs(macdonald_gl3((0, 0, 0), chi, 5) - 1) < TOL
    v1 = macdonald_gl3((1, 0, -1), chi, 5)
    zc = chi[0] * chi[1] * chi[2]
    assert abs(macdonald_gl3((2, 1, 0), chi, 5) - zc * v1) < TOL
    # weyl-sum dispatch agrees with schur form
    for cw in ((1, 0, -1), (3, 1, 0), (5, 0, -2)):
        assert abs(macdonald_gl3_value(cw, chi, 5) - macdonald_gl3(cw, chi, 5)) < TOL
    with pytest.raises(ValueError):
        macdonald_gl3((0, 1, 0), chi, 5)


def test_gl3_collision_exact():
    chi_c = (unit_param(0.4), unit_param(0.4), 1 / unit_param(0.8))
    vc = macdonald_gl3_value((1, 0, -1), chi_c, 5)
    eps = 1e-13
    chi_e = (unit_param(0.4 + eps), unit_param(0.4), 1 / (unit_param(0.4 + eps) * unit_param(0.4)))
    ve = macdonald_gl3_value((1, 0, -1), chi_e, 5)
    assert abs(vc - ve) < 1e-9


def test_gl3_convolution_oracle():
    from fractions import Fraction as F

    p = 5
    chi = (unit_param(0.3), unit_param(1.2), 1 / (unit_param(0.3) * unit_param(1.2)))
    lam = gl3_hecke_eigenvalue(chi, p)
    reps = []
    for a in range(p):
        for b in range(p):
            reps.append(((F(p), F(a), F(b)), (0, 1, 0), (0, 0, 1)))
    for c in range(p):
        reps.append(((1, 0, 0), (0, F(p), F(c)), (0, 0, 1)))
    reps.append(((1, 0, 0), (0, 1, 0), (0, 0, F(p))))

    def vp(x):
        x = F(x)
        if x == 0:
            return 10**9
        v = 0
        n, d = x.numerator, x.denominator
        while n % p == 0:
            n //= p
            v += 1
        while d % p == 0:
            d //= p
            v -= 1
        return v

    def cartan(M):
        import itertools

        m1 = min(vp(M[i][j]) for i in range(3) for j in range(3))
        m2 = min(
            vp(F(M[r[0]][c[0]]) * F(M[r[1]][c[1]]) - F(M[r[0]][c[1]]) * F(M[r[1]][c[0]]))
            for r in itertools.combinations(range(3), 2)
            for c in itertools.combinations(range(3), 2)
        )
        det = (F(M[0][0]) * (F(M[1][1]) * F(M[2][2]) - F(M[1][2]) * F(M[2][1]))
               - F(M[0][1]) * (F(M[1][0]) * F(M[2][2]) - F(M[1][2]) * F(M[2][0]))
               + F(M[0][2]) * (F(M[1][0]) * F(M[2][1]) - F(M[1][1]) * F(M[2][0])))
        return (vp(det) - m2, m2 - m1, m1)

    def matmul(A, B):
        return tuple(tuple(sum(F(A[i][k]) * F(B[k][j]) for k in range(3))
                           for j in range(3)) for i in range(3))

    for lamw in ((0, 0, 0), (1, 0, -1), (2, 1, 0)):
        Am = ((F(p) ** lamw[0], 0, 0), (0, F(p) ** lamw[1], 0), (0, 0, F(p) ** lamw[2]))
        s = sum((macdonald_gl3_value(cartan(matmul(Am, g)), chi, p) for g in reps),
                mp.mpc(0))
        assert abs(s - lam * macdonald_gl3_value(lamw, chi, p)) < TOL


def test_cs_whittaker():
    g = unit_param(0.9)
    assert abs(cs_whittaker_gl2(0, g, 5) - 1) < TOL
    assert cs_whittaker_gl2(-1, g, 5) == 0
    assert cs_whittaker_inert(1, -1, g, 3) == 0
    assert abs(cs_whittaker_inert(0, 0, g, 3) - 1) < TOL
    # generating function: sum_l W(l) X^l = 1/((1-a X/sqrt p)(1-X/(a sqrt p)))
    rnd = random.Random(9)
    for _ in range(20):
        a = unit_param(rnd.uniform(0.05, 3.1))
        p = 7
        X = mp.mpf(1) / 3
        lhs = sum(cs_whittaker_gl2(l, a, p) * X**l for l in range(200))
        rhs = 1 / ((1 - a * X / mp.sqrt(p)) * (1 - X / (a * mp.sqrt(p))))
        assert abs(lhs - rhs) < 1e-30


def test_steinberg():
    assert steinberg_recursions(3) and steinberg_recursions(5) and steinberg_recursions(2)
    assert steinberg_xi(CellWord("J", 0, 3), 3) == Fraction(-1, 27)
    assert steinberg_xi(CellWord("J", 0, 2), 3) == Fraction(-1, 3)
    assert steinberg_xi(CellWord("A", 1, 3), 3) == Fraction(1, 81)
    assert steinberg_xi(CellWord("1", 0, 3), 3) == 1


def test_oldform_phistar():
    p = 3
    a = unit_param(1.234)
    r = oldform_phistar(p, a)
    P = mp.mpf(p)
    assert abs(abs(r["phistar_J"]) - (1 / P + P - 1) / P**2) < TOL
    assert abs(r["phistar_e"] - (P * (mp.conj(a) + 1) - 1)) < TOL
    # |phi*(J)| < 1 <= |phi*(e)| separates phi* from the spherical vector
    assert abs(r["phistar_J"]) < 1 <= abs(r["phistar_e"]) + 1e-25
    # Gram-Schmidt denominator = p + O(1): check |gram - p| bounded over angles
    for th in (0.1, 0.8, 1.9, 2.7):
        g = oldform_phistar(p, unit_param(th))["gram_denominator"]
        assert abs(g - p) < 2.5
