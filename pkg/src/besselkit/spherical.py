"""Closed-form nonarchimedean matrix coefficients.

Macdonald spherical values for U(2,1) and U(1,1)/GL(2), the GL(3) Macdonald
formula in Schur-polynomial form (exact at parameter collisions), the
Casselman-Shalika Whittaker values, Steinberg coefficients on Iwahori cells
and the old-form vector algebra at an inert prime.

All formulas are written through balanced character sums

    ssum(a, m) = a^{m-1} + a^{m-3} + ... + a^{1-m}   (m >= 0 terms m),

so boundary parameters (a = +-1, equal Satake entries) evaluate exactly
without limits.  Values are mpmath complex numbers at the working precision.
"""

from __future__ import annotations

from itertools import permutations

import mpmath as mp

from .cosets import CellWord


def set_precision(dps: int = 50):
    mp.mp.dps = dps


set_precision(50)


def unit_param(theta) -> mp.mpc:
    """e^{i theta} as an exact-as-possible tempered Satake parameter."""
    return mp.e ** (mp.mpc(0, 1) * mp.mpf(theta))


def is_tempered(z, tol=None) -> bool:
    tol = tol or mp.mpf(10) ** (-(mp.mp.dps - 10))
    return abs(abs(mp.mpc(z)) - 1) < tol


def ssum(a, m: int):
    """(a^m - a^{-m}) / (a - a^{-1}) as the balanced sum; odd/even safe,
    ssum(a, -m) = -ssum(a, m), ssum(a, 0) = 0."""
    if m < 0:
        return -ssum(a, -m)
    a = mp.mpc(a)
    return sum((a ** (m - 1 - 2 * j) for j in range(m)), mp.mpc(0))


def tsum(a, n: int):
    """a^n + a^{n-1} + ... + a^{-n}  (2n+1 terms); tsum(a,-1) = -1."""
    if n == -1:
        return mp.mpc(-1)
    if n < -1:
        # (a^{n+1/2}-a^{-n-1/2})/(a^{1/2}-a^{-1/2}) continued: t(-n-1) = -t(n)
        return -tsum(a, -n - 2)
    a = mp.mpc(a)
    return sum((a ** (n - j) for j in range(2 * n + 1)), mp.mpc(0))


# ---- Macdonald formulas ------------------------------------------------------


def macdonald_u2(n: int, gamma, p: int):
    """Rank-one Macdonald value at the n-th Cartan cell for a tree of
    parameter q = p (split GL2 at even cells, inert or ramified U(1,1)),
    normalized to 1 at n = 0; vanishes for n < 0.

    Equals p^{-n} [tsum(gamma, n) - p^{-1} tsum(gamma, n-1)] / (1 + p^{-1}).
    """
    if n < 0:
        return mp.mpc(0)
    P = mp.mpf(p)
    return (tsum(gamma, n) - tsum(gamma, n - 1) / P) / ((1 + 1 / P) * P**n)


def macdonald_u3(n: int, gamma, p: int):
    """Inert U(2,1) Macdonald value at the cell K A_n K, normalized to 1 at
    n = 0; vanishes for n < 0.

    p^{-2n} [ssum(g,n+1) + p^{-1}(1-p^{-1}) ssum(g,n) - p^{-3} ssum(g,n-1)]
    / (1 + p^{-3}).
    """
    if n < 0:
        return mp.mpc(0)
    P = mp.mpf(p)
    num = ssum(gamma, n + 1) + (1 / P) * (1 - 1 / P) * ssum(gamma, n) - ssum(gamma, n - 1) / P**3
    return num / ((1 + P**-3) * P ** (2 * n))


def gl2_spherical(d: int, beta, p: int):
    """GL(2,Q_p) zonal spherical value at diag(p^a, p^b), d = a - b >= 0,
    Satake (beta, beta^{-1}); p^{-d/2}[ssum(b,d+1)-p^{-1}ssum(b,d-1)]/(1+1/p)."""
    if d < 0:
        raise ValueError("d must be >= 0 (dominant)")
    P = mp.mpf(p)
    return (ssum(beta, d + 1) - ssum(beta, d - 1) / P) / ((1 + 1 / P) * mp.sqrt(P) ** d)


def _hpoly(k: int, z):
    """Complete homogeneous symmetric polynomial h_k(z1,z2,z3)."""
    if k < 0:
        return mp.mpc(0)
    z1, z2, z3 = (mp.mpc(x) for x in z)
    s = mp.mpc(0)
    for a in range(k + 1):
        for b in range(k - a + 1):
            c = k - a - b
            s += z1**a * z2**b * z3**c
    return s


def schur3(kappa, z):
    """Schur polynomial s_kappa(z1,z2,z3) for a weakly decreasing integer
    triple (negative parts allowed via a central shift)."""
    shift = -min(kappa) if min(kappa) < 0 else 0
    k = [kappa[i] + shift for i in range(3)]
    # Jacobi-Trudi 3x3 determinant det[h_{k_i - i + j}]
    H = [[_hpoly(k[i] - i + j, z) for j in range(3)] for i in range(3)]
    det = (
        H[0][0] * (H[1][1] * H[2][2] - H[1][2] * H[2][1])
        - H[0][1] * (H[1][0] * H[2][2] - H[1][2] * H[2][0])
        + H[0][2] * (H[1][0] * H[2][1] - H[1][1] * H[2][0])
    )
    if shift:
        zc = mp.mpc(z[0]) * z[1] * z[2]
        det = det / zc**shift
    return det


_S3 = list(permutations(range(3)))


def _sort_sign(v):
    """Descending sort with permutation sign; None if entries collide."""
    w = list(v)
    sign = 1
    for i in range(3):
        for j in range(2 - i):
            if w[j] < w[j + 1]:
                w[j], w[j + 1] = w[j + 1], w[j]
                sign = -sign
            elif w[j] == w[j + 1]:
                return None, 0
    return tuple(w), sign


def macdonald_gl3(coweight, chi, p: int):
    """GL(3,Q_p) Macdonald spherical value at diag(p^l1, p^l2, p^l3)
    (l1 >= l2 >= l3), Satake chi = (z1, z2, z3), normalized to 1 at 0.

    Schur-expansion form: Phi = (p^{-<lam,rho>}/Q) *
    sum_{S subset Phi^+} (-1/p)^{|S|} eps_S s_{sort(lam+mu_S)-rho}(z),
    exact at equal Satake parameters.
    """
    l1, l2, l3 = coweight
    if not (l1 >= l2 >= l3):
        raise ValueError("coweight must be dominant")
    P = mp.mpf(p)
    rho = (2, 1, 0)  # using (2,1,0) as the rho-shift inside the a-functions
    Q = (1 + 1 / P) * (1 + 1 / P + 1 / P**2)
    roots = [(0, 1), (0, 2), (1, 2)]  # alpha = e_i - e_j, i < j
    total = mp.mpc(0)
    for S in range(8):
        mu = [rho[0], rho[1], rho[2]]
        size = 0
        for t, (i, j) in enumerate(roots):
            if S >> t & 1:
                mu[i] -= 1
                mu[j] += 1
                size += 1
        v = (l1 + mu[0], l2 + mu[1], l3 + mu[2])
        srt, sign = _sort_sign(v)
        if sign == 0:
            continue
        kappa = (srt[0] - 2, srt[1] - 1, srt[2])
        total += (-1 / P) ** size * sign * schur3(kappa, chi)
    return total * P ** (-(l1 - l3)) / Q


def _macdonald_gl3_weyl(coweight, chi, p: int):
    """Generic-parameter Weyl-sum form of the GL3 Macdonald formula."""
    l1, l2, l3 = coweight
    P = mp.mpf(p)
    z = [mp.mpc(c) for c in chi]
    Q = (1 + 1 / P) * (1 + 1 / P + 1 / P**2)
    total = mp.mpc(0)
    for perm in _S3:
        zz = [z[i] for i in perm]
        c = mp.mpc(1)
        for i in range(3):
            for j in range(i + 1, 3):
                r = zz[j] / zz[i]
                c *= (1 - r / P) / (1 - r)
        total += c * zz[0] ** l1 * zz[1] ** l2 * zz[2] ** l3
    return total * P ** (-(l1 - l3)) / Q


def macdonald_gl3_value(coweight, chi, p: int, collision_tol=None):
    """GL3 Macdonald value: Weyl sum for generic Satake parameters, exact
    Schur expansion near parameter collisions."""
    tol = collision_tol or mp.mpf(10) ** (-(mp.mp.dps // 2))
    z = [mp.mpc(c) for c in chi]
    generic = all(abs(z[i] / z[j] - 1) > tol for i in range(3) for j in range(3) if i != j)
    if generic:
        return _macdonald_gl3_weyl(coweight, chi, p)
    return macdonald_gl3(coweight, chi, p)


def gl3_hecke_eigenvalue(chi, p: int):
    """Eigenvalue of 1_{K diag(p,1,1) K} on the normalized spherical
    function: p (z1 + z2 + z3)."""
    return mp.mpf(p) * (mp.mpc(chi[0]) + chi[1] + chi[2])


# ---- Casselman-Shalika --------------------------------------------------------


def cs_whittaker_inert(nu_n: int, i: int, alpha, p: int):
    """Eq.-(138)-style value: indicator * p^{-i} * ssum(a, nu+2i+1)/ssum(a, nu+1)."""
    if nu_n + 2 * i < 0:
        return mp.mpc(0)
    denom = ssum(alpha, nu_n + 1)
    return mp.mpf(p) ** (-i) * ssum(alpha, nu_n + 2 * i + 1) / denom


def cs_whittaker_gl2(l: int, alpha, p: int):
    """W(diag(p^l,1)) / W(1) = 1_{l>=0} p^{-l/2} ssum(alpha, l+1)."""
    if l < 0:
        return mp.mpc(0)
    return mp.sqrt(mp.mpf(p)) ** (-l) * ssum(alpha, l + 1)


# ---- Steinberg ----------------------------------------------------------------


def steinberg_xi(cell: CellWord, p: int):
    """Xi(w)/Xi(1) = (-p)^{-lambda(w)} on the Iwahori cell w."""
    from fractions import Fraction

    return Fraction(1, (-p) ** cell.lam)


def steinberg_recursions(p: int) -> bool:
    """1 + p^3 Xi(J)/Xi(1) = 0 and Xi(J)/Xi(1) + p Xi(A_1)/Xi(1) = 0 exactly."""
    from fractions import Fraction

    xiJ = steinberg_xi(CellWord("J", 0, 3), p)
    xiA1 = steinberg_xi(CellWord("A", 1, 3), p)
    return 1 + p**3 * xiJ == 0 and xiJ + p * xiA1 == 0


# ---- old-form vector at an inert prime ----------------------------------------


def oldform_phistar(p: int, alpha, chi2=None) -> dict:
    """The non-spherical Iwahori vector phi* built from the spherical one.

    alpha: Satake parameter of the unramified U(2,1) representation (drives
    the Macdonald value at the first Hecke cell).  chi2: the section value
    chi^2(p) entering phi*(J) and phi*(e); defaults to alpha.

    Returns phi*(e), phi*(J), the inner-product ratios
    <phi*,phi0>/<phi0,phi0>, <phi*,phi*>/<phi0,phi0> and the Gram-Schmidt
    denominator (which is p + O(1))."""
    if chi2 is None:
        chi2 = alpha
    chi2 = mp.mpc(chi2)
    P = mp.mpf(p)
    phi1 = macdonald_u3(1, alpha, p)
    phistar_J = (1 / P + P - 1) * chi2 / P**2
    phistar_e = P * (mp.conj(chi2) + 1) - 1
    inner_cross = (P + 1 / P - 1) * phi1
    inner_self = (P + P**-2 - 1) + (P**2 - 3 * P + 4 - 2 / P) * phi1
    gram = inner_self - inner_cross**2
    return {
        "phistar_e": phistar_e,
        "phistar_J": phistar_J,
        "cross_ratio": inner_cross,
        "self_ratio": inner_self,
        "gram_denominator": gram,
        "macdonald_t": phi1,
    }


# ---- spectral bounds -----------------------------------------------------------


def u2_bound(n: int, p: int):
    """|macdonald_u2(n)| <= (2n+1+p^{-1}(2n-1)) / ((1+p^{-1}) p^n)."""
    P = mp.mpf(p)
    return (2 * n + 1 + (2 * n - 1) / P) / ((1 + 1 / P) * P**n)


def u3_bound(n: int, p: int):
    """Triangle-inequality majorant for |macdonald_u3(n)|:
    [(n+1) + p^{-1}(1-p^{-1}) n + p^{-3}(n-1)] / ((1+p^{-3}) p^{2n})."""
    P = mp.mpf(p)
    num = (n + 1) + (1 / P) * (1 - 1 / P) * n + max(n - 1, 0) / P**3
    return num / ((1 + P**-3) * P ** (2 * n))


def u3_paper_bound(n: int, p: int):
    """The floor-expression bound (paper form) for |macdonald_u3(n)|, n>=1."""
    P = mp.mpf(p)
    fl1 = (n - 1) // 2
    fl2 = n // 2
    num = 2 + (1 - P**-3) * (2 * fl1 + (1 + (-1) ** n) / 2) + (1 / P) * (1 - 1 / P) * (
        2 * fl2 + (1 + (-1) ** (n - 1)) / 2
    )
    return num / ((1 + P**-3) * P ** (2 * n))


def gl3_bound(coweight, p: int):
    """Dimension bound: |Phi_lam| <= 4 delta^{1/2} (l1-l2+4)(l2-l3+4)(l1-l3+6)
    / |K p^lam K / K|  <=  4 p^{-(l1-l3)} (l1-l2+4)(l2-l3+4)(l1-l3+6)."""
    l1, l2, l3 = coweight
    P = mp.mpf(p)
    return 4 * P ** (-(l1 - l3)) * (l1 - l2 + 4) * (l2 - l3 + 4) * (l1 - l3 + 6)
