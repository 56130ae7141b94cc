"""Gamma factors, local Euler factors, conductor and root-number data,
main-term constants, Hecke/Chebyshev identities, the Sato-Tate measure and
the amplifier selection rule.

Local Euler factors follow the convention that the adjoint factors of the
unitary groups are the Asai factors of sign (-1)^n of the base change:
As^- for U(2,1), As^+ for U(1,1).  With these, the unramified local period
identity P-natural = 1 holds exactly (verified symbolically and in the
period module numerically).
"""

from __future__ import annotations

from fractions import Fraction

import mpmath as mp


# ---- Gamma factors -------------------------------------------------------------


def gamma_R(s):
    return mp.pi ** (-mp.mpc(s) / 2) * mp.gamma(mp.mpc(s) / 2)


def gamma_C(s):
    return 2 * (2 * mp.pi) ** (-mp.mpc(s)) * mp.gamma(mp.mpc(s))


def rs_arch_shifts(k: int):
    """The six signed archimedean Rankin-Selberg parameters; the Gamma_C
    shifts of L_infty are their absolute values."""
    return [
        Fraction(2 * k - 3, 2),
        Fraction(k - 3, 2),
        Fraction(3, 2),
        Fraction(-1, 2),
        Fraction(-k - 1, 2),
        Fraction(-2 * k + 5, 2),
    ]


def l_infty_rs(s, k: int):
    """L_infty(s, RS) = prod of six Gamma_C(s + |shift|) factors."""
    val = mp.mpc(1)
    for r in rs_arch_shifts(k):
        val *= gamma_C(mp.mpc(s) + abs(r))
    return val


def gamma_r_shift_multiset(k: int):
    """The twelve Gamma_R shifts obtained from the six Gamma_C factors."""
    out = []
    for r in rs_arch_shifts(k):
        out.append(abs(r))
        out.append(abs(r) + 1)
    return sorted(out)


def arch_root_number(k: int):
    """epsilon_infty = i^{2 sum r} over the signed parameters (= +1: the sum
    vanishes exactly)."""
    s = sum(rs_arch_shifts(k), Fraction(0))
    return (1j ** int(2 * s)).real if s.denominator == 1 else None


def conductor_and_sign(N: int, Nprime: int) -> dict:
    """Arithmetic conductor N^4 N'^6 and root number +1 with the local sign
    table of the proof."""
    if N != 1 and Nprime != 1 and N % Nprime == 0:
        raise ValueError("N and N' must be coprime")
    table = {
        "unramified": 1,
        "inert_steinberg": 1,     # eps_p(pi_E)^2
        "split_pair": 1,          # (eps_frak eps_frakbar)^3
        "archimedean": 1,         # i^{2 sum r}, sum r = 0
    }
    return {
        "Cf": N**4 * Nprime**6,
        "eps": 1,
        "local_signs": table,
        "arch_parameter_sum": sum(rs_arch_shifts(32), Fraction(0)),
    }


def analytic_conductor(s, k: int, N: int, Nprime: int):
    """Proxy N^4 N'^6 |s|^4 (|s|+k)^8 for the analytic conductor."""
    a = abs(mp.mpc(s))
    return N**4 * Nprime**6 * a**4 * (a + k) ** 8


def convexity_bound(k: int, N: int, Nprime: int):
    """Fourth root of the conductor proxy at s = 1/2, i.e. the k^3 N N'^{3/2}
    shape (both sides of the asymp are returned for reporting)."""
    proxy = analytic_conductor(mp.mpf(0.5), k, N, Nprime) ** mp.mpf(0.25)
    shape = mp.mpf(k) ** 3 * N * mp.mpf(Nprime) ** mp.mpf(1.5)
    return {"proxy_fourth_root": proxy, "shape": shape, "ratio": proxy / shape}


# ---- local Euler factors --------------------------------------------------------


def _inv_prod(factors):
    out = mp.mpc(1)
    for f in factors:
        out /= f
    return out


def euler_local(kind: str, p: int, place: str, satakes, s) -> mp.mpc:
    """Local Euler factor at p (as an L-value, i.e. product of (1-z q^-s)^{-1}).

    kind in {'rs', 'adjoint3', 'adjoint2', 'deltaG'};
    place in {'inert', 'split', 'ramified'};
    satakes: (alpha, beta) at inert/ramified p (base changes {a,1,1/a} and
    {b,1/b} over the quadratic unramified extension, q_w = p^2), or
    ((z1,z2,z3), (w1,w2)) at split p (two conjugate places, q_w = p).
    """
    P = mp.mpf(p)
    s = mp.mpc(s)
    if kind == "deltaG":
        eta = {"inert": -1, "split": 1, "ramified": 0}[place]
        return _inv_prod(
            [1 - eta * P**-1, 1 - P**-2, 1 - eta**3 * P**-3]
        )
    if place == "inert":
        a, b = mp.mpc(satakes[0]), mp.mpc(satakes[1])
        t = P ** (-2 * s)  # q_w = p^2
        if kind == "rs":
            return _inv_prod([1 - u * v * t for u in (a, 1, 1 / a) for v in (b, 1 / b)])
        if kind == "adjoint3":
            # As^-(pi_E): pair parameters {a,1,1/a} at p^{-2s}, singles with +
            tp = P ** (-s)
            return _inv_prod(
                [1 - u * t for u in (a, 1, 1 / a)]
                + [1 + u * tp for u in (a, 1, 1 / a)]
            )
        if kind == "adjoint2":
            # As^+(pi'_E): pair parameter {b*1/b = 1} at p^{-2s}, singles with -
            tp = P ** (-s)
            return _inv_prod([1 - t] + [1 - v * tp for v in (b, 1 / b)])
    if place == "split":
        z, w = satakes
        t = P ** (-s)
        if kind == "rs":
            fac = [1 - mp.mpc(zi) * wj * t for zi in z for wj in w]
            fac += [1 - t / (mp.mpc(zi) * wj) for zi in z for wj in w]
            return _inv_prod(fac)
        if kind == "adjoint3":
            return _inv_prod([1 - mp.mpc(zi) / zj * t for zi in z for zj in z])
        if kind == "adjoint2":
            return _inv_prod([1 - mp.mpc(wi) / wj * t for wi in w for wj in w])
    if place == "ramified":
        # convention flagged in reports: base-change parameters over q_w = p
        a, b = mp.mpc(satakes[0]), mp.mpc(satakes[1])
        t = P ** (-s)
        if kind == "rs":
            return _inv_prod([1 - u * v * t for u in (a, 1, 1 / a) for v in (b, 1 / b)])
        if kind == "adjoint3":
            return _inv_prod([1 - u * t for u in (a**2, a, a, 1, 1, 1 / a, 1 / a, a**-2)])
        if kind == "adjoint2":
            return _inv_prod([1 - u * t for u in (b**2, 1, b**-2)])
    raise ValueError(f"unknown kind/place {kind}/{place}")


def l_ratio_local(p: int, place: str, satakes) -> mp.mpc:
    """Delta_{G,p} L_p(1/2, RS) / (L_p(1,Ad,pi) L_p(1,Ad,pi')) -- the local
    factor L_p(pi_p, pi'_p) of the period normalization.  Rejects
    non-tempered Satake data."""
    from .spherical import is_tempered

    flat = satakes if place != "split" else tuple(satakes[0]) + tuple(satakes[1])
    if not all(is_tempered(z) for z in flat):
        raise ValueError("non-tempered Satake parameter")
    half = mp.mpf(1) / 2
    return (
        euler_local("deltaG", p, place, satakes, 0)
        * euler_local("rs", p, place, satakes, half)
        / euler_local("adjoint3", p, place, satakes, 1)
        / euler_local("adjoint2", p, place, satakes, 1)
    )


# ---- main-term constants ---------------------------------------------------------


def _prime_factors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def psi_of_N(N: int) -> Fraction:
    out = Fraction(1)
    for q in _prime_factors(N):
        out *= Fraction(q * q - q + 1, q * q)
    return out


def siegel_of_Nprime(Nprime: int) -> Fraction:
    out = Fraction(1)
    for q in _prime_factors(Nprime):
        out *= Fraction(q * q, q * q - 1)
    return out


def formal_degree_dlambda(k: int) -> Fraction:
    return Fraction((2 * k - 2) * (k + 2) * (k - 6), 3)


def formal_degree_dk(k: int) -> int:
    return k - 1


def w_E_of(D: int) -> int:
    return 4 if D == 1 else (6 if D == 3 else 2)


def main_term(k: int, N: int, Nprime: int, ell: int, lam_ell, D: int) -> dict:
    """w_E (d_Lambda/d_k)(N/N')^2 Psi(N) S(N') lambda'(ell)/ell."""
    rational = (
        w_E_of(D)
        * formal_degree_dlambda(k)
        / formal_degree_dk(k)
        * Fraction(N, Nprime) ** 2
        * psi_of_N(N)
        * siegel_of_Nprime(Nprime)
        / ell
    )
    return {
        "rational_part": rational,
        "value": mp.mpf(rational.numerator) / rational.denominator * mp.mpc(lam_ell),
        "Psi": psi_of_N(N),
        "S": siegel_of_Nprime(Nprime),
        "w_E": w_E_of(D),
        "d_ratio": formal_degree_dlambda(k) / formal_degree_dk(k),
    }


# ---- Hecke eigenvalue algebra ------------------------------------------------------


def hecke_lambda_pi(alpha, p: int, r: int):
    """lambda_pi(p^r): coefficients of (1 + p^{-1} X)/((1-aX)(1-X/a)),
    i.e. ssum-type sums: lambda(p^r) = S_{r+1}(a) + p^{-1} S_r(a) with
    S_m = ssum(a, m)."""
    from .spherical import ssum

    if r < 0:
        return mp.mpc(0)
    return ssum(alpha, r + 1) + ssum(alpha, r) / mp.mpf(p)


def hecke_lambda_pi_tilde(alpha, p: int, r: int):
    """lambda-tilde_pi(p^r) = C_r(a + 1/a) (pure Chebyshev coefficient)."""
    from .spherical import ssum

    return ssum(alpha, r + 1)


def hecke_lambda_piprime(lam_p, p: int, r: int):
    """Classical lambda_pi'(p^r) = C_r(lambda'(p)) for the analytically
    normalized GL2 eigenvalue lambda'(p) in [-2,2]."""
    return chebyshev_C(r, lam_p)


def hecke_lambda(which: str, value, p: int, r: int):
    """Dispatcher: which in {'pi','tilde_pi','pi_prime','tilde_pi_prime'}.

    'pi'/'tilde_pi' take the Satake parameter alpha; the primed variants
    take the classical eigenvalue lambda'(p)."""
    if which == "pi":
        return hecke_lambda_pi(value, p, r)
    if which == "tilde_pi":
        return hecke_lambda_pi_tilde(value, p, r)
    if which == "pi_prime":
        return hecke_lambda_piprime(value, p, r)
    if which == "tilde_pi_prime":
        return lambda_tilde_piprime(value, p, r)
    raise ValueError(which)


def chebyshev_C(r: int, x):
    """C_r with C_r(2 cos t) = sin((r+1)t)/sin t."""
    if r < 0:
        return mp.mpf(0)
    prev, cur = mp.mpf(1), mp.mpf(x)
    if r == 0:
        return prev
    for _ in range(r - 1):
        prev, cur = cur, mp.mpf(x) * cur - prev
    return cur


def lambda_tilde_piprime(lam_p, p: int, r: int):
    """lambda-tilde_pi'(p^r) = C_r(lambda_pi'(p)) / p^r."""
    return chebyshev_C(r, lam_p) / mp.mpf(p) ** r


def dirichlet_tilde_pi(alpha, p: int, r: int):
    """lambda-tilde_pi(p^r) via the Dirichlet convolution
    sum_{l=0}^{r} (-1)^{r-l} p^{l-r} lambda_pi(p^l); equals C_r(alpha+1/alpha)."""
    out = mp.mpc(0)
    for l in range(r + 1):
        out += mp.mpf(-1) ** (r - l) * mp.mpf(p) ** (l - r) * hecke_lambda_pi(alpha, p, l)
    return out


# ---- Sato-Tate ----------------------------------------------------------------------


def st_density(x):
    """Semicircle density on [-2,2]."""
    x = mp.mpf(x)
    if abs(x) >= 2:
        return mp.mpf(0)
    return mp.sqrt(1 - x * x / 4) / mp.pi


def weighted_density(x, lam_p, p: int, rmax: int = 120):
    """The local Rankin-Selberg weight sum_r C_r(x) lambda-tilde'(p^r)/p^r
    = sum_r C_r(x) C_r(lambda'(p)) p^{-2r/2...}; the series runs in t = 1/p
    (the inert place has residue size p^2, so t = q_w^{-1/2})."""
    out = mp.mpf(0)
    for r in range(rmax):
        out += chebyshev_C(r, x) * chebyshev_C(r, lam_p) / mp.mpf(p) ** r
    return out


def weighted_density_closed(x, lam_p, p: int):
    """Closed form of the weight via sum C_r(2cos u)C_r(2cos v) t^r =
    (1-t^2)/prod (1 - t e^{i(+-u+-v)}) at t = p^{-2}."""
    t = 1 / mp.mpf(p)
    u = mp.acos(mp.mpf(x) / 2)
    v = mp.acos(mp.mpf(lam_p) / 2)
    val = (1 - t * t)
    for s1 in (1, -1):
        for s2 in (1, -1):
            val /= 1 - t * mp.e ** (1j * (s1 * u + s2 * v))
    return val.real


def sato_tate_moment(p: int, lam_p, r: int):
    """mu_p(C_r) = int C_r(x) L(1/2, sigma_x x pi'_p) dmu_ST(x); equals
    C_r(lambda'(p))/p^r by Chebyshev orthonormality.  Integrated in the
    x = 2 cos(theta) chart where the measure is (2/pi) sin^2."""
    f = lambda th: (chebyshev_C(r, 2 * mp.cos(th))
                    * weighted_density_closed(2 * mp.cos(th), lam_p, p)
                    * 2 / mp.pi * mp.sin(th) ** 2)
    val = mp.quad(f, [0, mp.pi])
    target = chebyshev_C(r, lam_p) / mp.mpf(p) ** r
    return {"moment": val, "target": target, "error": abs(val - target)}


def amplifier_select(lam_p, lam_p2, p: int, tol=1e-9) -> int:
    """r in {1,2} with |lambda(p^r)| >= 1/2; validates the Hecke relation
    lambda(p)^2 = lambda(p^2) + lambda(p)/p + 1."""
    rel = mp.mpf(lam_p) ** 2 - (mp.mpf(lam_p2) + mp.mpf(lam_p) / p + 1)
    if abs(rel) > tol:
        raise ValueError("inputs violate the Hecke relation")
    if abs(mp.mpf(lam_p)) >= 0.5:
        return 1
    if abs(mp.mpf(lam_p2)) >= 0.5:
        return 2
    raise AssertionError("amplifier guarantee failed (impossible for valid input)")
