"""Local orbital integrals: the six unipotent lemmas, the regular support
criterion with the X-set enumerator, and the regular local certificates.

Unipotent values are normalized by |W_{n,p}(1)|^2.  Where the source gives
a bound rather than a value, the result is a tagged certificate
{kind: 'bound', value} that callers must not treat as exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import mpmath as mp

from .fieldarith import FieldContext, QuadNum, valuation, vp_frac, INF
from .spherical import ssum


@dataclass(frozen=True)
class Certificate:
    kind: str  # 'exact' | 'bound' | 'zero'
    value: object

    def __post_init__(self):
        if self.kind not in ("exact", "bound", "zero"):
            raise ValueError(self.kind)

    @property
    def is_exact(self) -> bool:
        return self.kind in ("exact", "zero")


def _ratio_sq(alpha, nu: int, i: int):
    """|ssum(a, nu+2i+1)/ssum(a, nu+1)|^2."""
    return abs(ssum(alpha, nu + 2 * i + 1) / ssum(alpha, nu + 1)) ** 2


def unip_orbital_p(case: str, p: int, nu_n: int, alpha=None, nu_DE: int = 1):
    """O_p(f; n)/|W_{n,p}(1)|^2 for the six local cases.

    case in {'unram-split', 'unram-inert', 'N-coprime', 'N-divides',
    'ramified', 'Nprime'}; nu_n is the relevant valuation of n; alpha the
    unramified Satake parameter where the closed form needs one.
    """
    if case == "unram-split":
        if nu_n < 0:
            return Certificate("zero", 0)
        if nu_n == 0:
            return Certificate("exact", mp.mpf(1))
        total = mp.mpf(0)
        for l in range(nu_n + 1):
            total += (l + 1) * abs(ssum(alpha, nu_n - l + 1) / ssum(alpha, nu_n + 1)) ** 2
        return Certificate("exact", total / mp.mpf(p) ** nu_n)
    if case == "unram-inert":
        if nu_n < 0:
            return Certificate("zero", 0)
        if nu_n == 0:
            return Certificate("exact", mp.mpf(1))
        total = mp.mpf(0)
        i = -(nu_n // 2)
        while i <= 0:
            total += _ratio_sq(alpha, nu_n, i)
            i += 1
        return Certificate("exact", total)
    if case == "N-coprime":
        # mu(I'_p)^2/mu(I_p) = (p^3+1)/(p+1)^2 = (p^2-p+1)/(p+1)
        if nu_n < 0:
            return Certificate("zero", 0)
        return Certificate("exact", Fraction(p * p - p + 1, p + 1))
    if case == "N-divides":
        if nu_n <= 0:
            return Certificate("zero", 0)
        lead = Fraction(p * p - p + 1, p + 1)
        total = mp.mpf(1)
        i = -(nu_n // 2)
        while i <= -1:
            total += 2 * p * _ratio_sq(alpha, nu_n, i)
            i += 1
        return Certificate("exact", mp.mpf(lead.numerator) / lead.denominator * total)
    if case == "ramified":
        if nu_n <= 2 * nu_DE:
            return Certificate("zero", 0)
        total = mp.mpf(0)
        for i in range(-nu_n + 1, -2 * nu_DE + 1):
            total += _ratio_sq(alpha, nu_n, i)
        return Certificate("exact", total)
    if case == "Nprime":
        if nu_n < 0:
            return Certificate("zero", 0)
        if nu_n == 0:
            return Certificate("exact", Fraction(p - 2, (p**2 - 1) ** 2))
        return Certificate("bound", mp.mpf(nu_n) ** 2 / p)
    raise ValueError(case)


# ---- regular support ------------------------------------------------------------


def regular_support_test(x: QuadNum, N: int, Nprime: int, ell: int) -> bool:
    """Membership of x in X(N, N', ell): x in (ell N')^{-1} O_E, x not of
    norm 1, and N(x) = 1 (mod N)."""
    if x.norm() == 1:
        raise ValueError("x must be regular (norm != 1)")
    z = x * (ell * Nprime)
    cx, cy = x.ctx.omega_coords(z)
    if cx.denominator != 1 or cy.denominator != 1:
        return False
    if N == 1:
        return True
    d = x.norm() - 1
    return vp_frac(Fraction(d), _single_prime(N)) >= _prime_power(N)


def _single_prime(N: int) -> int:
    d = 2
    while d * d <= N:
        if N % d == 0:
            return d
        d += 1
    return N


def _prime_power(N: int) -> int:
    p = _single_prime(N)
    k = 0
    while N % p == 0:
        N //= p
        k += 1
    return k


def peter_x(x: QuadNum) -> Fraction:
    """<x> = |x|^2 + 1 when |x| < 1, |x|^2 when |x| > 1."""
    n = x.norm()
    if n < 1:
        return n + 1
    if n > 1:
        return n
    raise ValueError("x on the unit circle")


def xi_set_enumerate(ctx: FieldContext, N: int, Nprime: int, ell: int,
                     norm_bound) -> list:
    """All x in X(N,N',ell) with <x> <= norm_bound, via the lattice
    parametrization x = z/(ell N'), N(z) = qN + (ell N')^2, q != 0."""
    out = []
    M = ell * Nprime
    bound = Fraction(norm_bound)
    # N(z) = q N + M^2 with q != 0; <x> <= bound limits N(z) <= M^2 (bound + 1)
    max_norm = int(M * M * (bound + 1)) + 1
    oa, ob = ctx.omega
    D = ctx.D
    # z = a + b omega; N(z) = (a + b oa)^2 + D (b ob)^2
    bmax = isqrt(int(max_norm / (D * ob * ob))) + 2
    for b in range(-bmax, bmax + 1):
        disc = Fraction(max_norm) - D * (b * ob) ** 2
        if disc < 0:
            continue
        amax = isqrt(int(disc)) + 2
        for a in range(-amax - abs(int(b * oa)) - 2, amax + abs(int(b * oa)) + 3):
            z = ctx.from_omega_coords(a, b)
            nz = z.norm()
            if nz == 0 or nz > max_norm:
                continue
            q = (nz - M * M) / N
            if q == 0 or q.denominator != 1:
                continue
            x = z * Fraction(1, M)
            if x.norm() == 1:
                continue
            if peter_x(x) > bound:
                continue
            out.append(x)
    out.sort(key=lambda v: (v.norm(), v.re, v.im))
    return out


def xi_set_scan(ctx: FieldContext, N: int, Nprime: int, ell: int, norm_bound) -> int:
    """Independent double-loop count of the X-set (second oracle)."""
    M = ell * Nprime
    bound = Fraction(norm_bound)
    count = 0
    lim = int(M * isqrt(int(bound + 1)) * 3) + 3 * M + 3
    for a in range(-lim, lim + 1):
        for b in range(-lim, lim + 1):
            x = ctx.from_omega_coords(a, b) * Fraction(1, M)
            nx = x.norm()
            if nx == 1 or nx == 0:
                continue
            if nx < 1 and nx + 1 > bound:
                continue
            if nx > 1 and nx > bound:
                continue
            d = nx - 1
            if N > 1 and vp_frac(Fraction(d), _single_prime(N)) < _prime_power(N):
                continue
            count += 1
    return count


# ---- regular local certificates ----------------------------------------------------


def regular_local_eval(ctx: FieldContext, p: int, x: QuadNum, *,
                       divides_N: bool = False, divides_Nprime: bool = False,
                       hecke_r: int = 0) -> Certificate:
    """I_p(x) for x regular: 0 in the proven-vanishing regimes, exactly 1 in
    the generic nonsplit regime, otherwise the stated upper bound as a
    certificate (implied absolute constants not included)."""
    if x.norm() == 1:
        raise ValueError("x must be regular")
    place = ctx.classify_place(p)
    if place.kind in ("inert", "ramified"):
        nu_x = valuation(x, place)
        nu_norm_place = valuation(x * x.conj() - ctx.one, place)
        if hecke_r > 0:
            if place.kind != "inert":
                raise ValueError("Hecke case only at inert p")
            if nu_x < -hecke_r:
                return Certificate("zero", 0)
            nu1x = valuation(ctx.one - x, place) if x != 1 else INF
            b = (hecke_r + abs(nu_norm_place) + abs(nu1x)) * (
                mp.mpf(p) ** (3 * hecke_r + 2 * nu1x) + mp.mpf(p) ** (7 * hecke_r + 2 * nu_norm_place)
            )
            return Certificate("bound", b)
        if nu_x < 0:
            return Certificate("zero", 0)
        if divides_N and nu_norm_place <= 0:
            return Certificate("zero", 0)
        if not divides_N and p != 2 and ctx.discriminant % p != 0 and nu_norm_place == 0:
            return Certificate("exact", 1)
        nu1x = valuation(ctx.one - x, place) if x != 1 else 0
        e = (1 + nu1x) ** 2 * (1 + nu_norm_place)
        Np = p ** (2 if place.kind == "inert" else 1)
        gcd_N = p if divides_N else 1
        return Certificate("bound", e * gcd_N * mp.mpf(Np) ** (3 * nu_norm_place))
    # split
    nu_pair = valuation(x, place)
    nux, nuxbar = nu_pair
    if not divides_Nprime:
        if nux < 0 or nuxbar < 0:
            return Certificate("zero", 0)
        nu_norm = _nu_rational(x.norm() - 1, p)
        nu1x = min(_nu1(ctx, x, place))
        if p != 2 and nu_norm == 0 and nu1x == 0:
            return Certificate("exact", 1)
        polyval = _poly_invariant(ctx, x, place)
        return Certificate("bound", (1 + polyval) * mp.mpf(p) ** (3 * nu_norm))
    # p | N'
    if nux < -1 or nuxbar < -1:
        return Certificate("zero", 0)
    nu_norm = _nu_rational(x.norm() - 1, p)
    if nux >= 0 and nuxbar >= 0:
        X = x.norm() * ((1 - x) * (1 - x.conj())).norm()  # rational invariant
        b = (
            mp.mpf(p) ** _nu_rational(X, p)
            + mp.mpf(p) ** (nu_norm - 1)
            + mp.mpf(p) ** (2 * nu_norm - 2)
            + mp.mpf(p) ** (2 * nu_norm - 1)
        )
        polyval = _poly_invariant(ctx, x, place)
        return Certificate("bound", (1 + polyval) ** 2 * b)
    # the four boundary cases of the deeper support proposition
    nu1 = _nu1(ctx, x, place)
    b = _split_levelN_bound(p, nux, nuxbar, nu1, nu_norm)
    if b is None:
        return Certificate("zero", 0)
    return Certificate("bound", b)


def _nu_rational(q, p: int) -> int:
    return vp_frac(Fraction(q), p)


def _nu1(ctx: FieldContext, x: QuadNum, place):
    one = ctx.one
    if x == 1:
        return (INF, INF)
    return valuation(one - x, place)


def _poly_invariant(ctx, x, place) -> int:
    """nu(P(x, xbar)) for the bookkeeping polynomial x xbar (1-x)^2 (1-xbar)^2."""
    val = x.norm() * ((1 - x) * (1 - x.conj())).norm()
    if val == 0:
        return 0
    return max(_nu_rational(val, place.p), 0)


def _split_levelN_bound(p: int, nux: int, nuxbar: int, nu1, nu_norm):
    """Combined upper bound of the four cases at p | N' when min valuation
    is -1; None encodes proven vanishing."""
    P = mp.mpf(p)
    nu1x, nu1xbar = nu1
    total = mp.mpf(0)
    hit = False
    # case I
    if nux == -1 and nu1xbar >= 1:
        hit = True
        total += P**-4 if nu1xbar == 1 else P**-2
    # case II
    if nux == -1 and (nuxbar == -1 or (nuxbar == 0 and nu1xbar == 0)):
        hit = True
        total += P**-4 if nuxbar == -1 else P**-3
    # case III
    if nuxbar == -1 and nux >= 0:
        hit = True
        total += P**-3 if nux == 0 else P ** (2 * nu_norm - 1)
    # case IV
    if nux == -1 and nuxbar >= 0:
        hit = True
        if nuxbar == 0 and nu1xbar == 0:
            total += P**-3
        elif nuxbar >= 1:
            total += P ** (2 * nu_norm - 1)
        elif nu1xbar == 1:
            total += P**-3
        else:
            total += nu1xbar * P ** (2 * nu1xbar - 5)
    if not hit:
        return None
    return total
