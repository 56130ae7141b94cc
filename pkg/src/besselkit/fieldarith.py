"""Exact arithmetic in an imaginary quadratic field E = Q(sqrt(-D)).

Scalars are pairs of exact rationals; places of Q are classified as
inert / split / ramified in E and each finite place gets a residue-ring
model O_E/p^m suitable for coset enumeration.  All operations are pure and
all values immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

INF = 10 ** 9  # sentinel for the valuation of 0


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def vp_int(n: int, p: int) -> int:
    if n == 0:
        return INF
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_frac(x: Fraction, p: int) -> int:
    if x == 0:
        return INF
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p."""
    a %= p
    if a == 0:
        return 0
    t = pow(a, (p - 1) // 2, p)
    return 1 if t == 1 else -1


class FieldContext:
    """Ambient data of E = Q(sqrt(-D)): discriminant, ring generator, Delta.

    D is a squarefree positive integer.  The fundamental discriminant is
    D_E = -D when D = 3 (mod 4) and -4D otherwise; Delta = i|D_E|^{1/2} is
    the element sqrt(-D) or 2 sqrt(-D) of E generating the different.
    """

    def __init__(self, D: int):
        if D <= 0:
            raise ValueError("D must be a positive integer")
        d = D
        for q in range(2, 200):
            while d % (q * q) == 0:
                raise ValueError("D must be squarefree")
        self.D = D
        self.discriminant = -D if D % 4 == 3 else -4 * D
        # omega generates O_E over Z
        if D % 4 == 3:
            self.omega = (Fraction(1, 2), Fraction(1, 2))  # (1+sqrt(-D))/2
            self._omega_sq = (1, Fraction(-(1 + D), 4))    # omega^2 = omega - (1+D)/4
        else:
            self.omega = (Fraction(0), Fraction(1))
            self._omega_sq = (0, Fraction(-D))
        self.w_E = 4 if D == 1 else (6 if D == 3 else 2)
        self._split_roots: dict = {}

    # ---- elements -------------------------------------------------------

    def elem(self, re, im=0) -> "QuadNum":
        return QuadNum(self, Fraction(re), Fraction(im))

    @property
    def zero(self) -> "QuadNum":
        return self.elem(0)

    @property
    def one(self) -> "QuadNum":
        return self.elem(1)

    @property
    def delta(self) -> "QuadNum":
        """Delta = i |D_E|^{1/2} as an element of E."""
        if self.D % 4 == 3:
            return self.elem(0, 1)
        return self.elem(0, 2)

    def from_omega_coords(self, x, y) -> "QuadNum":
        """Element x + y*omega from integral-basis coordinates."""
        oa, ob = self.omega
        return self.elem(Fraction(x) + Fraction(y) * oa, Fraction(y) * ob)

    def omega_coords(self, z: "QuadNum"):
        """Coordinates (x, y) with z = x + y*omega."""
        oa, ob = self.omega
        y = z.im / ob
        return z.re - y * oa, y

    # ---- places ---------------------------------------------------------

    def classify_place(self, p: int) -> "PlaceKind":
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if self.discriminant % p == 0:
            return PlaceKind(p, "ramified")
        if p == 2:
            # D_E odd here; split iff D_E = 1 (mod 8)
            kind = "split" if self.discriminant % 8 == 1 else "inert"
        else:
            kind = "split" if legendre(self.discriminant, p) == 1 else "inert"
        if kind == "split":
            return PlaceKind(p, "split", self._distinguished_root(p))
        return PlaceKind(p, "inert")

    def _distinguished_root(self, p: int, precision: int = 40) -> int:
        """Hensel lift mod p^precision of the distinguished root r of r^2 = -D.

        Of the two square roots mod p we fix the one lying in (p/2, p); the
        distinguished prime ideal is then (p, sqrt(-D) - r).
        """
        key = (p, precision)
        if key in self._split_roots:
            return self._split_roots[key]
        r0 = next(r for r in range(1, p) if (r * r + self.D) % p == 0 and r > p // 2)
        r = r0
        pk = p
        for _ in range(precision - 1):
            pk *= p
            # Newton step for f(r) = r^2 + D
            r = (r - (r * r + self.D) * pow(2 * r, -1, pk)) % pk
        self._split_roots[key] = r
        return r

    # ---- residue rings --------------------------------------------------

    def residue_ring(self, p: int, m: int) -> "ResidueRing":
        return ResidueRing(self, self.classify_place(p), m)


@dataclass(frozen=True)
class PlaceKind:
    p: int
    kind: str           # 'inert' | 'split' | 'ramified'
    split_root: int = 0  # distinguished Hensel root for split places

    def __repr__(self):
        return f"PlaceKind({self.p}, {self.kind})"


class QuadNum:
    """Exact element re + im*sqrt(-D) of E."""

    __slots__ = ("ctx", "re", "im")

    def __init__(self, ctx: FieldContext, re: Fraction, im: Fraction):
        self.ctx = ctx
        self.re = re
        self.im = im

    def __add__(self, o):
        o = self._coerce(o)
        return QuadNum(self.ctx, self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._coerce(o)
        return QuadNum(self.ctx, self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        o = self._coerce(o)
        D = self.ctx.D
        return QuadNum(
            self.ctx,
            self.re * o.re - D * self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._coerce(o)
        return self * o.inverse()

    def __rtruediv__(self, o):
        return self._coerce(o) / self

    def __neg__(self):
        return QuadNum(self.ctx, -self.re, -self.im)

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            return self.re == o and self.im == 0
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def _coerce(self, o):
        if isinstance(o, QuadNum):
            return o
        return QuadNum(self.ctx, Fraction(o), Fraction(0))

    def conj(self) -> "QuadNum":
        return QuadNum(self.ctx, self.re, -self.im)

    def trace(self) -> Fraction:
        return 2 * self.re

    def norm(self) -> Fraction:
        return self.re * self.re + self.ctx.D * self.im * self.im

    def inverse(self) -> "QuadNum":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of 0 in E")
        return QuadNum(self.ctx, self.re / n, -self.im / n)

    def is_rational(self) -> bool:
        return self.im == 0

    def __repr__(self):
        if self.im == 0:
            return f"{self.re}"
        return f"({self.re}+{self.im}*sqrt(-{self.ctx.D}))"

    def complex_value(self) -> complex:
        import math

        return complex(float(self.re), float(self.im) * math.sqrt(self.ctx.D))


# ---- valuations ---------------------------------------------------------


def valuation(z: QuadNum, place: PlaceKind):
    """Valuation of z at the place(s) over p.

    inert: the normalized valuation nu with nu(p) = 1.
    ramified: the normalized valuation nu_frak with nu_frak(Delta) = 1 (p odd).
    split: the pair (nu_frak(z), nu_frakbar(z)) in the distinguished order.
    """
    p = place.p
    if not z:
        return INF if place.kind != "split" else (INF, INF)
    nrm = vp_frac(z.norm(), p)
    if place.kind == "inert":
        return nrm // 2
    if place.kind == "ramified":
        return nrm
    return _split_valuation(z, place)


def _split_valuation(z: QuadNum, place: PlaceKind):
    ctx, p = z.ctx, place.p
    total = vp_frac(z.norm(), p)
    k = min(vp_frac(z.re, p), vp_frac(z.im, p))
    w = z * Fraction(1, p**k) if k >= 0 else z * Fraction(p ** (-k))
    t = total - 2 * k
    if t == 0:
        return (k, k)
    # w primitive; w in frak^t iff re + im*r = 0 (mod p^t) for the root r
    r = ctx._distinguished_root(p, max(t + 2, 4))
    pt = p**t
    a, b = w.re, w.im
    num = a.numerator * b.denominator + b.numerator * a.denominator * r
    den = a.denominator * b.denominator
    if (num * pow(den, -1, pt)) % pt == 0:
        return (k + t, k)
    return (k, k + t)


def hilbert90(w: QuadNum) -> QuadNum:
    """For w of norm 1, w != 1, return beta with w = beta / conj(beta).

    Deterministic: beta = w + 1 unless w = -1, in which case beta = Delta.
    """
    if w.norm() != 1:
        raise ValueError("hilbert90 requires norm(w) = 1")
    if w == 1:
        raise ValueError("w = 1: use beta = 1 directly")
    if w == -1:
        return w.ctx.delta
    return w + 1


# ---- residue rings ------------------------------------------------------


class ResidueRing:
    """The ring O_E / p^m in the integral basis {1, omega}.

    Elements are pairs of ints mod p^m; conjugation and the reduction map
    from p-integral elements of E are ring homomorphisms.  For split p the
    ring is also presented as (Z/p^m)^2 via `split_pair`.
    """

    def __init__(self, ctx: FieldContext, place: PlaceKind, m: int):
        self.ctx = ctx
        self.place = place
        self.p = place.p
        self.m = m
        self.mod = place.p**m
        # omega^2 = s*omega + t
        if ctx.D % 4 == 3:
            self._s, self._t = 1, -(1 + ctx.D) // 4
        else:
            self._s, self._t = 0, -ctx.D
        # conj(omega) = tr(omega) - omega
        self._tr_omega = self._s  # trace of omega equals s in both cases

    # elements are plain tuples (x, y) meaning x + y*omega

    @property
    def zero(self):
        return (0, 0)

    @property
    def one(self):
        return (1, 0)

    def make(self, x: int, y: int = 0):
        return (x % self.mod, y % self.mod)

    def add(self, a, b):
        return ((a[0] + b[0]) % self.mod, (a[1] + b[1]) % self.mod)

    def sub(self, a, b):
        return ((a[0] - b[0]) % self.mod, (a[1] - b[1]) % self.mod)

    def neg(self, a):
        return ((-a[0]) % self.mod, (-a[1]) % self.mod)

    def mul(self, a, b):
        x1, y1 = a
        x2, y2 = b
        yy = y1 * y2
        return ((x1 * x2 + self._t * yy) % self.mod, (x1 * y2 + y1 * x2 + self._s * yy) % self.mod)

    def conj(self, a):
        x, y = a
        return ((x + self._tr_omega * y) % self.mod, (-y) % self.mod)

    def trace(self, a):
        return (2 * a[0] + self._tr_omega * a[1]) % self.mod

    def norm(self, a):
        return self.mul(a, self.conj(a))[0]

    def is_unit(self, a) -> bool:
        n = self.norm(a)
        return n % self.p != 0

    def inverse(self, a):
        c = self.conj(a)
        n = self.norm(a)
        ninv = pow(n, -1, self.mod)
        return self.mul(c, (ninv, 0))

    def reduce(self, z: QuadNum):
        """Reduction of a p-integral z in E."""
        x, y = self.ctx.omega_coords(z)
        return (self._red_frac(x), self._red_frac(y))

    def _red_frac(self, x: Fraction) -> int:
        if x.denominator % self.p == 0:
            raise ValueError("element is not p-integral")
        return (x.numerator * pow(x.denominator, -1, self.mod)) % self.mod

    def elements(self):
        for x in range(self.mod):
            for y in range(self.mod):
                yield (x, y)

    def val(self, a) -> int:
        """p-adic valuation of the coordinates (depth in O/p^m; INF for 0)."""
        x, y = a[0] % self.mod, a[1] % self.mod
        if x == 0 and y == 0:
            return INF
        return min(vp_int(x, self.p) if x else INF, vp_int(y, self.p) if y else INF)

    def split_pair(self, a):
        """Image of a under the two residue maps at a split place."""
        if self.place.kind != "split":
            raise ValueError("split_pair only at split places")
        r = self.ctx._distinguished_root(self.p, self.m + 2)
        oa, ob = self.ctx.omega
        # sqrt(-D) maps to +r at the distinguished place, -r at its conjugate
        x, y = a
        half = pow(oa.denominator, -1, self.mod) * oa.numerator % self.mod if oa else 0
        wplus = (half + ob.numerator * pow(ob.denominator, -1, self.mod) * r) % self.mod
        wminus = (half - ob.numerator * pow(ob.denominator, -1, self.mod) * r) % self.mod
        return ((x + y * wplus) % self.mod, (x + y * wminus) % self.mod)


@lru_cache(maxsize=32)
def field(D: int) -> FieldContext:
    """Cached field context for the radicand D."""
    return FieldContext(D)
