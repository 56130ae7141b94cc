import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from besselkit.fieldarith import INF, field, hilbert90, valuation

CTX = field(1)
CTX3 = field(3)

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=40)


@settings(max_examples=300, deadline=None)
@given(rationals, rationals, rationals, rationals)
def test_ring_laws(a, b, c, d):
    z = CTX.elem(a, b)
    w = CTX.elem(c, d)
    assert z.conj().conj() == z
    assert (z + w).conj() == z.conj() + w.conj()
    assert (z * w).conj() == z.conj() * w.conj()
    assert (z * w).norm() == z.norm() * w.norm()
    assert (z + w).trace() == z.trace() + w.trace()
    assert z.norm() >= 0
    if z:
        assert z * z.inverse() == CTX.one


def test_norm_zero_iff_zero():
    assert CTX.zero.norm() == 0
    assert CTX.elem(0, Fraction(1, 7)).norm() > 0


def test_delta_invariants():
    for ctx in (CTX, CTX3, field(2), field(5)):
        d = ctx.delta
        assert d.trace() == 0
        assert d.norm() == abs(ctx.discriminant)


def test_classify_place_examples():
    assert CTX.classify_place(3).kind == "inert"
    assert CTX.classify_place(2).kind == "ramified"
    assert CTX.classify_place(5).kind == "split"
    assert CTX3.classify_place(2).kind == "inert"
    assert CTX3.classify_place(3).kind == "ramified"
    with pytest.raises(ValueError):
        CTX.classify_place(6)


def test_valuation_examples():
    p3 = CTX.classify_place(3)
    assert valuation(CTX.elem(3), p3) == 1
    p2 = CTX.classify_place(2)
    assert valuation(CTX.delta, p2) == valuation(CTX.elem(0, 2), p2)
    # Delta generates the ramified prime at odd ramified p
    ctx5 = field(5)
    assert valuation(ctx5.delta, ctx5.classify_place(5)) == 1
    p5 = CTX.classify_place(5)
    assert valuation(CTX.elem(2, 1), p5) == (1, 0)
    assert valuation(CTX.elem(2, -1), p5) == (0, 1)
    assert valuation(CTX.zero, p3) == INF


def test_split_valuation_consistency():
    p5 = CTX.classify_place(5)
    rnd = random.Random(5)
    for _ in range(200):
        z = CTX.elem(Fraction(rnd.randint(-40, 40), rnd.choice((1, 2, 5))),
                     Fraction(rnd.randint(-40, 40), rnd.choice((1, 5))))
        if not z:
            continue
        a, b = valuation(z, p5)
        total = z.norm()
        v = 0
        n, d = total.numerator, total.denominator
        while n % 5 == 0:
            n //= 5
            v += 1
        while d % 5 == 0:
            d //= 5
            v -= 1
        assert a + b == v
        zb = z.conj()
        assert valuation(zb, p5) == (b, a)


def test_hilbert90():
    w = CTX.elem(Fraction(3, 5), Fraction(4, 5))
    beta = hilbert90(w)
    assert beta == CTX.elem(Fraction(8, 5), Fraction(4, 5))
    assert beta / beta.conj() == w
    assert w * beta.conj() == beta
    assert hilbert90(CTX.elem(0, 1)) == CTX.elem(1, 1)
    assert hilbert90(CTX.elem(-1)) == CTX.delta
    with pytest.raises(ValueError):
        hilbert90(CTX.one)
    with pytest.raises(ValueError):
        hilbert90(CTX.elem(2))


def test_reduction_homomorphism():
    rnd = random.Random(11)
    for D in (1, 3, 2):
        ctx = field(D)
        for p in (2, 3, 5, 7):
            for m in (1, 2, 3, 4):
                try:
                    ring = ctx.residue_ring(p, m)
                except ValueError:
                    continue
                for _ in range(25):
                    z = ctx.from_omega_coords(rnd.randint(-60, 60), rnd.randint(-60, 60))
                    w = ctx.from_omega_coords(rnd.randint(-60, 60), rnd.randint(-60, 60))
                    assert ring.reduce(z + w) == ring.add(ring.reduce(z), ring.reduce(w))
                    assert ring.reduce(z * w) == ring.mul(ring.reduce(z), ring.reduce(w))
                    assert ring.reduce(z.conj()) == ring.conj(ring.reduce(z))


def test_residue_units_and_split_pair():
    ring = CTX.residue_ring(5, 2)
    a = ring.reduce(CTX.elem(2, 1))
    assert not ring.is_unit(a)  # 2+i has positive valuation at the split place
    u = ring.reduce(CTX.elem(1, 1))
    assert ring.is_unit(u)
    assert ring.mul(u, ring.inverse(u)) == ring.one
    plus, minus = ring.split_pair(a)
    assert plus % 5 == 0 and minus % 5 != 0


def test_squarefree_rejected():
    with pytest.raises(ValueError):
        field.__wrapped__(4)
