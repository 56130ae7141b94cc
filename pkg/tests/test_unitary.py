import random
from fractions import Fraction

import pytest

from besselkit.fieldarith import field
from besselkit.unitary import (
    ResidueMat,
    bruhat_classify,
    det,
    embed_gprime,
    embed_stab,
    form_J,
    gamma_of_x,
    gamma_type,
    identity,
    is_unitary,
    mat,
    mat_inv,
    mat_mul,
    n_upper,
    stabilizer_point,
    verify_identity,
)

CTX = field(1)
J3 = form_J(CTX, 3)
J2 = form_J(CTX, 2)


def rand_elem(rnd, den=6):
    return CTX.elem(Fraction(rnd.randint(-8, 8), rnd.randint(1, den)),
                    Fraction(rnd.randint(-8, 8), rnd.randint(1, den)))


def rand_gprime(rnd):
    """Random exact element of G'(Q) from the stabilizer torus and unipotents."""
    while True:
        w = rnd_norm_one(rnd)
        x = rand_elem(rnd)
        if x.norm() != 1:
            break
    h1, _ = stabilizer_point(CTX, x, w)
    z = CTX.elem(0, Fraction(rnd.randint(-4, 4), rnd.randint(1, 4)))
    n = mat([[CTX.one, z], [CTX.zero, CTX.one]])  # needs z + zbar = 0: z imaginary
    return mat_mul(h1, n)


def rnd_norm_one(rnd):
    a = Fraction(rnd.randint(-6, 6), rnd.randint(1, 6))
    beta = CTX.elem(1, a)  # beta/conj(beta) has norm 1
    return beta / beta.conj()


def test_embed_gprime():
    assert embed_gprime(identity(CTX, 2), CTX) == identity(CTX, 3)
    assert embed_gprime(form_J(CTX, 2), CTX) == J3
    rnd = random.Random(1)
    for _ in range(20):
        g = rand_gprime(rnd)
        assert is_unitary(g, J2)
        G = embed_gprime(g, CTX)
        assert is_unitary(G, J3)
        assert G[1][1] == CTX.one
    with pytest.raises(ValueError):
        embed_gprime(mat([[CTX.elem(2), CTX.zero], [CTX.zero, CTX.one]]), CTX)


def test_unitary_closure():
    rnd = random.Random(2)
    for _ in range(500):
        g = embed_gprime(rand_gprime(rnd), CTX)
        h = gamma_of_x(CTX, rand_elem(rnd))
        assert is_unitary(mat_mul(g, h), J3)
        assert is_unitary(mat_inv(h), J3)


def test_unitary_closure_residue():
    from besselkit.cosets import cell_reps, CellWord

    for (D, p) in ((1, 3), (2, 5)):
        ctx = field(D)
        ring = ctx.residue_ring(p, 2)
        rm = ResidueMat(ring)
        reps = cell_reps(ctx, CellWord("J", 0, 3), p)[:12]
        red = [rm.reduce(r) for r in reps]
        Jr = rm.form_J(3)
        rnd = random.Random(3)
        for _ in range(250):
            a, b = rnd.choice(red), rnd.choice(red)
            assert rm.is_unitary(rm.mat_mul(a, b), Jr)


def test_gamma_of_x():
    for x in (CTX.one, CTX.zero, CTX.elem(2), CTX.elem(Fraction(1, 2), Fraction(3, 7))):
        g = gamma_of_x(CTX, x)
        assert is_unitary(g, J3)
        assert g[1][1] == x
    g1 = gamma_of_x(CTX, CTX.one)
    assert g1 == mat([
        [CTX.one, CTX.one, CTX.elem(Fraction(-1, 2))],
        [CTX.zero, CTX.one, -CTX.one],
        [CTX.zero, CTX.zero, CTX.one],
    ])
    g2 = gamma_of_x(CTX, CTX.elem(2))
    assert g2[0][0] == CTX.elem(Fraction(4 + 6 - 2 + 1, 4))
    assert gamma_type(CTX.elem(2)) == "regular"
    assert gamma_type(CTX.elem(0, 1)) == "unipotent"


def test_bruhat():
    z, o = CTX.zero, CTX.one
    up = mat([[o, o, CTX.elem(Fraction(-1, 2))], [z, o, -o], [z, z, o]])
    cell, _, _ = bruhat_classify(up, CTX)
    assert cell == "P"
    cell, n, p = bruhat_classify(J3, CTX)
    assert cell == "PJP" and n == identity(CTX, 3)
    assert mat_mul(J3, p) == J3  # p = identity up to J-multiplication
    rnd = random.Random(4)
    for _ in range(20):
        x = rand_elem(rnd)
        g = mat_mul(gamma_of_x(CTX, x), J3)
        cell, n, p = bruhat_classify(g, CTX)
        assert cell == "PJP"
        assert mat_mul(n, mat_mul(J3, p)) == g
        # uniqueness: the witness pieces are in the right subgroups
        assert n[1][0] == z and n[2][0] == z and n[2][1] == z and n[0][0] == o
        assert p[1][0] == z and p[2][0] == z and p[2][1] == z


def test_stabilizer():
    rnd = random.Random(5)
    for _ in range(12):
        x = rand_elem(rnd)
        if x.norm() == 1 or not x:
            continue
        gJ = mat_mul(gamma_of_x(CTX, x), J3)
        for w in (CTX.elem(-1), CTX.elem(0, 1), rnd_norm_one(rnd)):
            h1, h2 = stabilizer_point(CTX, x, w)
            assert det(h1) == w and det(h2) == w
            assert is_unitary(h1, J2) and is_unitary(h2, J2)
            U, V = embed_stab(CTX, h1), embed_stab(CTX, h2)
            assert mat_mul(mat_inv(U), mat_mul(gJ, V)) == gJ
        # group law (Cor 35-type)
        u1, u2 = rnd_norm_one(rnd), rnd_norm_one(rnd)
        a1, _ = stabilizer_point(CTX, x, u1)
        b1, _ = stabilizer_point(CTX, x, u2)
        c1, _ = stabilizer_point(CTX, x, u1 * u2)
        assert mat_mul(a1, b1) == c1
    e1, e2 = stabilizer_point(CTX, CTX.elem(2), CTX.one)
    assert e1 == identity(CTX, 2) and e2 == identity(CTX, 2)
    with pytest.raises(ValueError):
        stabilizer_point(CTX, CTX.elem(0, 1), CTX.elem(-1))


def test_identities():
    assert verify_identity(CTX, 36, c=CTX.elem(Fraction(-1, 2), Fraction(1, 4)))
    assert verify_identity(CTX, 38, c=CTX.elem(Fraction(-1, 2), Fraction(2, 3)))
    assert verify_identity(CTX, 39, x=CTX.elem(2))
    assert verify_identity(CTX, 39, x=CTX.elem(Fraction(-3, 5), Fraction(1, 7)))
    assert verify_identity(CTX, 42, x2=CTX.elem(0, 1), alpha=CTX.elem(-1))
    assert verify_identity(CTX, 42, x2=CTX.elem(2),
                           alpha=CTX.elem(Fraction(3, 5), Fraction(4, 5)))
    with pytest.raises(ValueError):
        verify_identity(CTX, 36, c=CTX.one)


def test_n_upper_constraint():
    b = CTX.elem(1, 1)
    z = CTX.elem(-1, 5)  # trace -2 = -N(b) = -(1+1)
    n = n_upper(CTX, b, z)
    assert is_unitary(n, J3)
    with pytest.raises(ValueError):
        n_upper(CTX, b, CTX.one)
