from fractions import Fraction

import pytest

from besselkit.cosets import (
    An,
    CellWord,
    FastClassifier,
    cartan_split,
    cell_reps,
    enumerate_group,
    group_order,
    hecke_cell_cosets,
    in_iwahori,
    in_k21,
    iwahori_cosets,
    iwahori_factorization_check,
    lambda_table,
    oldform_cosets,
    verify_cell_sweep,
)
from besselkit.fieldarith import field
from besselkit.unitary import form_J, is_unitary, mat_mul


def test_lambda_tables():
    assert lambda_table(3, 1) == {"A": 4, "JA": 1, "AJ": 7, "JAJ": 4}
    assert lambda_table(3, 2) == {"A": 8, "JA": 5, "AJ": 11, "JAJ": 8}
    assert lambda_table(2, 1) == {"A": 2, "JA": 1, "AJ": 3, "JAJ": 2}
    assert CellWord("1", 0, 3).lam == 0
    assert CellWord("J", 0, 3).lam == 3
    assert CellWord("J", 0, 2).lam == 1
    # total |K A_1 K / I'| for 2x2 at p=3: 9 + 3 + 27 + 9 = 48
    assert sum(3**v for v in lambda_table(2, 1).values()) == 48
    # 3x3 at p=2: 16 + 2 + 128 + 16 = 162
    assert sum(2**v for v in lambda_table(3, 1).values()) == 162


def test_measure_constants():
    for p in (2, 3):
        assert Fraction(1, p**3 + 1) == Fraction(1, (p + 1) * (p * p - p + 1))
    # mu(I'_p(1)) = 1/(p^2-1)
    assert Fraction(1, 7**2 - 1) == Fraction(1, 48)


def test_group_orders_p2():
    assert group_order(3, 2, 1, 3) == 648
    assert group_order(3, 2, 1, 3, special=True) == 216
    assert group_order(1, 3, 1, 2) == 96
    assert group_order(1, 3, 1, 2, special=True) == 24
    # 2x2 count divisible by p+1 (Iwahori index)
    assert group_order(1, 3, 1, 2) % 4 == 0


def test_group_fiber_lift():
    elems, R = enumerate_group(3, 2, 2, 3)
    assert len(elems) == 648 * 2**9


def test_iwahori_cosets():
    fam = iwahori_cosets(3, 2, 3)
    assert fam.counts["reps"] == 9 and fam.disjoint and fam.covering
    fam = iwahori_cosets(1, 3, 2)
    assert fam.counts["reps"] == 4 and fam.disjoint and fam.covering
    fam = iwahori_cosets(1, 5, 2)  # split: index 6
    assert fam.counts["reps"] == 6 and fam.disjoint and fam.covering


def test_cell_reps_counts_and_unitarity():
    ctx = field(1)
    J = form_J(ctx, 3)
    for w, n in (("A", 1), ("JA", 1), ("AJ", 1), ("JAJ", 1), ("A", 2)):
        cell = CellWord(w, n, 3)
        reps = cell_reps(ctx, cell, 3)
        assert len(reps) == 3**cell.lam
        assert all(is_unitary(r, J) for r in reps[:50])


def test_cell_sweep_p2():
    for w in ("A", "JA", "AJ", "JAJ"):
        fam = verify_cell_sweep(3, 2, 3, w, 1)
        assert fam.disjoint and fam.covering, (w, fam.counts)
    for w in ("A", "JA", "AJ", "JAJ"):
        fam = verify_cell_sweep(1, 3, 2, w, 1)
        assert fam.disjoint and fam.covering, (w, fam.counts)


def test_cell_sweep_split():
    fam = verify_cell_sweep(1, 5, 2, "A", 1)
    assert fam.disjoint and fam.covering
    assert fam.counts["reps"] == 25


def test_cartan_split():
    fam = cartan_split(3, 2, 3, 1)
    assert fam.disjoint and fam.covering
    assert fam.counts["total"] == 162
    fam = cartan_split(1, 3, 2, 1)
    assert fam.counts["total"] == 48
    assert fam.disjoint and fam.covering


def test_hecke_cells_p2():
    fam = hecke_cell_cosets(3, 2, 1)
    assert fam.counts["computed"] == 18 == 2 * (2**3 + 1)
    assert fam.counts["gamma_family_distinct"] == 1
    assert fam.disjoint and fam.covering


def test_oldform_p2():
    fam = oldform_cosets(3, 2, 1, nsample=200)
    assert fam.counts["index"] == 18
    assert fam.counts["gamma_family"] == 17 == 1 + 2**4
    assert fam.counts["missing_from_gamma"] == 1
    assert fam.disjoint and fam.covering


def test_k21_membership():
    ctx = field(1)
    g = An(ctx, 3, 1, 3)
    assert not in_k21(g, 3, 1)  # not even integral
    from besselkit.unitary import identity

    assert in_k21(identity(ctx, 3), 3, 1)
    assert in_iwahori(identity(ctx, 3), 3)
    assert not in_iwahori(mat_mul(form_J(ctx, 3), identity(ctx, 3)), 3)


def test_iwahori_factorization():
    assert iwahori_factorization_check(3, 2, 3)
    assert iwahori_factorization_check(1, 3, 2)


def test_classifier_keys_complete():
    # Iwahori keys glue elements of one coset and separate different cosets
    from besselkit.cosets import _constrained_pairs, n_of, nbar_of

    ctx = field(1)
    fc = FastClassifier(ctx, 3, 3, prec=16)
    reps = cell_reps(ctx, CellWord("A", 1, 3), 3)
    k0 = fc.iwahori_key(fc.enc(reps[0]))
    assert fc.iwahori_key(fc.enc(reps[1])) != k0
    for d, t in _constrained_pairs(ctx, 3, 1, 1, True)[:4]:
        i_elt = nbar_of(ctx, d, t)      # lower unipotent with entries in pO
        assert in_iwahori(i_elt, 3)
        assert fc.iwahori_key(fc.enc(mat_mul(reps[0], i_elt))) == k0
    for d, t in _constrained_pairs(ctx, 3, 1, 2, False)[:4]:
        i_elt = n_of(ctx, d, t)         # integral upper unipotent
        assert in_iwahori(i_elt, 3)
        assert fc.iwahori_key(fc.enc(mat_mul(reps[0], i_elt))) == k0
