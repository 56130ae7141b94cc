"""The acceptance battery: one callable per criterion, each returning report
records; `run_suite` strings them together for the CLI and the test suite.

Criterion runtimes are kept inside the stated budgets (coset atlas under
five minutes, the whole battery well under thirty).
"""

from __future__ import annotations

import math
import random
import time
from fractions import Fraction

import mpmath as mp

from . import arch, cosets, lfunc, orbital, periods, spherical
from .fieldarith import field
from .report import record


def _rec(op, inputs, value, target, passed, t0, eq_tag, bound=None):
    return record(op, inputs, value, target, bound, bool(passed),
                  (time.time() - t0) * 1000, eq_tag)


# ---- criterion 1: coset atlas ----------------------------------------------------


def crit_coset_atlas(quick: bool = False) -> list:
    out = []
    jobs3 = [(3, 2)] if quick else [(3, 2), (1, 3)]
    jobs2 = [(1, 3)] if quick else [(1, 3), (2, 5)]
    for D, p in jobs3:
        t0 = time.time()
        fam = cosets.iwahori_cosets(D, p, 3)
        out.append(_rec("cosets.iwahori", {"D": D, "p": p, "size": 3},
                        fam.counts, p**3 + 1,
                        fam.disjoint and fam.covering and fam.counts["reps"] == p**3 + 1,
                        t0, "iwahori-index-3x3"))
    for D, p in jobs2:
        t0 = time.time()
        fam = cosets.iwahori_cosets(D, p, 2)
        out.append(_rec("cosets.iwahori", {"D": D, "p": p, "size": 2},
                        fam.counts, p + 1,
                        fam.disjoint and fam.covering and fam.counts["reps"] == p + 1,
                        t0, "iwahori-index-2x2"))
    # split 2x2 maximal-compact decomposition
    t0 = time.time()
    fam = cosets.iwahori_cosets(1, 5, 2)
    out.append(_rec("cosets.iwahori", {"D": 1, "p": 5, "size": 2, "kind": "split"},
                    fam.counts, 6, fam.disjoint and fam.covering, t0,
                    "iwahori-index-2x2-split"))
    words = ("A", "JA", "AJ", "JAJ")
    cell_jobs = [(3, 2, 3), (1, 3, 2)] if quick else [(3, 2, 3), (1, 3, 3), (1, 3, 2), (2, 5, 2), (1, 5, 2)]
    for D, p, size in cell_jobs:
        for w in words:
            t0 = time.time()
            fam = cosets.verify_cell_sweep(D, p, size, w, 1)
            out.append(_rec("cosets.cell", {"D": D, "p": p, "size": size, "word": w, "n": 1},
                            fam.counts, fam.counts["expected"],
                            fam.disjoint and fam.covering, t0, "iwahori-cell-size"))
        # n = 2: exact counts (delta-exhaustive, tau-fibers verified on
        # samples); key-disjointness re-checked when the family is small
        for w in words:
            t0 = time.time()
            cc = cosets.cell_count(D, p, size, w, 2)
            ok = cc["count"] == cc["expected"] and cc["fiber_checked"]
            if cc["count"] <= 1500:
                ctx = field(D)
                reps = cosets.cell_reps(ctx, cosets.CellWord(w, 2, size), p)
                eng = cosets.FastClassifier(ctx, p, size, prec=24)
                keys = {eng.iwahori_key(eng.enc(r)) for r in reps}
                ok = ok and len(keys) == len(reps) == cc["count"]
            out.append(_rec("cosets.cell", {"D": D, "p": p, "size": size, "word": w, "n": 2},
                            cc["count"], cc["expected"], ok, t0, "iwahori-cell-size"))
        t0 = time.time()
        fam = cosets.cartan_split(D, p, size, 1)
        out.append(_rec("cosets.cartan", {"D": D, "p": p, "size": size, "n": 1},
                        fam.counts, fam.counts["expected_total"],
                        fam.disjoint and fam.covering, t0, "cartan-iwahori-merge"))
    hecke_jobs = [(3, 2)] if quick else [(3, 2), (1, 3)]
    for D, p in hecke_jobs:
        t0 = time.time()
        fam = cosets.hecke_cell_cosets(D, p, 1)
        out.append(_rec("cosets.hecke", {"D": D, "p": p, "n": 1}, fam.counts,
                        p * (p**3 + 1), fam.disjoint and fam.covering, t0, "hecke-cell-cosets"))
        t0 = time.time()
        fam = cosets.oldform_cosets(D, p, 1, nsample=150 if quick else 600)
        out.append(_rec("cosets.oldform", {"D": D, "p": p, "n": 1}, fam.counts,
                        p * (p**3 + 1), fam.disjoint and fam.covering, t0, "oldform-cosets"))
    t0 = time.time()
    ok = cosets.iwahori_factorization_check(3, 2, 3)
    out.append(_rec("cosets.iwafact", {"D": 3, "p": 2}, ok, True, ok, t0, "iwahori-factorization"))
    return out


# ---- criterion 2: group orders -----------------------------------------------------


def crit_group_orders(quick: bool = False) -> list:
    out = []
    jobs = [(3, 2, 216, 648)] if quick else [(3, 2, 216, 648), (1, 3, 6048, 24192)]
    for D, p, su, gu in jobs:
        t0 = time.time()
        full = cosets.group_order(D, p, 1, 3)
        det1 = cosets.group_order(D, p, 1, 3, special=True)
        formula = p**3 * (p**2 - 1) * (p**3 + 1)
        ok = det1 == su == formula and full == gu == (p + 1) * formula
        out.append(_rec("cosets.group_order", {"D": D, "p": p},
                        {"full": full, "det1": det1}, {"det1": su, "full": gu},
                        ok, t0, "unitary-group-order"))
    return out


# ---- criteria 3-5: archimedean ------------------------------------------------------


def crit_arch_coeff(quick: bool = False, seed: int = 20260808) -> list:
    import numpy as np

    out = []
    rng = np.random.default_rng(seed)
    trials = 5 if quick else 20
    t0 = time.time()
    worst = 0.0
    for _ in range(trials):
        g = arch.random_su21_point(rng, max_norm=2.6)
        k2 = int(rng.integers(1, 7))
        k1 = -(k2 + 2 + int(rng.integers(1, 7)))
        closed = arch.matrix_coeff_su21(g, k1, k2)
        quad = arch.matrix_coeff_su21_quad(g, k1, k2, arch.QuadratureSpec(64))
        err = abs(closed - quad) / abs(closed)
        if err > 1e-8:
            quad = arch.matrix_coeff_su21_quad(g, k1, k2, arch.QuadratureSpec(128))
            err = abs(closed - quad) / abs(closed)
        worst = max(worst, err)
    out.append(_rec("arch.coeff_quadrature", {"trials": trials}, worst, 0.0,
                    worst <= 1e-8, t0, "su21-coefficient-pairing", bound=1e-8))
    t0 = time.time()
    ok = True
    rnd = random.Random(seed)
    for _ in range(20):
        a, b, c = (Fraction(rnd.randint(-6, 6)), Fraction(rnd.randint(-6, 6)),
                   Fraction(rnd.randint(-6, 6)))
        # complete to det 1: pick d with ad - bc = 1 where possible
        if a == 0:
            a = Fraction(1)
        d = (1 + b * c) / a
        re, im = arch.restriction_bracket_exact(((a, b), (c, d)))
        ok = ok and (re, im) == (a + d, c - b)
        v1 = arch.f_infinity(arch.iota_E(((float(a), float(b)), (float(c), float(d))), 4.0), 16, 4.0)
        v2 = arch.restrict_to_sl2(((float(a), float(b)), (float(c), float(d))), 16)
        ok = ok and abs(v1 - v2) <= 1e-9 * max(1.0, abs(v2))
    out.append(_rec("arch.restriction", {"trials": 20}, ok, True, ok, t0,
                    "sl2-restriction-identity"))
    return out


def crit_schur(quick: bool = False) -> list:
    t0 = time.time()
    v = arch.schur_norm_quad(16)
    err = abs(v - 1 / 15)
    return [_rec("arch.schur_norm", {"k": 16}, v, 1 / 15, err <= 1e-4, t0,
                 "formal-degree-orthogonality", bound=1e-4)]


def crit_unip_arch(quick: bool = False) -> list:
    out = []
    for n in (1, 2):
        t0 = time.time()
        r = arch.unip_orbital_arch(16, n, 4.0, nodes=80 if quick else 120)
        out.append(_rec("arch.unip_orbital", {"k": 16, "n": n}, r["rel_error"], 0.0,
                        r["rel_error"] <= 1e-4, t0, "unipotent-arch-integral", bound=1e-4))
    t0 = time.time()
    dup = float(arch.duplication_check(16))
    out.append(_rec("arch.duplication", {"k": 16}, dup, 0.0, dup <= 1e-20, t0,
                    "gamma-duplication", bound=1e-20))
    return out


# ---- criterion 6: local periods ------------------------------------------------------


def crit_local_periods(quick: bool = False) -> list:
    out = []
    a, b = spherical.unit_param(mp.mpf(4) / 5), spherical.unit_param(-mp.mpf(13) / 10)
    t0 = time.time()
    r = periods.local_period_unramified(3, a, b, "inert")
    out.append(_rec("period.unramified", {"p": 3, "kind": "inert"},
                    abs(mp.mpc(r.value) - 1), 0.0, r.passed, t0,
                    "period-unramified", bound=r.bound + r.tail))
    t0 = time.time()
    r = periods.local_period_unramified(5, a, b, "split", n_max=24 if quick else 34)
    out.append(_rec("period.unramified", {"p": 5, "kind": "split"},
                    abs(mp.mpc(r.value) - 1), 0.0, r.passed, t0,
                    "period-unramified", bound=r.bound + r.tail))
    t0 = time.time()
    r = periods.local_period_ramified(3, a, b)
    out.append(_rec("period.ramified", {"p": 3}, abs(mp.mpc(r.value) - 1), 0.0,
                    r.passed, t0, "period-ramified", bound=r.bound))
    for p in (3, 5):
        t0 = time.time()
        r = periods.local_period_inert_steinberg(p, b)
        out.append(_rec("period.inert_steinberg", {"p": p},
                        float(abs(mp.mpc(r.value) - mp.mpf(r.target))), 0.0, r.passed, t0,
                        "period-steinberg-window", bound=r.bound))
    t0 = time.time()
    chi = (a, mp.mpc(1), 1 / a)
    r = periods.local_period_split_levelNprime(7, chi, n_max=16 if quick else 24)
    out.append(_rec("period.split_levelNprime", {"p": 7},
                    {"deviation": r.extra["deviation"], "cancellations": r.extra["cancellations"]},
                    str(r.extra["mu_Ip1"]), r.passed, t0, "period-split-level",
                    bound=r.extra["paper_bound"]))
    return out


# ---- criterion 7: unipotent local orbitals --------------------------------------------


def crit_unip_local(quick: bool = False) -> list:
    out = []
    t0 = time.time()
    a = spherical.unit_param(mp.mpf(61) / 100)
    ok_support = True
    for case in ("unram-split", "unram-inert", "N-coprime", "N-divides", "ramified", "Nprime"):
        for p in (3, 5):
            for nu in range(-3, 4):
                c = orbital.unip_orbital_p(case, p, nu, a)
                if nu < 0 and c.kind != "zero":
                    ok_support = False
                if case == "N-divides" and nu == 0 and c.kind != "zero":
                    ok_support = False
                if case == "ramified" and nu <= 2 and c.kind != "zero":
                    ok_support = False
    out.append(_rec("orbital.unip_support", {"grid": "p in {3,5}, nu in [-3,3]"},
                    ok_support, True, ok_support, t0, "unipotent-support"))
    t0 = time.time()
    v1 = orbital.unip_orbital_p("unram-split", 5, 0, a)
    v2 = orbital.unip_orbital_p("N-coprime", 3, 0, a)
    ok = v1.kind == "exact" and v1.value == 1 and v2.value == Fraction(7, 4)
    out.append(_rec("orbital.unip_values", {}, {"split0": str(v1.value), "Ncoprime": str(v2.value)},
                    {"split0": 1, "Ncoprime": "7/4"}, ok, t0, "unipotent-values"))
    return out


# ---- criterion 8: regular -------------------------------------------------------------


def crit_regular(quick: bool = False) -> list:
    out = []
    ctx = field(1)
    t0 = time.time()
    count = 0
    ok = True
    M = 1  # ell * N' = 1
    N = 3
    lim = 52
    for aa in range(-lim, lim + 1):
        for bb in range(-lim, lim + 1):
            x = ctx.from_omega_coords(aa, bb)
            nx = x.norm()
            if nx == 1:
                continue
            member = (nx - 1) % N == 0
            got = orbital.regular_support_test(x, N, 1, 1)
            if got != member:
                ok = False
            count += 1
    out.append(_rec("orbital.regular_support", {"count": count}, ok, True,
                    ok and count >= 10_000, t0, "regular-support-criterion"))
    t0 = time.time()
    c = orbital.regular_local_eval(ctx, 7, ctx.elem(2))
    ok = c.kind == "exact" and c.value == 1
    out.append(_rec("orbital.regular_generic", {"p": 7, "x": "2"}, str(c.value), 1,
                    ok, t0, "regular-generic-value"))
    for x in (2 + 0j, 3j, 0.5 + 2j):
        t0 = time.time()
        r = arch.regular_arch_integral(x, 32, arch.QuadratureSpec(32 if quick else 40))
        out.append(_rec("arch.regular_integral", {"x": str(x), "k": 32},
                        r["value"], r["bound"], r["value"] <= 100 * r["bound"], t0,
                        "regular-arch-bound", bound=100 * r["bound"]))
    return out


# ---- criterion 9: Hecke / Sato-Tate ------------------------------------------------------


def crit_hecke_satotate(quick: bool = False, seed: int = 20260808) -> list:
    out = []
    rnd = random.Random(seed)
    t0 = time.time()
    ok = True
    trials = 200 if quick else 1000
    for _ in range(trials):
        a = spherical.unit_param(rnd.uniform(0, 2 * math.pi))
        lam = lambda r: lfunc.hecke_lambda_pi(a, 7, r)
        if abs(lam(1) ** 2 - (lam(2) + lam(1) / 7 + 1)) > 1e-30:
            ok = False
        # |lambda(p^r)| <= r+1+r/p; the r+2 form needs r <= p, so test at p=11
        lam11 = lambda r: lfunc.hecke_lambda_pi(a, 11, r)
        for r in range(11):
            if abs(lam11(r)) > r + 2 + 1e-25:
                ok = False
    out.append(_rec("lfunc.hecke_recursion", {"trials": trials}, ok, True, ok, t0,
                    "hecke-recursion-deligne"))
    t0 = time.time()
    worst = mp.mpf(0)
    rmax = 4 if quick else 6
    for i in range(rmax + 1):
        for j in range(rmax + 1):
            f = lambda x: lfunc.chebyshev_C(i, x) * lfunc.chebyshev_C(j, x) * lfunc.st_density(x)
            v = mp.quad(f, [-2, 2])
            worst = max(worst, abs(v - (1 if i == j else 0)))
    out.append(_rec("lfunc.chebyshev_orthonormality", {"rmax": rmax}, float(worst), 0.0,
                    worst <= 1e-10, t0, "chebyshev-orthonormality", bound=1e-10))
    t0 = time.time()
    worst = mp.mpf(0)
    lams = [0.0, 1.0] if quick else [-2.0, -1.0, 0.0, 1.0, 2.0, float(mp.sqrt(2))]
    ps = (3, 5) if quick else (3, 5, 7)
    for p in ps:
        for lamv in lams:
            for r in range(0, (4 if quick else 6) + 1):
                m = lfunc.sato_tate_moment(p, lamv, r)
                worst = max(worst, m["error"])
    out.append(_rec("lfunc.sato_tate_moment", {"ps": list(ps)}, float(worst), 0.0,
                    worst <= 1e-8, t0, "weighted-moment-identity", bound=1e-8))
    t0 = time.time()
    ok = True
    trials = 2000 if quick else 10_000
    for _ in range(trials):
        a = spherical.unit_param(rnd.uniform(0, 2 * math.pi))
        lam1 = complex(lfunc.hecke_lambda_pi(a, 101, 1)).real
        lam2 = complex(lfunc.hecke_lambda_pi(a, 101, 2)).real
        r = lfunc.amplifier_select(lam1, lam2, 101, tol=1e-12)
        if abs((lam1, lam2)[r - 1]) < 0.5:
            ok = False
    out.append(_rec("lfunc.amplifier", {"trials": trials}, ok, True, ok, t0,
                    "amplifier-guarantee"))
    return out


# ---- criterion 10: L-data -----------------------------------------------------------------


def crit_ldata(quick: bool = False) -> list:
    out = []
    t0 = time.time()
    c = lfunc.conductor_and_sign(3, 7)
    ok = c["Cf"] == 9529569 and c["eps"] == 1 and c["arch_parameter_sum"] == 0
    out.append(_rec("lfunc.conductor", {"N": 3, "Nprime": 7},
                    {"Cf": c["Cf"], "eps": c["eps"]}, {"Cf": 9529569, "eps": 1},
                    ok, t0, "conductor-root-number"))
    t0 = time.time()
    ok = (
        lfunc.psi_of_N(5) == Fraction(21, 25)
        and lfunc.siegel_of_Nprime(7) == Fraction(49, 48)
        and lfunc.formal_degree_dlambda(32) == Fraction(54808, 3)
        and lfunc.formal_degree_dk(32) == 31
        and lfunc.w_E_of(1) == 4 and lfunc.w_E_of(3) == 6 and lfunc.w_E_of(2) == 2
    )
    out.append(_rec("lfunc.main_term_constants", {},
                    {"Psi(5)": "21/25", "S(7)": "49/48", "dL(32)": "54808/3"},
                    None, ok, t0, "main-term-constants"))
    return out


CRITERIA = [
    ("1 coset atlas", crit_coset_atlas),
    ("2 group orders", crit_group_orders),
    ("3 arch coefficients", crit_arch_coeff),
    ("4 Schur / formal degree", crit_schur),
    ("5 unipotent arch integral", crit_unip_arch),
    ("6 local periods", crit_local_periods),
    ("7 unipotent local orbitals", crit_unip_local),
    ("8 regular integrals", crit_regular),
    ("9 Hecke / Sato-Tate", crit_hecke_satotate),
    ("10 L-data", crit_ldata),
]


def run_suite(quick: bool = False, seed: int = 20260808, verbose=print) -> tuple:
    """Run the battery; returns (records, all_passed)."""
    random.seed(seed)
    all_records = []
    all_ok = True
    for name, fn in CRITERIA:
        t0 = time.time()
        try:
            recs = fn(quick) if "seed" not in fn.__code__.co_varnames else fn(quick, seed)
        except Exception as exc:  # a crashed criterion is a failed criterion
            recs = [record(f"criterion.{name}", {}, str(exc), None, None, False,
                            (time.time() - t0) * 1000, "crash")]
        ok = all(r["pass"] for r in recs)
        all_ok = all_ok and ok
        verbose(f"[{'PASS' if ok else 'FAIL'}] criterion {name}  "
                f"({len(recs)} checks, {time.time() - t0:.1f}s)")
        all_records.extend(recs)
    return all_records, all_ok
