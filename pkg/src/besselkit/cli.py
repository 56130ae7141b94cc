"""Command line driver.

Subcommands: cosets, spherical, period, orbital, regular, arch, lfunc,
satotate, amplify, suite, report.  Output is JSON (default) or CSV on
stdout; exit status is nonzero iff an asserted check fails.
"""

from __future__ import annotations

import argparse
import sys
import time

import mpmath as mp

from . import arch, cosets, lfunc, orbital, periods, spherical
from .config import RunConfig, load_config
from .fieldarith import field, valuation
from .report import emit_csv, emit_json, record


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="besselkit", allow_abbrev=False,
                                 description="verification toolkit for local "
                                             "unitary-group period computations")
    ap.add_argument("--config", default=None)
    ap.add_argument("--digits", type=int, default=None)
    ap.add_argument("--nmax", type=int, default=None)
    ap.add_argument("--nodes", type=int, default=None)
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--format", dest="fmt", choices=("json", "csv"), default=None)
    ap.add_argument("--field-d", dest="D", type=int, default=None,
                    help="radicand D of E = Q(sqrt(-D))")
    sub = ap.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("cosets")
    cs = c.add_subparsers(dest="sub", required=True)
    cv = cs.add_parser("verify")
    cv.add_argument("--lemma", required=True,
                    choices=("iwahori", "cell", "cartan", "hecke", "oldform", "order"))
    cv.add_argument("--p", type=int, required=True)
    cv.add_argument("--n", type=int, default=1)
    cv.add_argument("--size", type=int, default=3, choices=(2, 3))
    cv.add_argument("--word", default="A", choices=("A", "JA", "AJ", "JAJ"))
    cv.add_argument("--depth", type=int, default=None)

    s = sub.add_parser("spherical")
    ss = s.add_subparsers(dest="sub", required=True)
    se = ss.add_parser("eval")
    se.add_argument("--formula", required=True, choices=("u2", "u3", "gl3", "cs", "steinberg"))
    se.add_argument("--p", type=int, required=True)
    se.add_argument("--n", type=int, default=1)
    se.add_argument("--params", default="0.5", help="angles (radians) of the unit-circle "
                                                    "Satake parameters, comma separated")
    se.add_argument("--coweight", default="1,0,-1")
    se.add_argument("--word", default="J", choices=("1", "J", "A", "JA", "AJ", "JAJ"))
    se.add_argument("--i", type=int, default=0, help="torus exponent for the cs formula")

    pd = sub.add_parser("period")
    pds = pd.add_subparsers(dest="sub", required=True)
    pl = pds.add_parser("local")
    pl.add_argument("--case", required=True, choices=("unram", "ram", "inert", "splitN"))
    pl.add_argument("--p", type=int, required=True)
    pl.add_argument("--kind", default="inert", choices=("inert", "split"))
    pl.add_argument("--params", default="0.8,-1.3")

    ob = sub.add_parser("orbital")
    obs = ob.add_subparsers(dest="sub", required=True)
    ou = obs.add_parser("unip")
    ou.add_argument("--case", required=True,
                    choices=("unram-split", "unram-inert", "N-coprime", "N-divides",
                             "ramified", "Nprime"))
    ou.add_argument("--p", type=int, required=True)
    ou.add_argument("--nu-n", dest="nu_n", type=int, required=True)
    ou.add_argument("--params", default="0.61")

    rg = sub.add_parser("regular")
    rgs = rg.add_subparsers(dest="sub", required=True)
    rs = rgs.add_parser("support")
    rs.add_argument("--x", required=True, help="element a+b*sqrt(-D) as 'a,b'")
    rs.add_argument("--N", type=int, default=1)
    rs.add_argument("--Nprime", type=int, default=1)
    rs.add_argument("--ell", type=int, default=1)
    rx = rgs.add_parser("xiset")
    rx.add_argument("--N", type=int, default=1)
    rx.add_argument("--Nprime", type=int, default=1)
    rx.add_argument("--ell", type=int, default=1)
    rx.add_argument("--bound", type=float, default=10.0)
    re_ = rgs.add_parser("eval")
    re_.add_argument("--x", required=True)
    re_.add_argument("--p", type=int, required=True)
    re_.add_argument("--divides-N", action="store_true")
    re_.add_argument("--divides-Nprime", action="store_true")
    re_.add_argument("--hecke-r", type=int, default=0)

    ar = sub.add_parser("arch")
    ars = ar.add_subparsers(dest="sub", required=True)
    ac = ars.add_parser("coeff")
    ac.add_argument("--k1", type=int, default=-8)
    ac.add_argument("--k2", type=int, default=4)
    ars.add_parser("whittaker").add_argument("--k", type=int, default=16)
    au = ars.add_parser("unip")
    au.add_argument("--k", type=int, default=16)
    au.add_argument("--n", type=int, default=1)
    arg = ars.add_parser("regular")
    arg.add_argument("--x", default="2,0")
    arg.add_argument("--k", type=int, default=32)
    ah = ars.add_parser("helper")
    ah.add_argument("--kind", type=int, default=1, choices=(1, 2))
    ah.add_argument("--A", type=float, default=4.0)
    ah.add_argument("--B", type=float, default=1.0)
    ah.add_argument("--C", type=float, default=1.0)
    ah.add_argument("--m", type=int, default=3)

    lf = sub.add_parser("lfunc")
    lfs = lf.add_subparsers(dest="sub", required=True)
    lg = lfs.add_parser("gamma")
    lg.add_argument("--k", type=int, default=32)
    lg.add_argument("--s", default="0.5")
    lc = lfs.add_parser("conductor")
    lc.add_argument("--N", type=int, required=True)
    lc.add_argument("--Nprime", type=int, required=True)
    le = lfs.add_parser("euler")
    le.add_argument("--kind", required=True, choices=("rs", "adjoint2", "adjoint3", "deltaG"))
    le.add_argument("--p", type=int, required=True)
    le.add_argument("--place", required=True, choices=("inert", "split", "ramified"))
    le.add_argument("--params", default="0.8,-1.3")
    le.add_argument("--s", default="0.5")
    lm = lfs.add_parser("mainterm")
    lm.add_argument("--k", type=int, required=True)
    lm.add_argument("--N", type=int, required=True)
    lm.add_argument("--Nprime", type=int, required=True)
    lm.add_argument("--ell", type=int, default=1)
    lm.add_argument("--lam-ell", type=float, default=1.0)

    st = sub.add_parser("satotate")
    sts = st.add_subparsers(dest="sub", required=True)
    sm = sts.add_parser("moment")
    sm.add_argument("--p", type=int, required=True)
    sm.add_argument("--r", type=int, required=True)
    sm.add_argument("--lam", dest="lam", type=float, required=True)

    am = sub.add_parser("amplify")
    am.add_argument("--lp", type=float, required=True)
    am.add_argument("--lp2", type=float, required=True)
    am.add_argument("--p", type=int, default=101)

    su = sub.add_parser("suite")
    su.add_argument("--quick", action="store_true")
    su.add_argument("--out", default=None, help="also write the report to a file")

    rp = sub.add_parser("report")
    rps = rp.add_subparsers(dest="sub", required=True)
    rf = rps.add_parser("figures")
    rf.add_argument("--from", dest="src", required=True, help="suite CSV file")
    rf.add_argument("--outdir", default="figures")
    return ap


def _angles(s: str):
    return [spherical.unit_param(float(x)) for x in s.split(",")]


def _quadnum(ctx, s: str):
    from fractions import Fraction

    a, b = s.split(",")
    return ctx.elem(Fraction(a), Fraction(b))


def run(argv=None) -> int:
    args = _parser().parse_args(argv)
    cfg = load_config(args.config)
    for name in ("digits", "nmax", "nodes", "seed", "fmt", "D"):
        v = getattr(args, name, None)
        if v is not None:
            setattr(cfg, "n_max" if name == "nmax" else name, v)
    spherical.set_precision(cfg.digits)
    recs, failed = [], False
    t0 = time.time()

    if args.cmd == "cosets":
        recs, failed = _run_cosets(args, cfg, t0)
    elif args.cmd == "spherical":
        recs = _run_spherical(args, cfg, t0)
    elif args.cmd == "period":
        recs, failed = _run_period(args, cfg, t0)
    elif args.cmd == "orbital":
        c = orbital.unip_orbital_p(args.case, args.p, args.nu_n, _angles(args.params)[0])
        recs = [record("orbital.unip", {"case": args.case, "p": args.p, "nu_n": args.nu_n},
                       {"kind": c.kind, "value": c.value}, None, None, True,
                       (time.time() - t0) * 1000, "unipotent-orbital")]
    elif args.cmd == "regular":
        recs, failed = _run_regular(args, cfg, t0)
    elif args.cmd == "arch":
        recs, failed = _run_arch(args, cfg, t0)
    elif args.cmd == "lfunc":
        recs = _run_lfunc(args, cfg, t0)
    elif args.cmd == "satotate":
        m = lfunc.sato_tate_moment(args.p, args.lam, args.r)
        ok = m["error"] <= 1e-8
        failed = not ok
        recs = [record("satotate.moment", {"p": args.p, "r": args.r, "lam": args.lam},
                       m["moment"], m["target"], 1e-8, ok, (time.time() - t0) * 1000,
                       "weighted-moment-identity")]
    elif args.cmd == "amplify":
        r = lfunc.amplifier_select(args.lp, args.lp2, args.p)
        recs = [record("amplify", {"lp": args.lp, "lp2": args.lp2}, r, None, None, True,
                       (time.time() - t0) * 1000, "amplifier-selection")]
    elif args.cmd == "suite":
        from .suite import run_suite

        recs, ok = run_suite(quick=args.quick, seed=cfg.seed,
                             verbose=lambda s: print(s, file=sys.stderr))
        failed = not ok
        payload = emit_json(recs, deterministic=True) if cfg.fmt == "json" else emit_csv(recs, deterministic=True)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(payload)
        sys.stdout.write(payload)
        return 1 if failed else 0
    elif args.cmd == "report":
        from .figures import render_figures

        made = render_figures(args.src, args.outdir)
        recs = [record("report.figures", {"from": args.src}, made, None, None, True,
                       (time.time() - t0) * 1000, "figures")]

    payload = emit_json(recs) if cfg.fmt == "json" else emit_csv(recs)
    sys.stdout.write(payload)
    return 1 if failed else 0


def _run_cosets(args, cfg, t0):
    failed = False
    D = cfg.D if cfg.D != 1 or args.p != 2 else 3  # p=2 needs 2 inert: D=3
    if args.lemma == "iwahori":
        fam = cosets.iwahori_cosets(D, args.p, args.size)
        target = args.p**3 + 1 if args.size == 3 else args.p + 1
    elif args.lemma == "cell":
        fam = cosets.verify_cell_sweep(D, args.p, args.size, args.word, args.n)
        target = args.p ** cosets.CellWord(args.word, args.n, args.size).lam
    elif args.lemma == "cartan":
        fam = cosets.cartan_split(D, args.p, args.size, args.n)
        target = fam.counts["expected_total"]
    elif args.lemma == "hecke":
        fam = cosets.hecke_cell_cosets(D, args.p, args.n)
        target = args.p ** (4 * args.n - 3) * (args.p**3 + 1)
    elif args.lemma == "oldform":
        fam = cosets.oldform_cosets(D, args.p, args.n)
        target = args.p ** (4 * args.n - 3) * (args.p**3 + 1)
    else:  # order
        full = cosets.group_order(D, args.p, 1, args.size)
        det1 = cosets.group_order(D, args.p, 1, args.size, special=True)
        rec = record("cosets.order", {"p": args.p, "size": args.size},
                     {"full": full, "det1": det1}, None, None, True,
                     (time.time() - t0) * 1000, "unitary-group-order")
        return [rec], False
    ok = fam.disjoint and fam.covering
    failed = not ok
    rec = record(f"cosets.{args.lemma}", {"p": args.p, "n": args.n, "size": args.size},
                 {"index": fam.counts, "disjoint": fam.disjoint, "covering": fam.covering},
                 target, None, ok, (time.time() - t0) * 1000, fam.lemma)
    return [rec], failed


def _run_spherical(args, cfg, t0):
    pars = _angles(args.params)
    if args.formula == "u2":
        v = spherical.macdonald_u2(args.n, pars[0], args.p)
        tag = "macdonald-u2"
    elif args.formula == "u3":
        v = spherical.macdonald_u3(args.n, pars[0], args.p)
        tag = "macdonald-u3"
    elif args.formula == "gl3":
        cw = tuple(int(x) for x in args.coweight.split(","))
        z = (pars[0], mp.mpc(1), 1 / pars[0]) if len(pars) == 1 else tuple(pars)
        v = spherical.macdonald_gl3_value(cw, z, args.p)
        tag = "macdonald-gl3"
    elif args.formula == "cs":
        v = spherical.cs_whittaker_inert(args.n, args.i, pars[0], args.p)
        tag = "casselman-shalika"
    else:
        v = spherical.steinberg_xi(cosets.CellWord(args.word, args.n, 3), args.p)
        tag = "steinberg-coefficient"
    return [record(f"spherical.{args.formula}",
                   {"p": args.p, "n": args.n, "params": args.params},
                   v, None, None, True, (time.time() - t0) * 1000,
                   tag + " (normalized to 1 at the identity)")]


def _run_period(args, cfg, t0):
    pars = _angles(args.params)
    if args.case == "unram":
        r = periods.local_period_unramified(args.p, pars[0], pars[1], args.kind,
                                            n_max=cfg.n_max)
    elif args.case == "ram":
        r = periods.local_period_ramified(args.p, pars[0], pars[1], n_max=cfg.n_max)
    elif args.case == "inert":
        r = periods.local_period_inert_steinberg(args.p, pars[0], n_max=cfg.n_max)
    else:
        chi = (pars[0], mp.mpc(1), 1 / pars[0])
        r = periods.local_period_split_levelNprime(args.p, chi,
                                                   n_max=min(cfg.n_max, 24))
    d = r.to_dict()
    rec = record(f"period.{args.case}", {"p": args.p, "params": args.params},
                 d["value"], d["target"], d["bound"], d["pass"],
                 (time.time() - t0) * 1000, "local-period-" + args.case)
    return [rec], not d["pass"]


def _run_regular(args, cfg, t0):
    ctx = field(cfg.D)
    if args.sub == "support":
        x = _quadnum(ctx, args.x)
        v = orbital.regular_support_test(x, args.N, args.Nprime, args.ell)
        return [record("regular.support", {"x": args.x, "N": args.N}, v, None, None,
                       True, (time.time() - t0) * 1000, "regular-support")], False
    if args.sub == "xiset":
        xs = orbital.xi_set_enumerate(ctx, args.N, args.Nprime, args.ell, args.bound)
        n2 = orbital.xi_set_scan(ctx, args.N, args.Nprime, args.ell, args.bound)
        ok = len(xs) == n2
        return [record("regular.xiset", {"N": args.N, "Nprime": args.Nprime,
                                         "ell": args.ell, "bound": args.bound},
                       {"count": len(xs), "scan": n2,
                        "elements": [str(x) for x in xs[:40]]},
                       None, None, ok, (time.time() - t0) * 1000, "xi-set")], not ok
    x = _quadnum(ctx, args.x)
    c = orbital.regular_local_eval(ctx, args.p, x, divides_N=args.divides_N,
                                   divides_Nprime=args.divides_Nprime,
                                   hecke_r=args.hecke_r)
    return [record("regular.eval", {"x": args.x, "p": args.p},
                   {"kind": c.kind, "value": c.value}, None, None, True,
                   (time.time() - t0) * 1000, "regular-local-certificate")], False


def _run_arch(args, cfg, t0):
    import numpy as np

    failed = False
    if args.sub == "coeff":
        rng = np.random.default_rng(cfg.seed)
        g = arch.random_su21_point(rng)
        closed = arch.matrix_coeff_su21(g, args.k1, args.k2)
        quad = arch.matrix_coeff_su21_quad(g, args.k1, args.k2,
                                           arch.QuadratureSpec(max(cfg.nodes, 64)))
        err = abs(closed - quad) / abs(closed)
        failed = err > 1e-8
        rec = record("arch.coeff", {"k1": args.k1, "k2": args.k2}, closed, quad, 1e-8,
                     not failed, (time.time() - t0) * 1000, "su21-coefficient")
    elif args.sub == "whittaker":
        v = arch.arch_whittaker(1.0, 0.0, 0.0, 1, args.k)
        rec = record("arch.whittaker", {"k": args.k, "a": 1, "t": 0, "alpha": 0}, v,
                     None, None, True, (time.time() - t0) * 1000, "arch-whittaker")
    elif args.sub == "unip":
        r = arch.unip_orbital_arch(args.k, args.n, 4.0, nodes=max(cfg.nodes, 100))
        failed = r["rel_error"] > 1e-4
        rec = record("arch.unip", {"k": args.k, "n": args.n}, r["quadrature"],
                     r["closed"], 1e-4, not failed, (time.time() - t0) * 1000,
                     "unipotent-arch-integral")
    elif args.sub == "regular":
        xr, xi = (float(t) for t in args.x.split(","))
        r = arch.regular_arch_integral(complex(xr, xi), args.k,
                                       arch.QuadratureSpec(cfg.nodes))
        failed = r["value"] > 100 * r["bound"]
        rec = record("arch.regular", {"x": args.x, "k": args.k}, r["value"], r["bound"],
                     100 * r["bound"], not failed, (time.time() - t0) * 1000,
                     "regular-arch-integral")
    else:
        h = arch.helper_integral(args.kind, args.A, args.B, args.C, args.m)
        failed = h["ratio"] > 10
        rec = record("arch.helper", {"kind": args.kind, "A": args.A, "m": args.m},
                     h["value"], h["majorant"], 10.0, not failed,
                     (time.time() - t0) * 1000, "helper-integral-majorant")
    return [rec], failed


def _run_lfunc(args, cfg, t0):
    if args.sub == "gamma":
        s = mp.mpf(args.s)
        v = lfunc.l_infty_rs(s, args.k)
        shifts = [str(x) for x in lfunc.gamma_r_shift_multiset(args.k)]
        return [record("lfunc.gamma", {"k": args.k, "s": args.s},
                       {"value": v, "gamma_r_shifts": shifts}, None, None, True,
                       (time.time() - t0) * 1000, "rs-archimedean-factor")]
    if args.sub == "conductor":
        c = lfunc.conductor_and_sign(args.N, args.Nprime)
        return [record("lfunc.conductor", {"N": args.N, "Nprime": args.Nprime},
                       {"Cf": c["Cf"], "eps": c["eps"]}, None, None, True,
                       (time.time() - t0) * 1000, "conductor-root-number")]
    if args.sub == "euler":
        pars = _angles(args.params)
        if args.place == "split":
            sat = ((pars[0], mp.mpc(1), 1 / pars[0]), (pars[1], 1 / pars[1]))
        else:
            sat = (pars[0], pars[1])
        v = lfunc.euler_local(args.kind, args.p, args.place, sat, mp.mpf(args.s))
        return [record("lfunc.euler", {"kind": args.kind, "p": args.p,
                                       "place": args.place}, v, None, None, True,
                       (time.time() - t0) * 1000, "euler-factor")]
    m = lfunc.main_term(args.k, args.N, args.Nprime, args.ell, args.lam_ell, cfg.D)
    return [record("lfunc.mainterm", {"k": args.k, "N": args.N, "Nprime": args.Nprime},
                   {"rational_part": str(m["rational_part"]), "value": m["value"],
                    "Psi": str(m["Psi"]), "S": str(m["S"]), "w_E": m["w_E"]},
                   None, None, True, (time.time() - t0) * 1000, "main-term")]


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
