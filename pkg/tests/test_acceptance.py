"""Acceptance battery: every criterion at its stated tolerance, one printed
pass/fail line per criterion (run pytest -s to see them live).

Criterion 11 (determinism + runtime) runs the quick battery twice and
byte-compares the canonical reports.
"""

import time

import pytest

from besselkit.report import emit_csv, emit_json
from besselkit.suite import CRITERIA, run_suite

RESULTS = {}


def _run(name):
    fn = dict(CRITERIA)[name]
    t0 = time.time()
    recs = fn(False)
    dt = time.time() - t0
    ok = all(r["pass"] for r in recs)
    RESULTS[name] = (ok, dt)
    print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {name} "
          f"({len(recs)} checks, {dt:.1f}s)")
    failed = [r for r in recs if not r["pass"]]
    for r in failed[:10]:
        print("   failed:", r["op"], r["inputs"], "->", r["value"], "vs", r["target"])
    return ok, dt


def test_criterion_01_coset_atlas():
    ok, dt = _run("1 coset atlas")
    assert ok
    assert dt < 300, f"coset atlas exceeded its five-minute budget: {dt:.0f}s"


def test_criterion_02_group_orders():
    ok, _ = _run("2 group orders")
    assert ok


def test_criterion_03_arch_coefficients():
    ok, _ = _run("3 arch coefficients")
    assert ok


def test_criterion_04_schur_formal_degree():
    ok, _ = _run("4 Schur / formal degree")
    assert ok


def test_criterion_05_unipotent_arch():
    ok, _ = _run("5 unipotent arch integral")
    assert ok


def test_criterion_06_local_periods():
    ok, _ = _run("6 local periods")
    assert ok


def test_criterion_07_unipotent_local():
    ok, _ = _run("7 unipotent local orbitals")
    assert ok


def test_criterion_08_regular():
    ok, _ = _run("8 regular integrals")
    assert ok


def test_criterion_09_hecke_satotate():
    ok, _ = _run("9 Hecke / Sato-Tate")
    assert ok


def test_criterion_10_ldata():
    ok, _ = _run("10 L-data")
    assert ok


def test_criterion_11_determinism():
    t0 = time.time()
    recs1, ok1 = run_suite(quick=True, seed=20260808, verbose=lambda s: None)
    recs2, ok2 = run_suite(quick=True, seed=20260808, verbose=lambda s: None)
    dt = time.time() - t0
    same_json = emit_json(recs1, deterministic=True) == emit_json(recs2, deterministic=True)
    same_csv = emit_csv(recs1, deterministic=True) == emit_csv(recs2, deterministic=True)
    ok = ok1 and ok2 and same_json and same_csv
    print(f"\n[{'PASS' if ok else 'FAIL'}] criterion 11 determinism "
          f"(two quick runs, byte-identical: {same_json and same_csv}, {dt:.0f}s)")
    assert ok
    # full-battery runtime stays far below the thirty-minute ceiling: the
    # individually timed criteria above plus this double quick run
    total = sum(t for _, t in RESULTS.values()) + dt
    print(f"   cumulative acceptance runtime: {total:.0f}s")
    assert total < 1800
