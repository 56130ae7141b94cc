"""Figure rendering for the report path: consumes a suite CSV and writes
diagnostic figures next to it (spherical-value decay, Sato-Tate weighted
densities, period-window placement, per-criterion pass chart)."""

from __future__ import annotations

import csv
import math
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def render_figures(src_csv: str, outdir: str) -> list:
    os.makedirs(outdir, exist_ok=True)
    made = []
    made.append(_fig_pass_chart(src_csv, outdir))
    made.append(_fig_macdonald_decay(outdir))
    made.append(_fig_sato_tate(outdir))
    made.append(_fig_period_window(outdir))
    return made


def _fig_pass_chart(src_csv: str, outdir: str) -> str:
    ops, passes = [], []
    with open(src_csv) as fh:
        for row in csv.DictReader(fh):
            ops.append(row["op"])
            passes.append(1.0 if row["pass"] == "True" else 0.0)
    agg = {}
    for op, ok in zip(ops, passes):
        group = op.split(".")[0]
        agg.setdefault(group, []).append(ok)
    names = sorted(agg)
    fracs = [sum(agg[n]) / len(agg[n]) for n in names]
    fig, ax = plt.subplots(figsize=(7, 3.2))
    ax.bar(names, fracs, color=["#2a7" if f == 1 else "#c33" for f in fracs])
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("fraction of checks passing")
    ax.set_title("suite results by module")
    fig.tight_layout()
    path = os.path.join(outdir, "suite_pass.png")
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def _fig_macdonald_decay(outdir: str) -> str:
    from .spherical import macdonald_u2, macdonald_u3, u2_bound, u3_bound, unit_param

    p = 3
    g = unit_param(0.8)
    ns = range(0, 21)
    fig, ax = plt.subplots(figsize=(6.4, 4))
    ax.semilogy(ns, [abs(complex(macdonald_u3(n, g, p))) for n in ns], "o-",
                label="|Phi_3(n)| (3x3)")
    ax.semilogy(ns, [float(u3_bound(n, p)) for n in ns], "--", label="3x3 bound")
    ax.semilogy(ns, [abs(complex(macdonald_u2(n, g, p))) for n in ns], "s-",
                label="|Phi_2(n)| (2x2)")
    ax.semilogy(ns, [float(u2_bound(n, p)) for n in ns], ":", label="2x2 bound")
    ax.set_xlabel("Cartan cell n")
    ax.set_title(f"spherical values and certified bounds (p={p})")
    ax.legend()
    fig.tight_layout()
    path = os.path.join(outdir, "macdonald_decay.png")
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def _fig_sato_tate(outdir: str) -> str:
    from .lfunc import st_density, weighted_density_closed

    xs = np.linspace(-1.999, 1.999, 400)
    fig, ax = plt.subplots(figsize=(6.4, 4))
    ax.plot(xs, [float(st_density(x)) for x in xs], label="semicircle")
    for p, lam in ((3, 1.0), (3, -1.5), (7, 1.0)):
        ax.plot(xs, [float(weighted_density_closed(x, lam, p) * st_density(x)) for x in xs],
                label=f"weighted, p={p}, lam'={lam}")
    ax.set_xlabel("x")
    ax.set_title("Sato-Tate measure and local Rankin-Selberg weights")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = os.path.join(outdir, "sato_tate.png")
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def _fig_period_window(outdir: str) -> str:
    from .periods import local_period_inert_steinberg
    from .spherical import unit_param

    fig, ax = plt.subplots(figsize=(6.4, 4))
    thetas = np.linspace(0.05, math.pi - 0.05, 40)
    for p, color in ((3, "#16a"), (5, "#a61")):
        vals = [complex(local_period_inert_steinberg(p, unit_param(t)).value).real
                for t in thetas]
        ax.plot(thetas, vals, color=color, label=f"P* at p={p}")
        center = (p - 1) / p**2
        radius = 3 * (1 - p**-2) / p * center
        ax.axhline(center, color=color, lw=0.8)
        ax.fill_between(thetas, center - radius, center + radius, color=color, alpha=0.12)
    ax.set_xlabel("Satake angle")
    ax.set_title("Steinberg-place period values inside their certified windows")
    ax.legend()
    fig.tight_layout()
    path = os.path.join(outdir, "period_window.png")
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
