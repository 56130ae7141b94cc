"""Machine-readable report records and JSON/CSV emission.

Schema: {op, inputs, value, target, bound, pass, elapsed_ms, eq_tag}; the
eq_tag is an internal formula identifier naming what was computed.  Reports
are emitted with sorted keys and canonical float formatting so identical
configuration and seed give byte-identical output (elapsed_ms is zeroed in
deterministic mode).
"""

from __future__ import annotations

import csv
import io
import json


def record(op: str, inputs: dict, value, target=None, bound=None, passed=None,
           elapsed_ms: float = 0.0, eq_tag: str = "") -> dict:
    return {
        "op": op,
        "inputs": inputs,
        "value": _canon(value),
        "target": _canon(target),
        "bound": _canon(bound),
        "pass": passed,
        "elapsed_ms": round(elapsed_ms, 3),
        "eq_tag": eq_tag,
    }


def _canon(v):
    import mpmath as mp
    from fractions import Fraction

    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, float):
        return v
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (mp.mpf,)):
        return float(v)
    if isinstance(v, (mp.mpc,)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, dict):
        return {k: _canon(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_canon(x) for x in v]
    return str(v)


def emit_json(records, deterministic: bool = False) -> str:
    out = []
    for r in records:
        r = dict(r)
        if deterministic:
            r["elapsed_ms"] = 0.0
        out.append(r)
    return json.dumps(out, sort_keys=True, indent=1, default=str) + "\n"


def emit_csv(records, deterministic: bool = False) -> str:
    buf = io.StringIO()
    cols = ["op", "eq_tag", "pass", "value", "target", "bound", "elapsed_ms", "inputs"]
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in records:
        r = dict(r)
        if deterministic:
            r["elapsed_ms"] = 0.0
        w.writerow([
            r.get("op"), r.get("eq_tag"), r.get("pass"),
            json.dumps(r.get("value"), sort_keys=True, default=str),
            json.dumps(r.get("target"), sort_keys=True, default=str),
            json.dumps(r.get("bound"), sort_keys=True, default=str),
            r.get("elapsed_ms"),
            json.dumps(r.get("inputs"), sort_keys=True, default=str),
        ])
    return buf.getvalue()
