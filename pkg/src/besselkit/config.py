"""Run configuration: ambient field, precision and truncation defaults.

Read from a minimal TOML-like file of `key = value` lines (sections are
allowed and flattened); every value also has a CLI flag override.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict


@dataclass
class RunConfig:
    D: int = 1                 # radicand of E = Q(sqrt(-D))
    digits: int = 50           # working precision (mpmath dps)
    n_max: int = 40            # truncation for period sums
    nodes: int = 48            # quadrature nodes per dimension
    seed: int = 20260808
    fmt: str = "json"          # 'json' or 'csv'

    def to_dict(self) -> dict:
        return asdict(self)


def _parse_value(s: str):
    s = s.strip()
    if len(s) >= 2 and s[0] == s[-1] and s[0] in "\"'":
        return s[1:-1]
    if s.lower() in ("true", "false"):
        return s.lower() == "true"
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


def load_config(path: str | None) -> RunConfig:
    cfg = RunConfig()
    if not path:
        return cfg
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line or line.startswith("["):
                continue
            if "=" not in line:
                continue
            key, val = line.split("=", 1)
            key = key.strip().replace("-", "_")
            if hasattr(cfg, key):
                setattr(cfg, key, _parse_value(val))
    return cfg


def dump_config(cfg: RunConfig) -> str:
    def fmt(v):
        return f'"{v}"' if isinstance(v, str) else repr(v)

    return "\n".join(f"{k} = {fmt(v)}" for k, v in cfg.to_dict().items()) + "\n"
