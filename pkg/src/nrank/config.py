"""Run configuration: defaults, key=value config files and flag overrides."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

THREADS_ENV = "NRANK_THREADS"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    precision: int = 64          # starting bits for eigenvalue isolation
    bound: int = 64              # dependence search bound on exponents
    n_max: int = 60
    n_budget: int = 10 ** 6      # max visited states for ord
    degree_cap: int = 24         # factorization cap for char polys
    seed: int = 0
    format: str = "csv"
    threads: int = 1

    def __post_init__(self):
        for name in ("precision", "bound", "n_max", "n_budget", "degree_cap", "threads"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, not {self.format!r}")

    def override(self, **kw) -> "RunConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def parse_config_text(text: str) -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().replace("-", "_"), value.strip()
        if not sep or not key:
            raise ConfigError(f"line {lineno}: expected key=value")
        if key not in _TYPES or key == "threads":
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if _TYPES[key] in ("int", int):
            try:
                out[key] = int(value)
            except ValueError:
                raise ConfigError(f"line {lineno}: {key} needs an integer") from None
        else:
            out[key] = value
    return out


def load_config(path: str | None = None, **overrides) -> RunConfig:
    values = {}
    if path:
        with open(path) as fh:
            values.update(parse_config_text(fh.read()))
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            values["threads"] = int(env)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer") from None
    values.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**values)
