"""Run configuration: flat key = value files plus command-line overrides.

The configuration file format is deliberately minimal so that a run is
reproducible from a single saved artifact: one ``key = value`` pair per
line, ``#`` starts a comment, keys outside the schema are rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Optional

import numpy as np

from .dynamics import IntegratorConfig
from .errors import ConfigError, InvalidNoise
from .model import ModelSpec, SqueezedWhite, White

# key -> (python type, default, description); "auto" resolves at run time
SCHEMA = {
    "g_ad": (float, 1.0, "coupling of atom A to the bus (units of g0)"),
    "g_bd": (float, 1.0, "coupling of atom B to the bus"),
    "gamma": (float, 0.2, "decay rate of atoms A and B"),
    "gamma_d": (float, 0.2, "bus decay rate"),
    "omega": (float, 1.0, "bare atomic frequency (bookkeeping only)"),
    "noise": (str, "white", "noise kind: white | squeezed"),
    "n_t": (float, 1.0, "noise intensity (effective particle number)"),
    "m": (str, "perfect", "squeezing parameter: 'perfect' or a real number"),
    "step": (float, 1e-3, "integrator step (units of 1/g0)"),
    "t_end": (float, 5.0, "end time for simulate"),
    "record_every": (int, 10, "record every N steps"),
    "axis1": (str, "n_T:0:5:21", "sweep axis 1, name:start:stop:count"),
    "axis2": (str, "t:0:5:51", "sweep axis 2, name:start:stop:count"),
    "t_fixed": (str, "auto", "snapshot time when t is not an axis ('auto' = 1/g)"),
    "shorttime_rtol": (float, 0.05, "relative tolerance of the shorttime check"),
    "shorttime_window": (str, "auto", "comparison window ('auto' = 0.05/g)"),
    "workers": (int, 1, "process-pool width for sweeps"),
    "seed": (int, 0, "RNG seed for randomized validation checks"),
    "out": (str, "out", "output directory"),
}


@dataclass
class RunConfig:
    g_ad: float = 1.0
    g_bd: float = 1.0
    gamma: float = 0.2
    gamma_d: float = 0.2
    omega: float = 1.0
    noise: str = "white"
    n_t: float = 1.0
    m: str = "perfect"
    step: float = 1e-3
    t_end: float = 5.0
    record_every: int = 10
    axis1: str = "n_T:0:5:21"
    axis2: str = "t:0:5:51"
    t_fixed: str = "auto"
    shorttime_rtol: float = 0.05
    shorttime_window: str = "auto"
    workers: int = 1
    seed: int = 0
    out: str = "out"

    def echo_items(self):
        """Deterministically ordered key=value pairs for output headers."""
        return [(f.name, getattr(self, f.name)) for f in fields(self)]


def parse_config_file(path: str) -> dict:
    """Read a flat key = value file; unknown keys are an error."""
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
            key, val = (part.strip() for part in line.split("=", 1))
            if key not in SCHEMA:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = val
    return values


def _coerce(key: str, value) -> object:
    typ = SCHEMA[key][0]
    try:
        if typ is float:
            return float(value)
        if typ is int:
            iv = int(str(value))
            return iv
        return str(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {key!r}: {value!r}") from exc


def make_run_config(file_values: Optional[dict] = None,
                    overrides: Optional[dict] = None) -> RunConfig:
    """Build and validate a RunConfig from file values plus flag overrides."""
    merged = {k: SCHEMA[k][1] for k in SCHEMA}
    for src in (file_values or {}), (overrides or {}):
        for k, v in src.items():
            if v is None:
                continue
            if k not in SCHEMA:
                raise ConfigError(f"unknown configuration key {k!r}")
            merged[k] = _coerce(k, v)
    cfg = RunConfig(**merged)

    if cfg.noise not in ("white", "squeezed"):
        raise ConfigError(f"noise must be 'white' or 'squeezed', got {cfg.noise!r}")
    if cfg.workers < 1:
        raise ConfigError("workers must be >= 1")
    try:
        model_spec(cfg)            # validates rates and the |M| bound
        integrator(cfg)            # validates step / record_every
        parse_axis(cfg.axis1)
        parse_axis(cfg.axis2)
        resolve_t_fixed(cfg)
        shorttime_window(cfg)
    except (InvalidNoise, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


def model_spec(cfg: RunConfig) -> ModelSpec:
    if cfg.noise == "squeezed":
        if cfg.m == "perfect":
            noise = SqueezedWhite.perfect(cfg.n_t)
        else:
            noise = SqueezedWhite(cfg.n_t, _coerce("n_t", cfg.m))
    else:
        noise = White(cfg.n_t)
    return ModelSpec(g_ad=cfg.g_ad, g_bd=cfg.g_bd, gamma=cfg.gamma,
                     gamma_d=cfg.gamma_d, noise=noise, omega=cfg.omega)


def integrator(cfg: RunConfig, t_end: Optional[float] = None) -> IntegratorConfig:
    return IntegratorConfig(step=cfg.step,
                            t_end=cfg.t_end if t_end is None else t_end,
                            record_every=cfg.record_every)


def parse_axis(text: str):
    """Parse 'name:start:stop:count' into (name, sample array)."""
    parts = text.split(":")
    if len(parts) != 4:
        raise ConfigError(f"axis {text!r} is not of the form name:start:stop:count")
    name = parts[0]
    if name not in ("n_T", "t", "gamma"):
        raise ConfigError(f"axis name {name!r} must be one of n_T, t, gamma")
    try:
        start, stop, count = float(parts[1]), float(parts[2]), int(parts[3])
    except ValueError as exc:
        raise ConfigError(f"bad axis specification {text!r}") from exc
    if count < 1:
        raise ConfigError("axis sample count must be >= 1")
    return name, np.linspace(start, stop, count)


def resolve_t_fixed(cfg: RunConfig) -> float:
    if cfg.t_fixed == "auto":
        return 1.0 / model_spec(cfg).g
    try:
        return float(cfg.t_fixed)
    except ValueError as exc:
        raise ConfigError(f"t_fixed must be a number or 'auto', got {cfg.t_fixed!r}") from exc


def shorttime_window(cfg: RunConfig) -> float:
    if cfg.shorttime_window == "auto":
        return 0.05 / model_spec(cfg).g
    try:
        return float(cfg.shorttime_window)
    except ValueError as exc:
        raise ConfigError(
            f"shorttime_window must be a number or 'auto', got {cfg.shorttime_window!r}"
        ) from exc
