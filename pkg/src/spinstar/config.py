"""Run configuration: JSON file plus command-line and environment overrides."""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any

import numpy as np

from .errors import ConfigError
from .model import ModelSpec

SEED_ENV = "SPINSTAR_SEED"
BATH_TYPES = ("explicit", "equal", "random")
FORMATS = ("csv", "json")
THETA_SLACK = 1e-4


@dataclass(frozen=True)
class BathSpec:
    kind: str
    n: int
    g: tuple[float, ...] | float | None = None
    omega: tuple[float, ...] | float | None = None
    seed: int | None = None
    samples: int = 1


@dataclass(frozen=True)
class TimeGrid:
    start: float
    end: float
    steps: int

    def __post_init__(self):
        if not (math.isfinite(self.start) and math.isfinite(self.end)):
            raise ConfigError("time bounds must be finite")
        if self.start < 0:
            raise ConfigError("time.start must be non-negative")
        if not self.start < self.end:
            raise ConfigError("time.start must be smaller than time.end")
        if self.steps < 2:
            raise ConfigError("time.steps must be at least 2")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.end, self.steps)


@dataclass(frozen=True)
class RunConfig:
    alpha: float
    beta: float
    bath: BathSpec
    time: TimeGrid
    omega0: float = 0.0
    theta_grid: tuple[float, ...] = ()
    output_format: str = "csv"
    output_path: str | None = None
    workers: int = 1
    strict: bool = False

    @property
    def seed(self) -> int | None:
        return self.bath.seed

    def model(self, sample_index: int = 0) -> ModelSpec:
        """The single model this run describes (sample ``sample_index`` for random baths)."""
        b = self.bath
        if b.kind == "explicit":
            return ModelSpec(b.g, b.omega, alpha=self.alpha, beta=self.beta, omega0=self.omega0, strict=self.strict)
        if b.kind == "equal":
            return ModelSpec.equal(b.n, b.g, b.omega, alpha=self.alpha, beta=self.beta, omega0=self.omega0, strict=self.strict)
        from .ensembles import sample_random_model, sample_stream

        return sample_random_model(b.n, self.alpha, self.beta, sample_stream(b.seed, sample_index), self.omega0)


def _require(d: dict, key: str, where: str) -> Any:
    if key not in d:
        raise ConfigError(f"missing '{key}' in {where}")
    return d[key]


def _number(x: Any, name: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ConfigError(f"{name} must be a number, got {x!r}")
    if not math.isfinite(x):
        raise ConfigError(f"{name} must be finite")
    return float(x)


def _integer(x: Any, name: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ConfigError(f"{name} must be an integer, got {x!r}")
    return x


def _clamp_theta(th: float) -> float:
    # hand-written grids round pi/4 (0.7854 > pi/4); accept and clamp such values
    if not -THETA_SLACK <= th <= math.pi / 4 + THETA_SLACK:
        raise ConfigError(f"theta {th} outside [0, pi/4]")
    return min(max(th, 0.0), math.pi / 4)


def _parse_bath(d: Any) -> BathSpec:
    if not isinstance(d, dict):
        raise ConfigError("'bath' must be an object")
    kind = _require(d, "type", "bath")
    if kind not in BATH_TYPES:
        raise ConfigError(f"bath.type must be one of {BATH_TYPES}, got {kind!r}")
    if kind == "explicit":
        g = _require(d, "g", "bath")
        om = _require(d, "omega", "bath")
        if not isinstance(g, list) or not isinstance(om, list):
            raise ConfigError("explicit bath needs lists 'g' and 'omega'")
        if len(g) != len(om) or not g:
            raise ConfigError("explicit bath 'g' and 'omega' must be non-empty and of equal length")
        g = tuple(_number(x, "bath.g[]") for x in g)
        om = tuple(_number(x, "bath.omega[]") for x in om)
        return BathSpec("explicit", len(g), g, om)
    n = _integer(_require(d, "n", "bath"), "bath.n")
    if n < 1:
        raise ConfigError("bath.n must be at least 1")
    if kind == "equal":
        g = _number(_require(d, "g", "bath"), "bath.g")
        om = _number(_require(d, "omega", "bath"), "bath.omega")
        return BathSpec("equal", n, g, om)
    seed = _integer(d.get("seed", 0), "bath.seed")
    samples = _integer(d.get("samples", 1), "bath.samples")
    if samples < 1:
        raise ConfigError("bath.samples must be at least 1")
    return BathSpec("random", n, seed=seed, samples=samples)


def parse_config(doc: dict) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    alpha = _number(doc.get("alpha", 1.0), "alpha")
    if alpha <= 0:
        raise ConfigError("alpha must be positive")
    beta = _number(doc.get("beta", 1.0), "beta")
    if beta < 0:
        raise ConfigError("beta must be non-negative")
    omega0 = _number(doc.get("omega0", 0.0), "omega0")
    bath = _parse_bath(_require(doc, "bath", "config"))
    t = _require(doc, "time", "config")
    if not isinstance(t, dict):
        raise ConfigError("'time' must be an object")
    time = TimeGrid(
        _number(_require(t, "start", "time"), "time.start"),
        _number(_require(t, "end", "time"), "time.end"),
        _integer(_require(t, "steps", "time"), "time.steps"),
    )
    thetas = doc.get("theta_grid") or []
    if not isinstance(thetas, list):
        raise ConfigError("theta_grid must be a list")
    thetas = tuple(_clamp_theta(_number(x, "theta_grid[]")) for x in thetas)
    out = doc.get("output") or {}
    fmt = out.get("format", "csv")
    if fmt not in FORMATS:
        raise ConfigError(f"output.format must be one of {FORMATS}")
    return RunConfig(
        alpha=alpha,
        beta=beta,
        omega0=omega0,
        bath=bath,
        time=time,
        theta_grid=thetas,
        output_format=fmt,
        output_path=out.get("path"),
        strict=bool(doc.get("strict", False)),
    )


def load_config(path: str | Path, overrides: dict | None = None, environ=os.environ) -> RunConfig:
    """Read a config file and apply overrides.

    Precedence, lowest first: file, ``SPINSTAR_SEED``, explicit ``overrides``
    (command-line flags). Recognised override keys are ``seed``, ``format``,
    ``output`` and ``workers``.
    """
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    cfg = parse_config(doc)
    overrides = dict(overrides or {})

    seed = overrides.pop("seed", None)
    if seed is None and environ.get(SEED_ENV):
        try:
            seed = int(environ[SEED_ENV])
        except ValueError as exc:
            raise ConfigError(f"{SEED_ENV} must be an integer") from exc
    if seed is not None and cfg.bath.kind == "random":
        cfg = replace(cfg, bath=replace(cfg.bath, seed=seed))

    if overrides.get("format"):
        cfg = replace(cfg, output_format=overrides["format"])
    if overrides.get("output"):
        cfg = replace(cfg, output_path=overrides["output"])
    if overrides.get("workers"):
        if overrides["workers"] < 1:
            raise ConfigError("workers must be at least 1")
        cfg = replace(cfg, workers=overrides["workers"])
    return cfg
