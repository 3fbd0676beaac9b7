"""Experiment configuration: JSON file plus command-line overrides."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass
from pathlib import Path

from .channels import PRESETS, DecoherenceFunction, MixingWeights, PauliMixture

MODES = ("theory", "synthetic-experiment", "full-pipeline")
FORMATS = ("csv", "json")
OUTPUT_ENV = "PAULIMIX_OUTPUT_DIR"


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass(frozen=True)
class Grid:
    t_start: float
    t_end: float
    n: int


@dataclass(frozen=True)
class ExperimentConfig:
    weights: tuple[float, float, float]
    c: float
    grid: Grid = Grid(0.0, 1.5, 151)
    samples: Grid = Grid(0.1, 1.5, 15)
    sigma: float = 0.02
    seed: int = 0
    mode: str = "theory"
    out: str = "out"
    fmt: str = "csv"
    tol: float = 1e-9
    preset: str | None = None

    def mixture(self) -> PauliMixture:
        return PauliMixture(MixingWeights(*self.weights), DecoherenceFunction(self.c))

    def to_dict(self) -> dict:
        """Settings that determine the results; the output location is left out."""
        d = asdict(self)
        d.pop("out")
        return d


def _grid(raw: dict, name: str, default: Grid) -> Grid:
    try:
        g = Grid(float(raw.get("t_start", default.t_start)),
                 float(raw.get("t_end", default.t_end)),
                 raw.get("n", default.n))
    except (TypeError, ValueError) as exc:
        raise ConfigError(name, str(exc)) from None
    if not isinstance(g.n, int) or g.n < 2:
        raise ConfigError(f"{name}.n", f"must be an integer >= 2, got {g.n!r}")
    if not 0 <= g.t_start < g.t_end:
        raise ConfigError(name, f"need 0 <= t_start < t_end, got [{g.t_start}, {g.t_end}]")
    return g


def load_config_file(path: str | Path) -> dict:
    """Flatten a JSON config document into override keys."""
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from None
    flat: dict = {}
    for key in ("preset", "c", "mode", "tol"):
        if key in doc:
            flat[key] = doc[key]
    mix = doc.get("mixture", {})
    if "weights" in mix:
        flat["weights"] = mix["weights"]
    if "two_mix_a" in mix:
        flat["two_mix_a"] = mix["two_mix_a"]
    for key in ("grid", "samples"):
        if key in doc:
            flat[key] = doc[key]
    noise = doc.get("noise", {})
    for key in ("sigma", "seed"):
        if key in noise:
            flat[key] = noise[key]
    output = doc.get("output", {})
    if "path" in output:
        flat["file_out"] = output["path"]
    if "format" in output:
        flat["fmt"] = output["format"]
    return flat


def build_config(values: dict, env: dict | None = None) -> ExperimentConfig:
    """Resolve preset, explicit mixture and scalar fields into a validated config.

    ``values`` holds already-merged settings (file values overridden by flags).
    Output directory precedence: ``--out`` flag, ``$PAULIMIX_OUTPUT_DIR``, the
    config file's ``output.path``, then ``out``.
    """
    env = os.environ if env is None else env
    preset = values.get("preset")
    weights = None
    c = None
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError("preset", f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
        m = PRESETS[preset]
        weights = tuple(m.weights)
        c = m.decoherence.c
    if values.get("weights") is not None and values.get("two_mix_a") is not None:
        raise ConfigError("weights", "give either weights or two_mix_a, not both")
    if values.get("weights") is not None:
        w = values["weights"]
        if len(w) != 3:
            raise ConfigError("weights", f"need three weights, got {len(w)}")
        weights = tuple(float(x) for x in w)
    if values.get("two_mix_a") is not None:
        a = float(values["two_mix_a"])
        if not 0 <= a <= 1:
            raise ConfigError("two_mix_a", f"must lie in [0, 1], got {a}")
        weights = (0.0, 1.0 - a, a)
    if values.get("c") is not None:
        c = float(values["c"])
    if weights is None:
        raise ConfigError("weights", "no mixture given; use a preset, weights or two_mix_a")
    if c is None:
        raise ConfigError("c", "no decoherence rate given")
    try:
        MixingWeights(*weights)
    except ValueError as exc:
        raise ConfigError("weights", str(exc)) from None
    if not c > 0:
        raise ConfigError("c", f"must be positive, got {c}")

    kw = {}
    if "grid" in values:
        kw["grid"] = _grid(values["grid"], "grid", ExperimentConfig.grid)
    if "samples" in values:
        kw["samples"] = _grid(values["samples"], "samples", ExperimentConfig.samples)
    if values.get("sigma") is not None:
        kw["sigma"] = float(values["sigma"])
        if kw["sigma"] < 0:
            raise ConfigError("sigma", f"must be non-negative, got {kw['sigma']}")
    if values.get("seed") is not None:
        if not isinstance(values["seed"], int):
            raise ConfigError("seed", f"must be an integer, got {values['seed']!r}")
        kw["seed"] = values["seed"]
    if values.get("mode") is not None:
        if values["mode"] not in MODES:
            raise ConfigError("mode", f"must be one of {MODES}, got {values['mode']!r}")
        kw["mode"] = values["mode"]
    if values.get("fmt") is not None:
        if values["fmt"] not in FORMATS:
            raise ConfigError("format", f"must be one of {FORMATS}, got {values['fmt']!r}")
        kw["fmt"] = values["fmt"]
    if values.get("tol") is not None:
        kw["tol"] = float(values["tol"])
        if kw["tol"] <= 0:
            raise ConfigError("tol", "must be positive")
    out = values.get("out") or env.get(OUTPUT_ENV) or values.get("file_out") or "out"
    return ExperimentConfig(weights=weights, c=c, out=str(out), preset=preset, **kw)
