"""Experiment configuration: JSON schema, named system presets and caps."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .coding import ENUMERATION_CAP
from .driving import MarkovChainSpec, driving_preset
from .fiber import FiberSystemSpec
from .words import Alphabet

MAX_HORIZON = 10 ** 7

SYSTEM_PRESETS = ("free-monoid-uniform", "z2-uniform", "f2-markov")

_BINARY_FIBER = Alphabet(("0", "1"))


class ConfigError(ValueError):
    """The experiment configuration is malformed or exceeds a cap."""


def system_preset(name: str) -> tuple[MarkovChainSpec, FiberSystemSpec]:
    """Named complete systems: a driving measure paired with a fiber system."""
    half = Fraction(1, 2)
    if name == "free-monoid-uniform":
        driving = MarkovChainSpec.bernoulli(Alphabet(("0", "1")), (half, half))
        fiber = FiberSystemSpec("free-monoid", _BINARY_FIBER, (half, half))
        return driving, fiber
    if name == "z2-uniform":
        return driving_preset("z2-uniform"), FiberSystemSpec("z2", _BINARY_FIBER, (half, half))
    if name == "f2-markov":
        return driving_preset("f2-markov"), FiberSystemSpec("f2", _BINARY_FIBER, (half, half))
    raise ConfigError(f"unknown preset {name!r}; known presets: {', '.join(SYSTEM_PRESETS)}")


@dataclass(frozen=True)
class ExperimentConfig:
    driving: MarkovChainSpec
    fiber: FiberSystemSpec
    horizons: tuple[int, ...]
    block_lengths: tuple[int, ...]
    seeds: tuple[int, ...]
    out: Path
    format: str = "csv"
    tolerance: float = 0.1

    def __post_init__(self):
        if not self.horizons:
            raise ConfigError("at least one horizon is required")
        if list(self.horizons) != sorted(self.horizons):
            raise ConfigError("horizons must be ascending")
        for n in self.horizons:
            if not 0 <= n <= MAX_HORIZON:
                raise ConfigError(f"horizon {n} outside [0, {MAX_HORIZON}]")
        if not self.block_lengths:
            raise ConfigError("at least one block length is required")
        cap_base = self.driving.alphabet.size * self.fiber.fiber_alphabet.size
        for k in self.block_lengths:
            if k < 1:
                raise ConfigError("block lengths must be >= 1")
            if cap_base ** k > ENUMERATION_CAP:
                raise ConfigError(
                    f"block length {k} exceeds the enumeration cap ({cap_base}**{k} > 2**24)"
                )
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        for s in self.seeds:
            if not 0 <= s < 2 ** 64:
                raise ConfigError("seeds must be 64-bit unsigned integers")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if self.tolerance < 0:
            raise ConfigError("tolerance must be nonnegative")
        from .actions import driving_size

        fixed = driving_size(self.fiber.action_kind)
        if fixed is not None and self.driving.alphabet.size != fixed:
            raise ConfigError(
                f"action {self.fiber.action_kind!r} needs a driving alphabet of size {fixed}"
            )


def _spec_pair(data: dict) -> tuple[MarkovChainSpec, FiberSystemSpec]:
    preset = data.get("preset")
    driving = data.get("driving")
    fiber = data.get("fiber")
    if preset is not None:
        base_driving, base_fiber = system_preset(preset)
    else:
        base_driving = base_fiber = None
    if isinstance(driving, str):
        driving = driving_preset(driving)
    elif isinstance(driving, dict):
        driving = MarkovChainSpec.from_dict(driving)
    elif driving is None:
        driving = base_driving
    else:
        raise ConfigError("driving must be a preset name or a spec object")
    if isinstance(fiber, dict):
        fiber = FiberSystemSpec.from_dict(fiber)
    elif fiber is None:
        fiber = base_fiber
    elif fiber is not None:
        raise ConfigError("fiber must be a spec object")
    if driving is None or fiber is None:
        raise ConfigError("config must name a preset or give both driving and fiber specs")
    return driving, fiber


def load_config(data: dict, overrides: dict | None = None) -> ExperimentConfig:
    """Build a validated config from a JSON document plus CLI overrides."""
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    merged = dict(data)
    for key, value in (overrides or {}).items():
        if value is not None and value != []:
            merged[key] = value
    try:
        driving, fiber = _spec_pair(merged)
        return ExperimentConfig(
            driving=driving,
            fiber=fiber,
            horizons=tuple(int(n) for n in merged.get("horizons", (5000,))),
            block_lengths=tuple(int(k) for k in merged.get("block_lengths", (4,))),
            seeds=tuple(int(s) for s in merged.get("seeds", (1, 2))),
            out=Path(merged.get("out", "fiberlab-reports")),
            format=str(merged.get("format", "csv")),
            tolerance=float(merged.get("tolerance", 0.1)),
        )
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid configuration: {exc}") from exc


def load_config_file(path: str | Path, overrides: dict | None = None) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return load_config(data, overrides)
