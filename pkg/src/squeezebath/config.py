"""
Scenario configuration: one YAML file with flat key groups.

Every group is optional; missing keys take the defaults below. Unknown groups
or keys are rejected, and values are checked against the same invariants the
simulation modules enforce, so a config that loads is a config that runs.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields

import numpy as np
import yaml

from .collisions import CollisionConfig
from .gaussian import DomainError
from .reservoir import ReservoirSpec

U1_CHOICES = ("unsqueeze", "identity", "random", "loop")
SCHEDULE_CHOICES = ("uniform", "cosine")
STROKE2_CHOICES = ("reversible", "relaxation")
FORMAT_CHOICES = ("csv", "json")
UNIT_CHOICES = ("omega", "coth")


class ConfigError(ValueError):
    pass


@dataclass
class ReservoirGroup:
    beta0: float = 1.0
    xi: float = 0.5
    omega: float = 1.0

    def validate(self):
        ReservoirSpec(self.beta0, self.xi, self.omega)


@dataclass
class CollisionGroup:
    theta_c: float = 0.1
    steps: int = 2000

    def validate(self):
        CollisionConfig(self.theta_c, ReservoirSpec(1.0, 0.0), self.steps)


@dataclass
class ProtocolGroup:
    steps: int = 10000
    u1: str = "unsqueeze"
    schedule: str = "uniform"
    stroke2: str = "reversible"
    # collisions per Gibbs step; 0 means exact replacement by the equilibrium state
    gibbs_collisions: int = 0
    loop_squeeze: float = 0.5
    loop_omega_ratio: float = 2.0

    def validate(self):
        if self.steps < 2:
            raise DomainError(f"protocol.steps must be >= 2, got {self.steps}")
        _choice("protocol.u1", self.u1, U1_CHOICES)
        _choice("protocol.schedule", self.schedule, SCHEDULE_CHOICES)
        _choice("protocol.stroke2", self.stroke2, STROKE2_CHOICES)
        if self.gibbs_collisions < 0:
            raise DomainError("protocol.gibbs_collisions must be >= 0")
        if not self.loop_omega_ratio > 0:
            raise DomainError("protocol.loop_omega_ratio must be > 0")


@dataclass
class ScanGroup:
    beta0_omega: float = 1.0
    xi_min: float = 0.0
    xi_max: float = 2.5
    xi_points: int = 51

    def validate(self):
        if not self.beta0_omega > 0:
            raise DomainError("scan.beta0_omega must be > 0")
        if self.xi_min < 0 or self.xi_max < self.xi_min:
            raise DomainError("scan grid needs 0 <= xi_min <= xi_max")
        if self.xi_points < 1:
            raise DomainError("scan.xi_points must be >= 1")

    def grid(self):
        return np.linspace(self.xi_min, self.xi_max, self.xi_points)


@dataclass
class OutputGroup:
    directory: str = "out"
    format: str = "csv"
    units: str = "omega"

    def validate(self):
        _choice("output.format", self.format, FORMAT_CHOICES)
        _choice("output.units", self.units, UNIT_CHOICES)


@dataclass
class OracleGroup:
    dim: int = 60
    tolerance: float = 1e-8
    flow_dim: int = 40
    samples: int = 10000
    seed: int = 0

    def validate(self):
        if self.dim < 2 or self.flow_dim < 2:
            raise DomainError("oracle dimensions must be >= 2")
        if not self.tolerance > 0:
            raise DomainError("oracle.tolerance must be > 0")
        if self.samples < 1:
            raise DomainError("oracle.samples must be >= 1")


@dataclass
class ScenarioConfig:
    reservoir: ReservoirGroup = field(default_factory=ReservoirGroup)
    collision: CollisionGroup = field(default_factory=CollisionGroup)
    protocol: ProtocolGroup = field(default_factory=ProtocolGroup)
    scan: ScanGroup = field(default_factory=ScanGroup)
    output: OutputGroup = field(default_factory=OutputGroup)
    oracle: OracleGroup = field(default_factory=OracleGroup)

    def validate(self):
        for f in fields(self):
            try:
                getattr(self, f.name).validate()
            except DomainError as exc:
                raise ConfigError(f"[{f.name}] {exc}") from exc
        return self

    @property
    def reservoir_spec(self):
        g = self.reservoir
        return ReservoirSpec(g.beta0, g.xi, g.omega)

    @property
    def collision_config(self):
        return CollisionConfig(self.collision.theta_c, self.reservoir_spec, self.collision.steps)

    def to_dict(self):
        return asdict(self)

    def dump(self):
        return yaml.safe_dump(self.to_dict(), sort_keys=False)


def _choice(name, value, choices):
    if value not in choices:
        raise DomainError(f"{name} must be one of {choices}, got {value!r}")


def _coerce(name, value, kind):
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{name} must be an integer, got {value!r}")
        return value
    if kind is float:
        if isinstance(value, str):
            # YAML 1.1 reads exponents without a dot ("1e-8") as strings
            try:
                value = float(value)
            except ValueError:
                raise ConfigError(f"{name} must be a number, got {value!r}") from None
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{name} must be a number, got {value!r}")
        if not math.isfinite(value):
            raise ConfigError(f"{name} must be finite, got {value!r}")
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"{name} must be a string, got {value!r}")
    return value


def from_dict(data):
    """Build and validate a :class:`ScenarioConfig` from nested mappings."""
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping of groups")
    groups = {f.name: f for f in fields(ScenarioConfig)}
    unknown = set(data) - set(groups)
    if unknown:
        raise ConfigError(f"unknown config group(s): {sorted(unknown)}")
    built = {}
    for name, f in groups.items():
        cls = f.default_factory
        raw = data.get(name) or {}
        if not isinstance(raw, dict):
            raise ConfigError(f"group {name!r} must be a mapping")
        types = {g.name: type(g.default) for g in fields(cls)}
        bad = set(raw) - set(types)
        if bad:
            raise ConfigError(f"unknown key(s) in {name!r}: {sorted(bad)}")
        built[name] = cls(**{k: _coerce(f"{name}.{k}", v, types[k]) for k, v in raw.items()})
    return ScenarioConfig(**built).validate()


def loads(text):
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed YAML: {exc}") from exc
    return from_dict(data)


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
