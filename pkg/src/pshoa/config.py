"""Experiment configuration: defaults mirroring the reference setup, JSON
round-tripping, and the figure presets."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .errors import DomainError

SQ2 = float(np.sqrt(2.0) / 2.0)

PRESET_DIRECTIONS = {
    "fig2": (1.0, 0.0, 0.0),   # along the spheroid's long axis
    "fig3": (0.0, 1.0, 0.0),   # along a short axis
    "fig4": (SQ2, SQ2, 0.0),   # oblique in the x-y plane
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one encoding/transcoding experiment run."""

    label: str = "experiment"
    frequency: float = 541.8            # Hz
    sound_speed: float = 343.0          # m/s
    order: int = 12                     # encoding truncation order N
    sigma: float = 0.0                  # regularization (0 = none)
    n_sim: int = 30                     # internal simulation order
    n_sum: int | None = None            # transcoding sum cap, defaults to order
    sphere_radius: float = 0.198        # m
    sphere_grid: tuple = (16, 32)       # theta x phi microphones
    spheroid_r_long: float = 1.0        # m
    spheroid_r_short: float = 0.05      # m
    spheroid_grid: tuple = (16, 32)     # eta x phi microphones
    long_axis: str = "x"
    incidence: tuple = (1.0, 0.0, 0.0)  # unit propagation direction
    grid_extent: float = 2.0            # m, grid spans [-extent, extent]
    grid_count: int = 201               # points per axis (odd keeps the origin on-grid)
    threshold_db: float = 30.0
    precision: str = "extended"
    dps: int = 50
    threads: int = 1

    def __post_init__(self):
        for name in ("frequency", "sound_speed", "sphere_radius", "spheroid_r_long",
                     "spheroid_r_short", "grid_extent"):
            if getattr(self, name) <= 0:
                raise DomainError(f"config field {name} must be positive")
        if self.order < 0:
            raise DomainError("config field order must be nonnegative")
        if self.sigma < 0:
            raise DomainError("config field sigma must be nonnegative")
        if self.long_axis not in ("x", "y", "z"):
            raise DomainError("config field long_axis must be one of x, y, z")
        if self.precision not in ("double", "extended"):
            raise DomainError("config field precision must be double or extended")
        d = np.asarray(self.incidence, dtype=float)
        if np.linalg.norm(d) == 0:
            raise DomainError("config field incidence must be nonzero")
        object.__setattr__(self, "incidence", tuple(float(v) for v in d / np.linalg.norm(d)))
        object.__setattr__(self, "sphere_grid", tuple(int(v) for v in self.sphere_grid))
        object.__setattr__(self, "spheroid_grid", tuple(int(v) for v in self.spheroid_grid))

    @property
    def wavenumber(self) -> float:
        return 2.0 * np.pi * self.frequency / self.sound_speed

    @property
    def transcode_sum(self) -> int:
        return self.order if self.n_sum is None else self.n_sum

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DomainError(f"config is not valid JSON: {exc}") from exc
        known = set(cls.__dataclass_fields__)
        for key in raw:
            if key not in known:
                raise DomainError(f"unknown config key {key!r}")
        for key in ("sphere_grid", "spheroid_grid", "incidence"):
            if key in raw:
                raw[key] = tuple(raw[key])
        try:
            return cls(**raw)
        except TypeError as exc:
            raise DomainError(f"malformed config: {exc}") from exc

    def save(self, path: str) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_json() + "\n")

    @classmethod
    def load(cls, path: str) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_json(fh.read())


def preset(name: str) -> ExperimentConfig:
    """Named figure configurations: three incidence directions at 541.8 Hz."""
    try:
        direction = PRESET_DIRECTIONS[name]
    except KeyError:
        raise DomainError(
            f"unknown preset {name!r}; choose from {sorted(PRESET_DIRECTIONS)}"
        ) from None
    return ExperimentConfig(label=name, incidence=direction)


def with_overrides(cfg: ExperimentConfig, **kwargs) -> ExperimentConfig:
    """Copy of the config with the given fields replaced."""
    kwargs = {k: v for k, v in kwargs.items() if v is not None}
    return replace(cfg, **kwargs) if kwargs else cfg
