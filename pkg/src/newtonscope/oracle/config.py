from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Mapping

from ..tracker import TrackSettings

# Largest ln(t) a query may reach; keeps t = exp(ln t) finite.
MAX_LOG_T = 700.0


class OracleConfigurationError(ValueError):
    pass


def ray_track_settings() -> TrackSettings:
    """Tracker settings for one geometric t-step; each step is a small parameter change."""
    return TrackSettings(initial_step=0.5, max_step=1.0, divergence_threshold=1e12)


@dataclass(frozen=True)
class OracleSettings:
    certainty: float = 3.0
    epsilon: float = 0.05
    min_tracks: int = 5
    max_tracks: int = 400
    step_resolution: float = 1.2
    # |s| beyond which a fast-moving path counts as heading to infinity.
    divergence_radius: float = 1e6
    frozen_tolerance: float = 1e-8
    track: TrackSettings = field(default_factory=ray_track_settings)

    def __post_init__(self) -> None:
        if not self.max_tracks > self.min_tracks >= 1:
            raise OracleConfigurationError(
                f"need max_tracks > min_tracks >= 1, got {self.max_tracks}, {self.min_tracks}"
            )
        if not self.step_resolution > 1:
            raise OracleConfigurationError(
                f"step_resolution must exceed 1, got {self.step_resolution}"
            )
        if self.max_tracks * math.log(self.step_resolution) > MAX_LOG_T:
            raise OracleConfigurationError(
                f"step_resolution {self.step_resolution} over {self.max_tracks} steps overflows t"
            )
        if self.epsilon <= 0:
            raise OracleConfigurationError(f"epsilon must be positive, got {self.epsilon}")
        if self.certainty <= 0:
            raise OracleConfigurationError(f"certainty must be positive, got {self.certainty}")
        if self.divergence_radius <= 0 or self.frozen_tolerance <= 0:
            raise OracleConfigurationError("divergence_radius and frozen_tolerance must be positive")

    def check_separation(self, min_separation: float) -> None:
        """Capture discs around the targets must not overlap."""
        if self.epsilon >= min_separation / 2:
            raise OracleConfigurationError(
                f"epsilon {self.epsilon} is not below half the target separation {min_separation:.3g}"
            )

    @property
    def log_step(self) -> float:
        return math.log(self.step_resolution)

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "OracleSettings":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise OracleConfigurationError(f"unknown oracle settings: {unknown}")
        defaults = cls()
        values: dict[str, Any] = {}
        for name in known - {"track"}:
            if name in data:
                values[name] = type(getattr(defaults, name))(data[name])
        if "track" in data:
            merged = {**defaults.track.to_dict(), **dict(data["track"])}
            values["track"] = TrackSettings.from_mapping(merged)
        return cls(**values)

    @classmethod
    def from_file(cls, path: Path) -> "OracleSettings":
        with path.open("r", encoding="utf-8") as handle:
            return cls.from_mapping(json.load(handle))

    def with_overrides(self, **changes: Any) -> "OracleSettings":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def to_dict(self) -> dict[str, Any]:
        payload = {f.name: getattr(self, f.name) for f in fields(self) if f.name != "track"}
        payload["track"] = self.track.to_dict()
        return payload
