from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Mapping


@dataclass(frozen=True)
class TrackSettings:
    initial_step: float = 0.05
    min_step: float = 1e-7
    max_step: float = 0.25
    max_newton_iters: int = 5
    newton_tol: float = 1e-9
    step_expansion: float = 1.5
    step_contraction: float = 0.5
    max_steps: int = 20000
    divergence_threshold: float = 1e6
    # Fraction of a segment beyond which a failing path counts as heading to infinity.
    end_zone: float = 0.999
    workers: int = 1

    def __post_init__(self) -> None:
        if not 0 < self.min_step <= self.initial_step:
            raise ValueError(
                f"need 0 < min_step <= initial_step, got {self.min_step}, {self.initial_step}"
            )
        if self.max_step < self.initial_step:
            raise ValueError(f"max_step {self.max_step} is below initial_step {self.initial_step}")
        if self.newton_tol <= 0:
            raise ValueError(f"newton_tol must be positive, got {self.newton_tol}")
        if self.max_newton_iters < 1:
            raise ValueError(f"max_newton_iters must be >= 1, got {self.max_newton_iters}")
        if not 0 < self.step_contraction < 1 < self.step_expansion:
            raise ValueError(
                "need 0 < step_contraction < 1 < step_expansion, got "
                f"{self.step_contraction}, {self.step_expansion}"
            )
        if self.max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps}")
        if self.divergence_threshold <= 0:
            raise ValueError("divergence_threshold must be positive")
        if not 0 < self.end_zone <= 1:
            raise ValueError(f"end_zone must lie in (0, 1], got {self.end_zone}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "TrackSettings":
        known = {f.name: f.type for f in fields(cls)}
        unknown = sorted(set(data) - set(known))
        if unknown:
            raise ValueError(f"unknown tracker settings: {unknown}")
        defaults = cls()
        values: dict[str, Any] = {}
        for name in known:
            if name in data:
                current = getattr(defaults, name)
                values[name] = type(current)(data[name])
        return cls(**values)

    @classmethod
    def from_file(cls, path: Path) -> "TrackSettings":
        with path.open("r", encoding="utf-8") as handle:
            payload = json.load(handle)
        return cls.from_mapping(payload)

    def with_overrides(self, **changes: Any) -> "TrackSettings":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)
