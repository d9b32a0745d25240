from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Mapping

import numpy as np

from ..poly.types import LineFamily, PolySystem
from ..witness import WitnessSet


class Verdict(str, Enum):
    TO_TARGET = "to_target"
    TO_OTHER = "to_other"
    DIVERGED = "diverged"
    FROZEN = "frozen"
    UNDECIDED = "undecided"


class AnswerTag(str, Enum):
    EEP = "eep"
    COUNTS = "counts"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True, eq=False)
class PathTrace:
    """Samples ``(t, s, |ds/dlog t|)`` of one tracked root; ``t`` strictly increasing."""

    path_index: int
    samples: tuple[tuple[float, complex, float], ...]
    verdict: Verdict
    target: int | None = None
    limit: complex | None = None
    decided_at: int | None = None
    failed: bool = False
    displacement: float = 0.0

    def to_json(self) -> dict[str, Any]:
        return {
            "path": self.path_index,
            "verdict": self.verdict.value,
            "target": self.target,
            "limit": None if self.limit is None else [self.limit.real, self.limit.imag],
            "decidedAt": self.decided_at,
            "failed": self.failed,
            "samples": [[t, s.real, s.imag, d] for t, s, d in self.samples],
        }

    @classmethod
    def from_json(cls, payload: Mapping[str, Any]) -> "PathTrace":
        limit = payload.get("limit")
        return cls(
            path_index=int(payload["path"]),
            samples=tuple((float(t), complex(re, im), float(d)) for t, re, im, d in payload["samples"]),
            verdict=Verdict(payload["verdict"]),
            target=payload.get("target"),
            limit=None if limit is None else complex(*limit),
            decided_at=payload.get("decidedAt"),
            failed=bool(payload.get("failed", False)),
        )


@dataclass(frozen=True, eq=False)
class OracleContext:
    """A hypersurface witness set moved onto the line family at ``t = 1``.

    ``system`` is square in the unknowns ``(s, z_dropped)``: the equations of
    the variety squared up to codimension, followed by the witness hyperplanes.
    ``starts`` holds one such vector per witness point.
    """

    witness: WitnessSet
    family: LineFamily
    system: PolySystem
    starts: np.ndarray

    @property
    def degree(self) -> int:
        return self.starts.shape[0]

    @property
    def n(self) -> int:
        return self.family.n

    @property
    def kept(self) -> tuple[int, ...]:
        return self.witness.projection

    @property
    def dropped(self) -> tuple[int, ...]:
        return self.witness.dropped

    @property
    def start_points(self) -> np.ndarray:
        """The ``s``-values of the start vectors."""
        return self.starts[:, 0]


@dataclass(frozen=True, eq=False)
class OracleAnswer:
    tag: AnswerTag
    omega: tuple[Fraction, ...]
    beta: tuple[int, ...] = ()
    beta_inf: int = 0
    other: int = 0
    traces: tuple[PathTrace, ...] = ()
    targets: tuple[complex, ...] = ()
    epsilon: float = 0.0
    steps: int = 0
    reason: str | None = None
    seed: int | None = None

    @property
    def degree(self) -> int:
        return len(self.traces)

    @property
    def is_eep(self) -> bool:
        return self.tag is AnswerTag.EEP

    @property
    def counts(self) -> tuple[int, ...] | None:
        """``(beta_1, ..., beta_n, beta_inf)`` for a Counts answer."""
        if self.tag is not AnswerTag.COUNTS:
            return None
        return self.beta + (self.beta_inf,)

    @property
    def vertex(self) -> bool:
        return self.tag is AnswerTag.COUNTS and self.other == 0

    @property
    def vertex_point(self) -> tuple[int, ...] | None:
        return self.counts if self.vertex else None

    def to_json(self, *, include_traces: bool = False) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "tag": self.tag.value,
            "omega": [str(w) for w in self.omega],
            "seed": self.seed,
            "steps": self.steps,
        }
        if self.tag is AnswerTag.COUNTS:
            payload.update(
                beta=list(self.beta), betaInf=self.beta_inf, other=self.other, vertex=self.vertex
            )
        if self.reason is not None:
            payload["reason"] = self.reason
        if include_traces:
            payload["targets"] = [[g.real, g.imag] for g in self.targets]
            payload["epsilon"] = self.epsilon
            payload["traces"] = [trace.to_json() for trace in self.traces]
        return payload
