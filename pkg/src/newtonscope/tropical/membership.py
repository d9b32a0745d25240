from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from ..oracle import (
    AnswerTag,
    OracleAnswer,
    OracleContext,
    OracleSettings,
    build_oracle,
    query_oracle,
)
from ..poly.ops import apply_monomial_map_system, check_unimodular
from ..poly.types import DimensionMismatchError, PolySystem, as_fractions
from ..tracker import TrackSettings
from ..witness import ProjectionDimensionError, estimate_dimension, witness_for_projection
from .monomial import random_unimodular_map, transform_direction


class NoHypersurfaceProjectionError(ValueError):
    pass


# Witness coordinates below this lie on a coordinate hyperplane.
COORDINATE_ZERO_TOLERANCE = 1e-8


@dataclass(frozen=True, eq=False)
class ProjectionResult:
    kept: tuple[int, ...]
    direction: tuple[Fraction, ...] | None = None
    answer: OracleAnswer | None = None
    skipped: bool = False
    reason: str | None = None
    off_torus: bool = False

    @property
    def positive_dimensional(self) -> bool:
        """The query exposed a face with more than one point.

        Counts answers pass when some path converged off target. An EEP answer
        exposes the whole polytope and passes unless every witness point lies
        on a coordinate hyperplane (``off_torus``): then the hypersurface is
        cut out by a monomial and its polytope is a single point.
        """
        if self.answer is None:
            return False
        if self.answer.tag is AnswerTag.EEP:
            return not self.off_torus
        return self.answer.tag is AnswerTag.COUNTS and self.answer.other > 0

    def to_json(self) -> dict[str, Any]:
        return {
            "kept": list(self.kept),
            "direction": None if self.direction is None else [str(w) for w in self.direction],
            "answer": None if self.answer is None else self.answer.to_json(),
            "skipped": self.skipped,
            "reason": self.reason,
            "offTorus": self.off_torus,
        }


@dataclass(frozen=True, eq=False)
class MembershipReport:
    """Per-projection oracle answers for one direction; ``verdict`` is None when any was inconclusive."""

    omega: tuple[Fraction, ...]
    transformed_omega: tuple[Fraction, ...]
    matrix: np.ndarray
    transformed: bool
    projections: tuple[ProjectionResult, ...]
    verdict: bool | None
    seed: int | None = None

    @property
    def inconclusive(self) -> bool:
        return self.verdict is None

    def to_json(self) -> dict[str, Any]:
        return {
            "omega": [str(w) for w in self.omega],
            "transformedOmega": [str(w) for w in self.transformed_omega],
            "matrix": self.matrix.tolist(),
            "transformed": self.transformed,
            "projections": [p.to_json() for p in self.projections],
            "verdict": self.verdict,
            "seed": self.seed,
        }


def _resolve_map(
    monomial_map: str | Sequence[Sequence[int]] | np.ndarray | None, n: int, rng: np.random.Generator
) -> tuple[np.ndarray, bool]:
    if monomial_map is None:
        return np.eye(n, dtype=np.int64), False
    if isinstance(monomial_map, str):
        if monomial_map != "random":
            raise ValueError(f"monomial_map must be None, 'random' or a matrix, got {monomial_map!r}")
        return random_unimodular_map(n, rng), True
    matrix = check_unimodular(monomial_map)
    if matrix.shape[0] != n:
        raise DimensionMismatchError(f"monomial map is {matrix.shape[0]}x{matrix.shape[0]}, system has {n} variables")
    return matrix, True


class MembershipSession:
    """Witness sets and oracle contexts of every hypersurface projection, reused across directions."""

    def __init__(
        self,
        system: PolySystem,
        *,
        rng: np.random.Generator,
        track: TrackSettings | None = None,
        monomial_map: str | Sequence[Sequence[int]] | np.ndarray | None = None,
    ):
        self.track = track or TrackSettings()
        self.matrix, self.transformed = _resolve_map(monomial_map, system.n, rng)
        self.system = apply_monomial_map_system(system, self.matrix) if self.transformed else system
        n = self.system.n
        self.dimension = estimate_dimension(self.system, rng, self.track).dimension
        if self.dimension >= n:
            raise ValueError(f"variety has dimension {self.dimension} in C^{n}; nothing to test")
        self.contexts: list[tuple[tuple[int, ...], OracleContext | None, str | None]] = []
        self.off_torus: dict[tuple[int, ...], bool] = {}
        for kept in itertools.combinations(range(n), self.dimension + 1):
            drop = [j for j in range(n) if j not in kept]
            try:
                witness = witness_for_projection(self.system, drop, rng, self.track)
            except ProjectionDimensionError as exc:
                self.contexts.append((kept, None, str(exc)))
                continue
            projected = witness.projected_points()
            self.off_torus[kept] = bool(
                projected.size and np.all(np.min(np.abs(projected), axis=1) < COORDINATE_ZERO_TOLERANCE)
            )
            self.contexts.append((kept, build_oracle(witness, rng=rng, settings=self.track), None))
        if all(ctx is None for _, ctx, _ in self.contexts):
            raise NoHypersurfaceProjectionError(
                f"no coordinate projection onto {self.dimension + 1} coordinates is a hypersurface"
            )

    def query(
        self,
        omega: Sequence[Fraction | int | str],
        settings: OracleSettings | None = None,
        *,
        seed: int | None = None,
    ) -> MembershipReport:
        settings = settings or OracleSettings()
        w = as_fractions(omega)
        if len(w) != self.system.n:
            raise DimensionMismatchError(f"direction has {len(w)} entries, expected {self.system.n}")
        moved = transform_direction(self.matrix, w) if self.transformed else w
        results = []
        for kept, ctx, reason in self.contexts:
            if ctx is None:
                results.append(ProjectionResult(kept, skipped=True, reason=reason))
                continue
            direction = tuple(moved[j] for j in kept)
            answer = query_oracle(ctx, direction, settings, seed=seed)
            results.append(ProjectionResult(kept, direction, answer, off_torus=self.off_torus[kept]))
        answered = [r for r in results if not r.skipped]
        if any(r.answer is not None and r.answer.tag is AnswerTag.INCONCLUSIVE for r in answered):
            verdict = None
        else:
            verdict = all(r.positive_dimensional for r in answered)
        return MembershipReport(w, moved, self.matrix, self.transformed, tuple(results), verdict, seed)


def tropical_membership(
    system: PolySystem,
    omega: Sequence[Fraction | int | str],
    *,
    rng: np.random.Generator,
    settings: OracleSettings | None = None,
    track: TrackSettings | None = None,
    monomial_map: str | Sequence[Sequence[int]] | np.ndarray | None = None,
    seed: int | None = None,
) -> MembershipReport:
    """Whether every hypersurface projection's oracle exposes a positive-dimensional face at ``omega``."""
    session = MembershipSession(system, rng=rng, track=track, monomial_map=monomial_map)
    return session.query(omega, settings, seed=seed)
