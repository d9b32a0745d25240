from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from multiprocessing import Pool, cpu_count
from typing import Sequence

import numpy as np

from ..numerics import random_unit_complex
from ..poly.compiled import CompiledSystem, monomials_and_gradients, relative_values, term_scales
from ..poly.types import DimensionMismatchError, LineFamily, PolySystem, as_fractions
from ..tracker import Homotopy, PathStatus, TrackSettings, track_segment
from ..tracker.track import CLUSTER_TOLERANCE
from ..witness import (
    TrackingFailureError,
    WitnessSet,
    WitnessUndercountError,
    line_slice,
    move_slice,
    square_up,
)
from ..witness.build import MAX_RESLICES
from .config import OracleSettings
from .types import AnswerTag, OracleAnswer, OracleContext, PathTrace, Verdict

# Consecutive steps a derivative criterion must hold before a path is decided.
DECISION_STREAK = 2


def default_targets(n: int) -> tuple[complex, ...]:
    """The ``n``-th roots of unity, starting at 1."""
    return tuple(complex(np.exp(2j * np.pi * i / n)) for i in range(n))


def build_oracle(
    witness: WitnessSet,
    omega: Sequence[Fraction | int | str] | None = None,
    *,
    a: Sequence[complex] | None = None,
    b: Sequence[complex] | None = None,
    targets: Sequence[complex] | None = None,
    rng: np.random.Generator,
    settings: TrackSettings | None = None,
) -> OracleContext:
    """Move ``witness`` onto the line ``x = a * s - b`` and record the start vectors.

    Without explicit ``a, b`` the targets default to roots of unity and ``a``
    is drawn with unit modulus.
    """
    settings = settings or TrackSettings()
    n = witness.n
    if (a is None) != (b is None):
        raise ValueError("a and b must be given together")
    if a is not None and b is not None:
        family = LineFamily((Fraction(0),) * n, tuple(a), tuple(b))
    else:
        gammas = tuple(targets) if targets is not None else default_targets(n)
        if len(gammas) != n:
            raise DimensionMismatchError(f"{len(gammas)} targets for a hypersurface in C^{n}")
        family = LineFamily.from_targets(gammas, [random_unit_complex(rng) for _ in range(n)])
    if family.n != n:
        raise DimensionMismatchError(f"line family has {family.n} coordinates, witness has {n}")
    if omega is not None:
        family = family.with_direction(omega)

    new_slice = line_slice(family.a, family.b)
    moved: WitnessSet | None = None
    failure: TrackingFailureError | None = None
    for _ in range(MAX_RESLICES + 1):
        try:
            moved = move_slice(witness, new_slice, settings, rng)
            break
        except TrackingFailureError as exc:
            failure = exc
    if moved is None:
        found = failure.total - failure.lost if failure is not None else 0
        raise WitnessUndercountError(found, witness.degree)

    kept = list(witness.projection)
    s_values = np.array([family.parameter_of(p[kept]) for p in moved.points], dtype=complex)
    distinct = sum(
        all(abs(s - t) > CLUSTER_TOLERANCE for t in s_values[:i]) for i, s in enumerate(s_values)
    )
    if distinct < witness.degree:
        raise WitnessUndercountError(distinct, witness.degree)

    count = witness.ambient - n + 1 - witness.hyperplanes
    hyperplanes = witness.system.polys[len(witness.equations) :]
    system = PolySystem(
        witness.system.variables,
        tuple(square_up(witness.equations.polys, count, rng)) + hyperplanes,
    )
    starts = np.column_stack([s_values, moved.points[:, list(witness.dropped)]])
    return OracleContext(moved, family, system, starts)


@dataclass(frozen=True, eq=False)
class RaySystem:
    """The context system on the line family for one direction ``omega``.

    Kept coordinates are ``t**omega * (a s - b)``; every equation is divided
    by ``t**M_j`` with ``M_j`` its largest term weight, so each term carries
    ``exp(ln t * shift)`` with ``shift <= 0``.
    """

    exponents: np.ndarray
    coefficients: np.ndarray
    shifts: np.ndarray
    rows: np.ndarray
    kept: tuple[int, ...]
    dropped: tuple[int, ...]
    a: np.ndarray
    b: np.ndarray

    @classmethod
    def from_context(cls, ctx: OracleContext, omega: Sequence[Fraction]) -> "RaySystem":
        compiled = CompiledSystem.from_system(ctx.system)
        kept = list(ctx.kept)
        weights = compiled.exponents[:, kept].astype(float) @ np.array([float(w) for w in omega])
        owners = np.argmax(compiled.rows, axis=0)
        tops = np.full(compiled.m, -np.inf)
        np.maximum.at(tops, owners, weights)
        return cls(
            exponents=compiled.exponents,
            coefficients=compiled.coefficients,
            shifts=weights - tops[owners],
            rows=compiled.rows,
            kept=ctx.kept,
            dropped=ctx.dropped,
            a=np.array(ctx.family.a, dtype=complex),
            b=np.array(ctx.family.b, dtype=complex),
        )

    @property
    def size(self) -> int:
        return 1 + len(self.dropped)

    def coordinates(self, v: np.ndarray) -> np.ndarray:
        """Ambient point with kept coordinates ``a s - b`` (before the ``t**omega`` scaling)."""
        q = np.empty(len(self.kept) + len(self.dropped), dtype=complex)
        q[list(self.kept)] = self.a * v[0] - self.b
        q[list(self.dropped)] = v[1:]
        return q

    def segment(self, u0: float, u1: float) -> "RayHomotopy":
        return RayHomotopy(self, u0, u1)


class RayHomotopy(Homotopy):
    """``ln t`` moving linearly from ``u0`` to ``u1`` as ``lam`` goes from 0 to 1."""

    def __init__(self, system: RaySystem, u0: float, u1: float):
        self.system = system
        self.u0 = float(u0)
        self.u1 = float(u1)
        self.size = system.size

    def _scaled(self, lam: float) -> np.ndarray:
        u = self.u0 + lam * (self.u1 - self.u0)
        return self.system.coefficients * np.exp(u * self.system.shifts)

    def _terms(self, z: np.ndarray, lam: float) -> np.ndarray:
        q = self.system.coordinates(np.asarray(z, dtype=complex))
        return self._scaled(lam) * (q[None, :] ** self.system.exponents).prod(axis=1)

    def evaluate(self, z: np.ndarray, lam: float) -> np.ndarray:
        return self.system.rows @ self._terms(z, lam)

    def jacobian(self, z: np.ndarray, lam: float) -> np.ndarray:
        q = self.system.coordinates(np.asarray(z, dtype=complex))
        _, grads = monomials_and_gradients(q, self.system.exponents)
        d_s = grads[:, list(self.system.kept)] @ self.system.a
        columns = np.column_stack([d_s, grads[:, list(self.system.dropped)]])
        return self.system.rows @ (self._scaled(lam)[:, None] * columns)

    def derivative(self, z: np.ndarray, lam: float) -> np.ndarray:
        terms = self._terms(z, lam) * self.system.shifts * (self.u1 - self.u0)
        return self.system.rows @ terms

    def residual(self, z: np.ndarray, lam: float) -> float:
        q = self.system.coordinates(np.asarray(z, dtype=complex))
        scaled = self._scaled(lam)
        values = self.system.rows @ (scaled * (q[None, :] ** self.system.exponents).prod(axis=1))
        sizes = self.system.rows @ (np.abs(scaled) * term_scales(q, self.system.exponents))
        return relative_values(values, sizes)

    def monitored_norm(self, z: np.ndarray) -> float:
        return abs(complex(z[0]))

    def is_stationary(self) -> bool:
        return self.u0 == self.u1 or not np.any(self.system.shifts)


def _nearest_target(s: complex, targets: Sequence[complex], epsilon: float) -> int | None:
    distances = [abs(s - g) for g in targets]
    best = int(np.argmin(distances))
    return best if distances[best] <= epsilon else None


def _converged(
    index: int,
    samples: list[tuple[float, complex, float]],
    step: int,
    displacement: float,
    targets: Sequence[complex],
    settings: OracleSettings,
) -> PathTrace:
    limit = samples[-1][1]
    target = _nearest_target(limit, targets, settings.epsilon)
    return PathTrace(
        index,
        tuple(samples),
        Verdict.TO_TARGET if target is not None else Verdict.TO_OTHER,
        target=target,
        limit=limit,
        decided_at=step,
        displacement=displacement,
    )


def run_path(
    ray: RaySystem,
    index: int,
    start: np.ndarray,
    targets: Sequence[complex],
    settings: OracleSettings,
) -> PathTrace:
    """Follow one root along ``t = step_resolution**k`` until it is decided."""
    log_r = settings.log_step
    fast = 10.0**settings.certainty
    slow = 10.0**-settings.certainty
    z = np.array(start, dtype=complex)
    s = complex(z[0])
    samples: list[tuple[float, complex, float]] = [(1.0, s, 0.0)]
    displacement = 0.0
    fast_streak = slow_streak = 0
    for step in range(1, settings.max_tracks + 1):
        result = track_segment(ray.segment((step - 1) * log_r, step * log_r), z, settings.track)
        t = math.exp(step * log_r)
        if result.status is PathStatus.FAILED:
            return PathTrace(
                index, tuple(samples), Verdict.UNDECIDED, decided_at=step, failed=True,
                displacement=displacement,
            )
        z = result.endpoint
        moved = abs(complex(z[0]) - s)
        s = complex(z[0])
        derivative = moved / log_r
        samples.append((t, s, derivative))
        if result.status is PathStatus.DIVERGED:
            return PathTrace(
                index, tuple(samples), Verdict.DIVERGED, decided_at=step, displacement=displacement
            )
        if step <= settings.min_tracks:
            displacement += moved
        escaping = abs(s) > settings.divergence_radius and derivative > fast
        fast_streak = fast_streak + 1 if escaping else 0
        slow_streak = slow_streak + 1 if derivative < slow else 0
        if step < settings.min_tracks:
            continue
        if step == settings.min_tracks and displacement < settings.frozen_tolerance:
            return PathTrace(
                index, tuple(samples), Verdict.FROZEN, limit=s, decided_at=step,
                displacement=displacement,
            )
        if fast_streak >= DECISION_STREAK:
            return PathTrace(
                index, tuple(samples), Verdict.DIVERGED, decided_at=step, displacement=displacement
            )
        if slow_streak >= DECISION_STREAK:
            return _converged(index, samples, step, displacement, targets, settings)
    return PathTrace(
        index, tuple(samples), Verdict.UNDECIDED, decided_at=None, displacement=displacement
    )


def _path_worker(
    args: tuple[RaySystem, int, np.ndarray, tuple[complex, ...], OracleSettings],
) -> PathTrace:
    return run_path(*args)


def query_oracle(
    ctx: OracleContext,
    omega: Sequence[Fraction | int | str],
    settings: OracleSettings | None = None,
    *,
    seed: int | None = None,
) -> OracleAnswer:
    """Track every start root as ``t -> infinity`` along direction ``omega`` and count limits."""
    settings = settings or OracleSettings()
    omega = as_fractions(omega)
    if len(omega) != ctx.n:
        raise DimensionMismatchError(f"omega has {len(omega)} entries, expected {ctx.n}")
    family = ctx.family.with_direction(omega)
    settings.check_separation(family.min_separation())
    targets = family.targets
    ray = RaySystem.from_context(ctx, omega)

    tasks = [(ray, i, start, targets, settings) for i, start in enumerate(ctx.starts)]
    workers = min(settings.track.workers, cpu_count(), max(len(tasks), 1))
    if workers > 1:
        with Pool(processes=workers) as pool:
            traces = list(pool.imap(_path_worker, tasks))
    else:
        traces = [_path_worker(task) for task in tasks]

    def answer(tag: AnswerTag, **extra) -> OracleAnswer:
        steps = max((tr.decided_at or settings.max_tracks for tr in traces), default=0)
        return OracleAnswer(
            tag, omega, traces=tuple(traces), targets=targets, epsilon=settings.epsilon,
            steps=steps, seed=seed, **extra,
        )

    failed = [tr.path_index for tr in traces if tr.failed]
    if failed:
        return answer(AnswerTag.INCONCLUSIVE, reason=f"tracking failed on paths {failed}")
    if traces and all(tr.verdict is Verdict.FROZEN for tr in traces):
        return answer(AnswerTag.EEP)
    undecided = [tr.path_index for tr in traces if tr.verdict is Verdict.UNDECIDED]
    if undecided:
        return answer(
            AnswerTag.INCONCLUSIVE,
            reason=f"reached max_tracks={settings.max_tracks} with paths {undecided} undecided",
        )
    # A root that never moved while others did has already reached its limit.
    traces = [
        _converged(
            tr.path_index, list(tr.samples), tr.decided_at or 0, tr.displacement, targets, settings
        )
        if tr.verdict is Verdict.FROZEN
        else tr
        for tr in traces
    ]
    beta = [0] * ctx.n
    for tr in traces:
        if tr.verdict is Verdict.TO_TARGET and tr.target is not None:
            beta[tr.target] += 1
    return answer(
        AnswerTag.COUNTS,
        beta=tuple(beta),
        beta_inf=sum(tr.verdict is Verdict.DIVERGED for tr in traces),
        other=sum(tr.verdict is Verdict.TO_OTHER for tr in traces),
    )
