from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from enum import Enum
from multiprocessing import Pool, cpu_count
from typing import Protocol, Sequence

import numpy as np

from ..numerics import SingularMatrixError, random_gamma, scaled_solve
from ..poly.compiled import CompiledSystem
from ..poly.types import PolySystem, Polynomial
from .config import TrackSettings
from .homotopy import Homotopy, StraightLineHomotopy

# Endpoints closer than this (max-norm) are the same solution.
CLUSTER_TOLERANCE = 1e-6
# Largest relative size of the first Newton update before a step counts as a jump.
MAX_FIRST_CORRECTION = 0.1
# Consecutive accepted steps before the step size grows.
EXPANSION_STREAK = 3


class PathStatus(str, Enum):
    SUCCESS = "success"
    DIVERGED = "diverged"
    FAILED = "failed"


@dataclass(frozen=True, eq=False)
class PathResult:
    status: PathStatus
    endpoint: np.ndarray
    steps: int
    final_residual: float
    progress: float
    cluster: int | None = None

    @property
    def success(self) -> bool:
        return self.status is PathStatus.SUCCESS

    def lost(self, end_zone: float) -> bool:
        """Failed before reaching the end zone of the segment."""
        return self.status is PathStatus.FAILED and self.progress < end_zone


@dataclass(frozen=True, eq=False)
class NewtonResult:
    point: np.ndarray
    residual: float
    iterations: int
    converged: bool


class SquareSystem(Protocol):
    def evaluate(self, z: np.ndarray) -> np.ndarray: ...

    def jacobian(self, z: np.ndarray) -> np.ndarray: ...

    def residual(self, z: np.ndarray) -> float: ...


def _relative_size(delta: np.ndarray, z: np.ndarray) -> float:
    if not delta.size:
        return 0.0
    return float(np.max(np.abs(delta) / (1.0 + np.abs(z))))


def newton_correct(
    system: SquareSystem,
    point: Sequence[complex] | np.ndarray,
    *,
    tol: float,
    max_iters: int,
    max_first_step: float | None = None,
) -> NewtonResult:
    """Newton iterations until the update is below ``tol`` componentwise (relative) or the
    residual is below ``tol``. A singular Jacobian ends the correction unconverged."""
    z = np.array(point, dtype=complex)
    residual = system.residual(z)
    if residual <= tol:
        return NewtonResult(z, residual, 0, True)
    previous = math.inf
    for iteration in range(1, max_iters + 1):
        try:
            delta = scaled_solve(system.jacobian(z), -system.evaluate(z))
        except SingularMatrixError:
            return NewtonResult(z, residual, iteration, False)
        size = _relative_size(delta, z)
        if not math.isfinite(size):
            return NewtonResult(z, residual, iteration, False)
        if iteration == 1 and max_first_step is not None and size > max_first_step:
            return NewtonResult(z, residual, iteration, False)
        if size > tol and size > previous:
            return NewtonResult(z, residual, iteration, False)
        z = z + delta
        residual = system.residual(z)
        if size <= tol or residual <= tol:
            return NewtonResult(z, residual, iteration, True)
        previous = size
    return NewtonResult(z, residual, max_iters, False)


def _tangent(homotopy: Homotopy, z: np.ndarray, lam: float) -> np.ndarray:
    return scaled_solve(homotopy.jacobian(z, lam), -homotopy.derivative(z, lam))


def predictor_step(homotopy: Homotopy, point: np.ndarray, lam: float, step: float) -> np.ndarray:
    """Classical Runge-Kutta step on ``dz/dlam = -H_z^{-1} H_lam``."""
    z = np.array(point, dtype=complex)
    if step == 0:
        return z
    k1 = _tangent(homotopy, z, lam)
    k2 = _tangent(homotopy, z + 0.5 * step * k1, lam + 0.5 * step)
    k3 = _tangent(homotopy, z + 0.5 * step * k2, lam + 0.5 * step)
    k4 = _tangent(homotopy, z + step * k3, lam + step)
    return z + (step / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def _finish(homotopy: Homotopy, z: np.ndarray, steps: int, settings: TrackSettings) -> PathResult:
    polish = newton_correct(
        homotopy.at(1.0), z, tol=settings.newton_tol, max_iters=settings.max_newton_iters
    )
    endpoint = polish.point if polish.converged else z
    residual = homotopy.residual(endpoint, 1.0)
    status = PathStatus.SUCCESS if residual <= settings.newton_tol else PathStatus.FAILED
    return PathResult(status, endpoint, steps, residual, 1.0)


def track_segment(
    homotopy: Homotopy, start: Sequence[complex] | np.ndarray, settings: TrackSettings
) -> PathResult:
    """Follow one solution path from ``lam = 0`` to ``lam = 1`` with adaptive steps."""
    z = np.array(start, dtype=complex)
    if homotopy.is_stationary():
        return _finish(homotopy, z, 1, settings)

    lam = 0.0
    step = settings.initial_step
    steps = 0
    streak = 0
    while lam < 1.0:
        if steps >= settings.max_steps:
            return PathResult(PathStatus.FAILED, z, steps, homotopy.residual(z, lam), lam)
        step = min(step, settings.max_step, 1.0 - lam)
        target = 1.0 if 1.0 - (lam + step) < 1e-14 else lam + step
        steps += 1
        try:
            predicted = predictor_step(homotopy, z, lam, target - lam)
            corrected = newton_correct(
                homotopy.at(target),
                predicted,
                tol=settings.newton_tol,
                max_iters=settings.max_newton_iters,
                max_first_step=MAX_FIRST_CORRECTION,
            )
            accepted = corrected.converged
        except SingularMatrixError:
            accepted = False
        if accepted:
            z = corrected.point
            lam = target
            if homotopy.monitored_norm(z) > settings.divergence_threshold:
                return PathResult(PathStatus.DIVERGED, z, steps, corrected.residual, lam)
            streak += 1
            if streak >= EXPANSION_STREAK:
                step *= settings.step_expansion
                streak = 0
        else:
            streak = 0
            step *= settings.step_contraction
            if step < settings.min_step:
                return PathResult(PathStatus.FAILED, z, steps, homotopy.residual(z, lam), lam)
    return _finish(homotopy, z, steps, settings)


def _track_worker(args: tuple[Homotopy, np.ndarray, TrackSettings]) -> PathResult:
    homotopy, start, settings = args
    return track_segment(homotopy, start, settings)


def track_many(
    homotopy: Homotopy, starts: Sequence[Sequence[complex]], settings: TrackSettings
) -> list[PathResult]:
    """Track every start point; results keep the order of ``starts``."""
    tasks = [(homotopy, np.asarray(s, dtype=complex), settings) for s in starts]
    workers = min(settings.workers, cpu_count(), max(len(tasks), 1))
    if workers > 1:
        with Pool(processes=workers) as pool:
            return list(pool.imap(_track_worker, tasks))
    return [_track_worker(task) for task in tasks]


def cluster_endpoints(
    results: Sequence[PathResult], tol: float = CLUSTER_TOLERANCE
) -> list[PathResult]:
    """Label successful endpoints that coincide; singletons keep ``cluster=None``."""
    labels: list[int | None] = [None] * len(results)
    representatives: list[tuple[int, np.ndarray]] = []
    members: dict[int, list[int]] = {}
    for idx, result in enumerate(results):
        if not result.success:
            continue
        for rep_idx, rep in representatives:
            if np.max(np.abs(result.endpoint - rep)) <= tol:
                members[rep_idx].append(idx)
                break
        else:
            representatives.append((idx, result.endpoint))
            members[idx] = [idx]
    for rep_idx, group in members.items():
        if len(group) > 1:
            for idx in group:
                labels[idx] = rep_idx
    return [replace(r, cluster=label) for r, label in zip(results, labels)]


def distinct_endpoints(
    results: Sequence[PathResult], tol: float = CLUSTER_TOLERANCE
) -> list[np.ndarray]:
    points: list[np.ndarray] = []
    for result in results:
        if not result.success:
            continue
        if all(np.max(np.abs(result.endpoint - p)) > tol for p in points):
            points.append(result.endpoint)
    return points


def total_degree_start(system: PolySystem) -> tuple[PolySystem, list[np.ndarray]]:
    """Start system ``x_i**d_i - 1`` and its roots-of-unity solutions."""
    if not system.is_square():
        raise ValueError(f"total-degree start needs a square system, got {len(system)}x{system.n}")
    degrees = system.degrees
    if any(d < 1 for d in degrees):
        raise ValueError(f"every equation needs degree >= 1, got {degrees}")
    names = system.variables
    polys = []
    for j, d in enumerate(degrees):
        alpha = tuple(d if k == j else 0 for k in range(len(names)))
        polys.append(Polynomial(names, {alpha: 1.0, (0,) * len(names): -1.0}))
    roots = [np.exp(2j * np.pi * np.arange(d) / d) for d in degrees]
    starts = [np.array(combo, dtype=complex) for combo in itertools.product(*roots)]
    return PolySystem(names, tuple(polys)), starts


def solve_total_degree(
    system: PolySystem, settings: TrackSettings, rng: np.random.Generator
) -> list[PathResult]:
    """Track all Bezout-many paths to ``system``; coinciding endpoints are clustered."""
    start_system, starts = total_degree_start(system)
    homotopy = StraightLineHomotopy(
        CompiledSystem.from_system(start_system),
        CompiledSystem.from_system(system),
        random_gamma(rng),
    )
    return cluster_endpoints(track_many(homotopy, starts, settings))
