from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
import numpy.polynomial.polynomial as npoly

from ..numerics import (
    LinearSlice,
    empty_slice,
    numeric_rank,
    random_complex_array,
    random_gamma,
    random_slice,
)
from ..poly.compiled import CompiledSystem
from ..poly.ops import LINE_VARIABLE, restrict_to_affine_line, univariate_coefficients
from ..poly.types import PolySystem, Polynomial
from ..tracker import (
    StraightLineHomotopy,
    TrackSettings,
    distinct_endpoints,
    solve_total_degree,
    track_many,
)
from ..tracker.track import CLUSTER_TOLERANCE
from .types import (
    ProjectionDimensionError,
    TrackingFailureError,
    WitnessSet,
    WitnessUndercountError,
)

MAX_RESLICES = 3
# Relative residual below which a tracked endpoint lies on the variety.
ON_VARIETY_TOLERANCE = 1e-6
# Relative size of g'(r) below which a root r of a line restriction g counts as repeated.
SIMPLE_ROOT_TOLERANCE = 1e-3


@dataclass(frozen=True, eq=False)
class DimensionEstimate:
    dimension: int
    point: np.ndarray


def line_slice(a: Sequence[complex], b: Sequence[complex]) -> LinearSlice:
    """Equations of the line ``x = a * s - b`` in ``C^n``.

    Row ``i`` eliminates ``s`` between coordinates ``0`` and ``i``:
    ``a_0 x_i - a_i x_0 + (a_0 b_i - a_i b_0) = 0``.
    """
    a = [complex(x) for x in a]
    b = [complex(x) for x in b]
    n = len(a)
    if len(b) != n or n == 0:
        raise ValueError(f"line needs matching nonempty a and b, got {len(a)} and {len(b)}")
    if n == 1:
        return empty_slice(1)
    rows = np.zeros((n - 1, n + 1), dtype=complex)
    for i in range(1, n):
        rows[i - 1, 0] = -a[i]
        rows[i - 1, i] = a[0]
        rows[i - 1, n] = a[0] * b[i] - a[i] * b[0]
    return LinearSlice(rows)


def square_up(polys: Sequence[Polynomial], count: int, rng: np.random.Generator) -> list[Polynomial]:
    """``count`` random combinations ``f_i + sum_{j >= count} R_ij f_j`` of ``polys``."""
    polys = list(polys)
    if count > len(polys):
        raise ValueError(f"cannot square {len(polys)} equations up to {count}")
    if count == len(polys):
        return polys
    extra = polys[count:]
    weights = random_complex_array((count, len(extra)), rng)
    squared = []
    for i in range(count):
        combined = polys[i]
        for w, g in zip(weights[i], extra):
            combined = combined + g.scaled(complex(w))
        squared.append(combined)
    return squared


def _on_variety(compiled: CompiledSystem, point: np.ndarray) -> bool:
    return bool(np.all(np.isfinite(point))) and compiled.relative_residual(point) <= ON_VARIETY_TOLERANCE


def is_simple_root(coeffs: np.ndarray, root: complex) -> bool:
    """``g'(root)`` is large against ``sum_k k |c_k| r**(k-1)`` with ``r = max(|root|, 1)``."""
    derivative = npoly.polyder(coeffs)
    if not derivative.size:
        return False
    powers = max(abs(root), 1.0) ** np.arange(len(derivative))
    scale = float(np.sum(np.abs(derivative) * powers))
    return abs(complex(npoly.polyval(root, derivative))) > SIMPLE_ROOT_TOLERANCE * scale


def witness_for_hypersurface(
    f: Polynomial, rng: np.random.Generator, settings: TrackSettings
) -> WitnessSet:
    """Witness points of ``V(f)`` on a random line, by solving ``f`` restricted to it.

    Only simple roots count, so a non-reduced ``f`` never reaches ``deg f``
    points and ends in ``WitnessUndercountError``.
    """
    if f.is_constant():
        raise ValueError("a constant polynomial does not define a hypersurface")
    n = f.n
    found = 0
    for _ in range(MAX_RESLICES + 1):
        slice_ = random_slice(n, n - 1, rng) if n > 1 else empty_slice(1)
        base, basis = slice_.parametrize()
        direction = basis[:, 0]
        restricted = restrict_to_affine_line(f, base, direction)
        if restricted.degree < f.degree:
            continue
        roots = distinct_endpoints(
            solve_total_degree(PolySystem((LINE_VARIABLE,), (restricted,)), settings, rng)
        )
        coeffs = univariate_coefficients(restricted)
        roots = [r for r in roots if is_simple_root(coeffs, complex(r[0]))]
        found = len(roots)
        if found == f.degree:
            points = np.array([base + r[0] * direction for r in roots], dtype=complex)
            return WitnessSet(PolySystem.of([f]), tuple(range(n)), slice_, points)
    raise WitnessUndercountError(found, f.degree)


def estimate_dimension(
    system: PolySystem, rng: np.random.Generator, settings: TrackSettings
) -> DimensionEstimate:
    """Dimension of ``V(system)`` as ``N - rank(J)`` at a sample point.

    Starts from ``N - min(r, N)`` hyperplanes and adds one at a time until a
    sample point is found whose local dimension equals the slice count.
    """
    n = system.n
    compiled = CompiledSystem.from_system(system)
    k = n - min(len(system), n)
    while k < n:
        polys = square_up(system.polys, n - k, rng)
        if k:
            polys += random_slice(n, k, rng).pullback(system.variables, range(n))
        results = solve_total_degree(PolySystem(system.variables, tuple(polys)), settings, rng)
        samples = [
            (r.endpoint, n - numeric_rank(compiled.jacobian(r.endpoint)))
            for r in results
            if r.success and _on_variety(compiled, r.endpoint)
        ]
        for point, dim in samples:
            if dim == k:
                return DimensionEstimate(k, point)
        # Points on a larger component say how many more hyperplanes it needs.
        k = max([k + 1] + [d for _, d in samples if d > k])
    raise ValueError("no sample point on the variety; it may be empty")


def _dedupe_by_projection(points: Sequence[np.ndarray], keep: Sequence[int]) -> list[np.ndarray]:
    kept: list[np.ndarray] = []
    cols = list(keep)
    for p in points:
        if all(np.max(np.abs(p[cols] - q[cols])) > CLUSTER_TOLERANCE for q in kept):
            kept.append(p)
    return kept


def witness_for_projection(
    system: PolySystem,
    drop: Sequence[int],
    rng: np.random.Generator,
    settings: TrackSettings,
) -> WitnessSet:
    """Witness set of the closure of the image of ``V(system)`` under forgetting ``drop``.

    The returned system carries the fiber-cutting hyperplanes after the
    original equations.
    """
    n_ambient = system.n
    dropped = sorted({int(j) for j in drop})
    if any(not 0 <= j < n_ambient for j in dropped):
        raise ValueError(f"dropped coordinates {dropped} out of range for {n_ambient} variables")
    keep = tuple(j for j in range(n_ambient) if j not in dropped)
    if not keep:
        raise ValueError("projection must keep at least one coordinate")
    if not dropped and len(system) == 1:
        return witness_for_hypersurface(system[0], rng, settings)

    estimate = estimate_dimension(system, rng, settings)
    compiled = CompiledSystem.from_system(system)
    coordinate_rows = np.eye(n_ambient, dtype=complex)[list(keep)]
    stacked = np.vstack([compiled.jacobian(estimate.point), coordinate_rows])
    image_dimension = estimate.dimension - (n_ambient - numeric_rank(stacked))
    if image_dimension != len(keep) - 1:
        raise ProjectionDimensionError(image_dimension, len(keep))
    fiber = estimate.dimension - image_dimension
    codim = n_ambient - estimate.dimension

    lost = total = 0
    for _ in range(MAX_RESLICES + 1):
        image_slice = random_slice(len(keep), len(keep) - 1, rng) if len(keep) > 1 else empty_slice(1)
        hyperplanes = (
            random_slice(n_ambient, fiber, rng).pullback(system.variables, range(n_ambient))
            if fiber
            else []
        )
        square = PolySystem(
            system.variables,
            tuple(
                square_up(system.polys, codim, rng)
                + hyperplanes
                + image_slice.pullback(system.variables, keep)
            ),
        )
        results = solve_total_degree(square, settings, rng)
        total = len(results)
        lost = sum(r.lost(settings.end_zone) for r in results)
        if lost:
            continue
        points = _dedupe_by_projection(
            [r.endpoint for r in results if r.success and _on_variety(compiled, r.endpoint)], keep
        )
        return WitnessSet(
            system.extend(hyperplanes),
            keep,
            image_slice,
            np.array(points, dtype=complex).reshape(-1, n_ambient),
            hyperplanes=len(hyperplanes),
        )
    raise TrackingFailureError(lost, total)


def slice_system(witness: WitnessSet, slice_: LinearSlice, base: Sequence[Polynomial]) -> PolySystem:
    """``base``, then the witness hyperplanes, then ``slice_`` pulled back to the ambient space."""
    system = witness.system
    hyperplanes = list(system.polys[len(system) - witness.hyperplanes :]) if witness.hyperplanes else []
    polys = list(base) + hyperplanes + slice_.pullback(system.variables, witness.projection)
    return PolySystem(system.variables, tuple(polys))


def move_slice(
    witness: WitnessSet,
    new_slice: LinearSlice,
    settings: TrackSettings,
    rng: np.random.Generator | None = None,
) -> WitnessSet:
    """Carry the witness points from ``witness.slice`` to ``new_slice`` along a segment homotopy."""
    if new_slice.n != witness.n or new_slice.k != witness.n - 1:
        raise ValueError(
            f"new slice has {new_slice.k} equations in {new_slice.n} unknowns, "
            f"expected {witness.n - 1} in {witness.n}"
        )
    rng = rng if rng is not None else np.random.default_rng(0)
    codim = witness.ambient - witness.hyperplanes - (witness.n - 1)
    base = square_up(witness.equations.polys, codim, rng)
    homotopy = StraightLineHomotopy(
        CompiledSystem.from_system(slice_system(witness, witness.slice, base)),
        CompiledSystem.from_system(slice_system(witness, new_slice, base)),
        random_gamma(rng),
    )
    results = track_many(homotopy, list(witness.points), settings)
    failed = sum(not r.success for r in results)
    if failed:
        raise TrackingFailureError(failed, len(results))
    points = np.array([r.endpoint for r in results], dtype=complex).reshape(-1, witness.ambient)
    return replace(witness, slice=new_slice, points=points)
