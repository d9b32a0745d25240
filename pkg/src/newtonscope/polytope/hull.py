from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import (
    IntVector,
    affine_rank,
    differences,
    dot,
    inverse,
    nullspace,
    pivot_columns,
    rank,
)


@dataclass(frozen=True)
class Facet:
    """``normal . y <= offset`` in span coordinates, tight at ``points`` (hull indices)."""

    normal: IntVector
    offset: int
    points: frozenset[int]


def _independent_rows(rows: Sequence[IntVector]) -> list[int]:
    if not rows:
        return []
    return list(pivot_columns([list(col) for col in zip(*rows)]))


class IncrementalHull:
    """Exact convex hull of integer points, grown one point at a time (beneath-beyond).

    Work happens in span coordinates: the coordinates ``pivots`` on which the
    affine span projects bijectively. Points added later must lie in the span
    of the initial set.
    """

    def __init__(self, points: Iterable[Sequence[int]]):
        unique = list(dict.fromkeys(tuple(int(x) for x in p) for p in points))
        if not unique:
            raise ValueError("hull needs at least one point")
        widths = {len(p) for p in unique}
        if len(widths) != 1:
            raise ValueError(f"points have mixed dimensions {sorted(widths)}")
        self.ambient = widths.pop()
        self.origin = unique[0]
        diffs = differences(unique)
        basis_rows = _independent_rows(diffs)
        self.dimension = len(basis_rows)
        self.pivots: tuple[int, ...] = tuple(pivot_columns(diffs)) if diffs else ()
        self._basis = [diffs[i] for i in basis_rows]
        square = [[row[j] for j in self.pivots] for row in self._basis]
        # lambda = inv(square^T) (y - origin[pivots]); x = origin + basis^T lambda
        self._lift = inverse([list(col) for col in zip(*square)]) if square else []
        self.points: list[IntVector] = []
        self._coords: list[IntVector] = []
        self._index: dict[IntVector, int] = {}
        self._facets: dict[tuple[IntVector, int], frozenset[int]] = {}
        self._interior: tuple[Fraction, ...] = ()

        seeds = [0] + [i + 1 for i in basis_rows]
        for i in seeds:
            self._register(unique[i])
        if self.dimension >= 2:
            simplex = [self._coords[k] for k in range(len(seeds))]
            self._interior = tuple(
                sum((Fraction(y[j]) for y in simplex), Fraction(0)) / len(simplex)
                for j in range(self.dimension)
            )
            for subset in itertools.combinations(range(len(seeds)), self.dimension):
                self._insert_facet(subset)
        else:
            self._rebuild_low_dimension()
        for p in unique:
            self.add(p)

    @property
    def size(self) -> int:
        return len(self.points)

    def project(self, point: Sequence[int]) -> IntVector:
        return tuple(int(point[j]) for j in self.pivots)

    def lift(self, coords: Sequence[int | Fraction]) -> tuple[Fraction, ...]:
        """The ambient point of the span with the given span coordinates."""
        shift = [Fraction(c) - self.origin[j] for c, j in zip(coords, self.pivots)]
        lam = [dot(row, shift) for row in self._lift]
        return tuple(
            self.origin[i] + sum((lam[k] * self._basis[k][i] for k in range(len(lam))), Fraction(0))
            for i in range(self.ambient)
        )

    def in_span(self, point: Sequence[int]) -> bool:
        if len(point) != self.ambient:
            return False
        return self.lift(self.project(point)) == tuple(Fraction(int(x)) for x in point)

    def ambient_normal(self, normal: Sequence[int]) -> IntVector:
        """A functional on the ambient space that agrees with ``normal`` on the span."""
        full = [0] * self.ambient
        for value, j in zip(normal, self.pivots):
            full[j] = int(value)
        return tuple(full)

    def _register(self, point: IntVector) -> int:
        idx = self._index.get(point)
        if idx is None:
            idx = len(self.points)
            self._index[point] = idx
            self.points.append(point)
            self._coords.append(self.project(point))
        return idx

    def _rebuild_low_dimension(self) -> None:
        self._facets = {}
        if self.dimension != 1:
            return
        values = [y[0] for y in self._coords]
        top, bottom = max(values), min(values)
        self._facets[((1,), top)] = frozenset(i for i, v in enumerate(values) if v == top)
        self._facets[((-1,), -bottom)] = frozenset(i for i, v in enumerate(values) if v == bottom)

    def _insert_facet(self, members: Iterable[int]) -> None:
        coords = [self._coords[i] for i in members]
        normals = nullspace(differences(coords), self.dimension)
        if len(normals) != 1:
            raise ArithmeticError(f"facet candidate spans {self.dimension - len(normals)} dimensions")
        normal = normals[0]
        offset = int(dot(normal, coords[0]))
        if dot(normal, self._interior) > offset:
            normal = tuple(-c for c in normal)
            offset = -offset
        tight = frozenset(i for i, y in enumerate(self._coords) if dot(normal, y) == offset)
        self._facets[(normal, offset)] = tight

    def add(self, point: Sequence[int]) -> bool:
        """Add ``point``; True when it lies outside the previous hull."""
        key = tuple(int(x) for x in point)
        if key in self._index:
            return False
        if not self.in_span(key):
            raise ValueError(f"point {key} is outside the affine span of the hull")
        if self.dimension == 0:
            return False
        idx = self._register(key)
        y = self._coords[idx]
        if self.dimension == 1:
            before = set(self._facets)
            self._rebuild_low_dimension()
            return set(self._facets) != before
        visible = []
        for (normal, offset), tight in list(self._facets.items()):
            value = dot(normal, y)
            if value > offset:
                visible.append((normal, offset))
            elif value == offset:
                self._facets[(normal, offset)] = tight | {idx}
        if not visible:
            return False
        hidden = [k for k in self._facets if k not in visible]
        ridges = []
        for f in visible:
            for g in hidden:
                ridge = self._facets[f] & self._facets[g]
                if affine_rank([self._coords[i] for i in ridge]) == self.dimension - 2:
                    ridges.append(ridge)
        for f in visible:
            del self._facets[f]
        for ridge in ridges:
            self._insert_facet(sorted(ridge) + [idx])
        return True

    def facets(self) -> list[Facet]:
        return [
            Facet(normal, offset, tight)
            for (normal, offset), tight in sorted(self._facets.items())
        ]

    def contains(self, point: Sequence[int]) -> bool:
        if not self.in_span(point):
            return False
        y = self.project(point)
        return all(dot(normal, y) <= offset for normal, offset in self._facets)

    def vertex_indices(self) -> list[int]:
        if self.dimension == 0:
            return [0]
        if self.dimension == 1:
            return sorted({min(t) for t in self._facets.values()})
        found = []
        for i in range(self.size):
            normals = [normal for (normal, _), tight in self._facets.items() if i in tight]
            if len(normals) >= self.dimension and rank(normals) == self.dimension:
                found.append(i)
        return found

    def vertices(self) -> frozenset[IntVector]:
        return frozenset(self.points[i] for i in self.vertex_indices())
