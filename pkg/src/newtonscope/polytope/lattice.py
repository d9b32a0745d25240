from __future__ import annotations

import itertools
import json
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from .exact import IntVector, affine_rank, dot
from .hull import IncrementalHull


class LatticePolytope:
    """Convex hull of a finite, nonempty set of integer points.

    ``points`` is a generating set; vertices are computed on demand.
    """

    def __init__(self, points: Iterable[Sequence[int]]):
        pts = frozenset(tuple(int(x) for x in p) for p in points)
        if not pts:
            raise ValueError("a lattice polytope needs at least one point")
        widths = {len(p) for p in pts}
        if len(widths) != 1:
            raise ValueError(f"points have mixed dimensions {sorted(widths)}")
        self.points: frozenset[IntVector] = pts

    @property
    def ambient_dimension(self) -> int:
        return len(next(iter(self.points)))

    def __len__(self) -> int:
        return len(self.points)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LatticePolytope):
            return NotImplemented
        return self.vertices() == other.vertices()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"LatticePolytope({sorted(self.points)})"

    def _check(self, omega: Sequence[Fraction | int]) -> tuple[Fraction, ...]:
        if len(omega) != self.ambient_dimension:
            raise ValueError(
                f"direction has {len(omega)} entries, polytope lives in dimension {self.ambient_dimension}"
            )
        return tuple(Fraction(w) for w in omega)

    def support_function(self, omega: Sequence[Fraction | int]) -> Fraction:
        """``max <x, omega>`` over the polytope."""
        w = self._check(omega)
        return max(dot(p, w) for p in self.points)

    def exposed_face(self, omega: Sequence[Fraction | int]) -> "LatticePolytope":
        """Generating points attaining the support function."""
        w = self._check(omega)
        values = {p: dot(p, w) for p in self.points}
        top = max(values.values())
        return LatticePolytope(p for p, v in values.items() if v == top)

    def affine_dimension(self) -> int:
        return affine_rank(sorted(self.points))

    @cached_property
    def hull(self) -> IncrementalHull:
        return IncrementalHull(sorted(self.points))

    def vertices(self) -> frozenset[IntVector]:
        return self.hull.vertices()

    def contains(self, point: Sequence[int]) -> bool:
        return self.hull.contains(point)

    def coordinate_minimum(self) -> IntVector:
        return tuple(min(col) for col in zip(*self.points))

    def lattice_points(self) -> frozenset[IntVector]:
        """All integer points of the hull, enumerated in span coordinates."""
        hull = self.hull
        if hull.dimension == 0:
            return frozenset(self.points)
        coords = [hull.project(p) for p in self.points]
        ranges = [range(min(col), max(col) + 1) for col in zip(*coords)]
        facets = hull.facets()
        found = set()
        for y in itertools.product(*ranges):
            if any(dot(f.normal, y) > f.offset for f in facets):
                continue
            x = hull.lift(y)
            if all(v.denominator == 1 for v in x):
                found.add(tuple(int(v) for v in x))
        return frozenset(found)

    def to_json(self) -> dict[str, Any]:
        return {"points": [list(p) for p in sorted(self.points)]}

    @classmethod
    def from_json(cls, payload: Mapping[str, Any]) -> "LatticePolytope":
        return cls(payload["points"])

    def dump(self, path: Path) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_json(), indent=2) + "\n", encoding="utf-8")
        return path
