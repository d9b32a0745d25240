from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from ..numerics import LinearSlice
from ..poly.parser import parse_polynomial, to_string
from ..poly.types import PolySystem


class WitnessUndercountError(RuntimeError):
    def __init__(self, found: int, expected: int):
        super().__init__(f"found {found} distinct witness points, expected {expected}")
        self.found = found
        self.expected = expected


class ProjectionDimensionError(ValueError):
    def __init__(self, image_dimension: int, kept: int):
        super().__init__(
            f"projection image has dimension {image_dimension}; a hypersurface in "
            f"{kept} coordinates needs dimension {kept - 1}"
        )
        self.image_dimension = image_dimension
        self.kept = kept


class TrackingFailureError(RuntimeError):
    def __init__(self, lost: int, total: int):
        super().__init__(f"{lost} of {total} paths were lost")
        self.lost = lost
        self.total = total


def _complex_pairs(values: np.ndarray) -> list[list[float]]:
    return [[float(v.real), float(v.imag)] for v in values]


@dataclass(frozen=True, eq=False)
class WitnessSet:
    """Points of ``X`` whose projections cut a hypersurface ``Y`` by a generic line.

    ``system`` defines ``X`` in the ambient space, followed by ``hyperplanes``
    appended linear equations that make the projection finite. ``slice`` lives
    in the image space spanned by the ``projection`` coordinates.
    """

    system: PolySystem
    projection: tuple[int, ...]
    slice: LinearSlice
    points: np.ndarray
    hyperplanes: int = 0
    seed: int | None = None

    def __post_init__(self) -> None:
        projection = tuple(int(j) for j in self.projection)
        if len(set(projection)) != len(projection):
            raise ValueError(f"projection indices repeat: {projection}")
        if any(not 0 <= j < self.system.n for j in projection):
            raise ValueError(f"projection {projection} out of range for {self.system.n} variables")
        if self.slice.n != len(projection):
            raise ValueError(f"slice lives in {self.slice.n} coordinates, projection keeps {len(projection)}")
        if self.slice.k != len(projection) - 1:
            raise ValueError(f"slice must be a line: {self.slice.k} equations in {self.slice.n} unknowns")
        if not 0 <= self.hyperplanes <= len(self.system):
            raise ValueError(f"hyperplane count {self.hyperplanes} exceeds system size")
        pts = np.array(self.points, dtype=complex).reshape(-1, self.system.n)
        pts.setflags(write=False)
        object.__setattr__(self, "projection", projection)
        object.__setattr__(self, "points", pts)

    @property
    def degree(self) -> int:
        return self.points.shape[0]

    @property
    def n(self) -> int:
        """Dimension of the image space."""
        return len(self.projection)

    @property
    def ambient(self) -> int:
        return self.system.n

    @property
    def image_variables(self) -> tuple[str, ...]:
        return tuple(self.system.variables[j] for j in self.projection)

    @property
    def dropped(self) -> tuple[int, ...]:
        return tuple(j for j in range(self.ambient) if j not in self.projection)

    @property
    def equations(self) -> PolySystem:
        """Equations of ``X`` without the appended hyperplanes."""
        return PolySystem(self.system.variables, self.system.polys[: len(self.system) - self.hyperplanes])

    def projected_points(self) -> np.ndarray:
        return self.points[:, list(self.projection)]

    def to_json(self) -> dict[str, Any]:
        return {
            "variables": list(self.system.variables),
            "equations": [to_string(f) for f in self.system.polys],
            "hyperplanes": self.hyperplanes,
            "projection": list(self.projection),
            "slice": self.slice.to_json(),
            "points": [_complex_pairs(p) for p in self.points],
            "degree": self.degree,
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, payload: Mapping[str, Any]) -> "WitnessSet":
        variables = tuple(payload["variables"])
        polys = tuple(parse_polynomial(text, variables) for text in payload["equations"])
        projection = tuple(int(j) for j in payload.get("projection", range(len(variables))))
        points = [[complex(re, im) for re, im in row] for row in payload["points"]]
        witness = cls(
            system=PolySystem(variables, polys),
            projection=projection,
            slice=LinearSlice.from_json(payload["slice"], n=len(projection)),
            points=np.array(points, dtype=complex).reshape(-1, len(variables)),
            hyperplanes=int(payload.get("hyperplanes", 0)),
            seed=payload.get("seed"),
        )
        declared = payload.get("degree")
        if declared is not None and int(declared) != witness.degree:
            raise ValueError(f"witness declares degree {declared} but lists {witness.degree} points")
        return witness

    def dump(self, path: Path) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return path

    @classmethod
    def load(cls, path: Path) -> "WitnessSet":
        with path.open("r", encoding="utf-8") as handle:
            return cls.from_json(json.load(handle))
