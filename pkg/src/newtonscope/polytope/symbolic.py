from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Sequence

from ..poly.ops import homogenized_support
from ..poly.types import DimensionMismatchError, Polynomial, as_fractions
from .exact import IntVector, dot
from .lattice import LatticePolytope


class SymbolicTag(str, Enum):
    EEP = "eep"
    VERTEX = "vertex"
    FACE_MIN = "face_min"


@dataclass(frozen=True)
class SymbolicOracleAnswer:
    """Exact oracle value on the homogenized Newton polytope.

    ``point`` is the exposed vertex, or the coordinate-wise minimum of the
    exposed face, in ``Z^(n+1)`` (last entry is the homogenizing coordinate).
    """

    tag: SymbolicTag
    point: IntVector | None = None
    face_dim: int = 0
    degree: int = 0

    @property
    def is_eep(self) -> bool:
        return self.tag is SymbolicTag.EEP

    @property
    def vertex_point(self) -> IntVector | None:
        return self.point if self.tag is SymbolicTag.VERTEX else None

    @property
    def counts(self) -> IntVector | None:
        return None if self.is_eep else self.point

    def as_counts(self, degree: int | None = None) -> tuple[IntVector, int, int] | None:
        """``(beta, beta_inf, other)`` a numerical oracle should report; None for EEP."""
        if self.point is None:
            return None
        d = self.degree if degree is None else degree
        beta, beta_inf = self.point[:-1], self.point[-1]
        return beta, beta_inf, d - sum(beta) - beta_inf

    def to_json(self) -> dict[str, Any]:
        payload: dict[str, Any] = {"tag": self.tag.value, "faceDim": self.face_dim}
        if self.point is not None:
            payload["point"] = list(self.point)
        return payload


def newton_polytope(f: Polynomial) -> LatticePolytope:
    if f.is_zero():
        raise ValueError("the zero polynomial has no Newton polytope")
    return LatticePolytope(f.terms)


def homogenized_polytope(f: Polynomial) -> LatticePolytope:
    if f.is_zero():
        raise ValueError("the zero polynomial has no Newton polytope")
    return LatticePolytope(homogenized_support(f))


def symbolic_oracle(f: Polynomial, omega: Sequence[Fraction | int | str]) -> SymbolicOracleAnswer:
    """Face of the homogenized Newton polytope exposed by ``(omega, 0)``."""
    w = as_fractions(omega)
    if len(w) != f.n:
        raise DimensionMismatchError(f"direction has {len(w)} entries, expected {f.n}")
    polytope = homogenized_polytope(f)
    face = polytope.exposed_face(w + (Fraction(0),))
    if len(face) == len(polytope):
        return SymbolicOracleAnswer(SymbolicTag.EEP, degree=f.degree)
    dim = face.affine_dimension()
    if dim == 0:
        return SymbolicOracleAnswer(SymbolicTag.VERTEX, next(iter(face.points)), 0, f.degree)
    return SymbolicOracleAnswer(SymbolicTag.FACE_MIN, face.coordinate_minimum(), dim, f.degree)


def tropical_of_hypersurface(f: Polynomial, omega: Sequence[Fraction | int | str]) -> bool:
    """Whether ``max <omega, alpha>`` over the support is attained at least twice."""
    w = as_fractions(omega)
    if len(w) != f.n:
        raise DimensionMismatchError(f"direction has {len(w)} entries, expected {f.n}")
    values = [dot(alpha, w) for alpha in f.terms]
    if not values:
        return False
    top = max(values)
    return sum(v == top for v in values) >= 2
