"""Exact lattice polytopes: symbolic oracle, convergence diagnostics, reconstruction."""

from .diagnostics import (
    EmptyComplementError,
    NotAFacialRootError,
    d_omega,
    face_complement,
    facial_restriction,
    convergence_bound,
)
from .hull import Facet, IncrementalHull
from .lattice import LatticePolytope
from .reconstruct import (
    BudgetExceededError,
    InconsistentOracleError,
    QueryLog,
    QueryRecord,
    bounding_box,
    functional_to_direction,
    reconstruct_polytope,
)
from .symbolic import (
    SymbolicOracleAnswer,
    SymbolicTag,
    homogenized_polytope,
    newton_polytope,
    symbolic_oracle,
    tropical_of_hypersurface,
)

__all__ = [
    "BudgetExceededError",
    "EmptyComplementError",
    "Facet",
    "IncrementalHull",
    "InconsistentOracleError",
    "LatticePolytope",
    "NotAFacialRootError",
    "QueryLog",
    "QueryRecord",
    "SymbolicOracleAnswer",
    "SymbolicTag",
    "bounding_box",
    "d_omega",
    "face_complement",
    "facial_restriction",
    "functional_to_direction",
    "homogenized_polytope",
    "newton_polytope",
    "reconstruct_polytope",
    "symbolic_oracle",
    "convergence_bound",
    "tropical_of_hypersurface",
]
