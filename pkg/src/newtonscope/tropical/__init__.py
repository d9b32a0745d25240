"""Tropical membership through coordinate projections and the polytope oracle."""

from .membership import (
    MembershipReport,
    MembershipSession,
    NoHypersurfaceProjectionError,
    ProjectionResult,
    tropical_membership,
)
from .monomial import inverse_map, random_unimodular_map, transform_direction

__all__ = [
    "MembershipReport",
    "MembershipSession",
    "NoHypersurfaceProjectionError",
    "ProjectionResult",
    "inverse_map",
    "random_unimodular_map",
    "transform_direction",
    "tropical_membership",
]
