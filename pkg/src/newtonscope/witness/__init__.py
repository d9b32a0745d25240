"""Witness sets for hypersurfaces and images of coordinate projections."""

from .build import (
    DimensionEstimate,
    estimate_dimension,
    line_slice,
    move_slice,
    square_up,
    witness_for_hypersurface,
    witness_for_projection,
)
from .types import (
    ProjectionDimensionError,
    TrackingFailureError,
    WitnessSet,
    WitnessUndercountError,
)

__all__ = [
    "DimensionEstimate",
    "ProjectionDimensionError",
    "TrackingFailureError",
    "WitnessSet",
    "WitnessUndercountError",
    "estimate_dimension",
    "line_slice",
    "move_slice",
    "square_up",
    "witness_for_hypersurface",
    "witness_for_projection",
]
