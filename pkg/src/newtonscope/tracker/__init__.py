"""Predictor-corrector continuation of solution paths."""

from .config import TrackSettings
from .homotopy import FrozenHomotopy, Homotopy, StraightLineHomotopy
from .track import (
    NewtonResult,
    PathResult,
    PathStatus,
    cluster_endpoints,
    distinct_endpoints,
    newton_correct,
    predictor_step,
    solve_total_degree,
    total_degree_start,
    track_many,
    track_segment,
)

__all__ = [
    "FrozenHomotopy",
    "Homotopy",
    "NewtonResult",
    "PathResult",
    "PathStatus",
    "StraightLineHomotopy",
    "TrackSettings",
    "cluster_endpoints",
    "distinct_endpoints",
    "newton_correct",
    "predictor_step",
    "solve_total_degree",
    "total_degree_start",
    "track_many",
    "track_segment",
]
