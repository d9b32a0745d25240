"""Numerical Newton polytope oracle: roots tracked along a family of lines as t grows."""

from .config import OracleConfigurationError, OracleSettings, ray_track_settings
from .rays import RayHomotopy, RaySystem, build_oracle, default_targets, query_oracle, run_path
from .traces import (
    TRACE_FORMATS,
    answer_from_traces_json,
    export_traces,
    traces_to_frame,
    traces_to_json,
    write_svg_frames,
    write_traces_parquet,
)
from .types import AnswerTag, OracleAnswer, OracleContext, PathTrace, Verdict

__all__ = [
    "AnswerTag",
    "OracleAnswer",
    "OracleConfigurationError",
    "OracleContext",
    "OracleSettings",
    "PathTrace",
    "RayHomotopy",
    "RaySystem",
    "TRACE_FORMATS",
    "Verdict",
    "answer_from_traces_json",
    "build_oracle",
    "default_targets",
    "export_traces",
    "query_oracle",
    "ray_track_settings",
    "run_path",
    "traces_to_frame",
    "traces_to_json",
    "write_svg_frames",
    "write_traces_parquet",
]
