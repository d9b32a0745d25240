import json
from fractions import Fraction

import polars as pl
import pytest

from newtonscope.numerics import make_rng
from newtonscope.oracle import (
    AnswerTag,
    OracleConfigurationError,
    OracleSettings,
    Verdict,
    answer_from_traces_json,
    build_oracle,
    default_targets,
    export_traces,
    query_oracle,
    traces_to_frame,
)
from newtonscope.poly import parse_polynomial
from newtonscope.polytope import symbolic_oracle
from newtonscope.tracker import TrackSettings
from newtonscope.witness import witness_for_hypersurface

XY = ("x", "y")


def _context(text, seed=0, **kwargs):
    f = parse_polynomial(text, XY)
    rng = make_rng(seed)
    witness = witness_for_hypersurface(f, rng, TrackSettings())
    return f, build_oracle(witness, rng=rng, **kwargs)


def test_settings_validation(tmp_path):
    with pytest.raises(OracleConfigurationError):
        OracleSettings(min_tracks=10, max_tracks=5)
    with pytest.raises(OracleConfigurationError):
        OracleSettings(step_resolution=1.0)
    with pytest.raises(OracleConfigurationError):
        OracleSettings(step_resolution=10.0, max_tracks=400)
    with pytest.raises(OracleConfigurationError):
        OracleSettings(epsilon=0.5).check_separation(0.8)
    with pytest.raises(OracleConfigurationError):
        OracleSettings.from_mapping({"certainty": 3, "typo": 1})
    path = tmp_path / "oracle.json"
    path.write_text(json.dumps({"epsilon": 0.1, "track": {"max_step": 0.5}}))
    cfg = OracleSettings.from_file(path)
    assert cfg.epsilon == 0.1
    assert cfg.track.max_step == 0.5
    assert cfg.track.divergence_threshold == 1e12
    assert cfg.to_dict()["track"]["max_step"] == 0.5


def test_context_starts_lie_on_the_line():
    _, ctx = _context("x^2 + y + 1")
    assert ctx.degree == 2
    assert ctx.starts.shape == (2, 1)
    for s in ctx.start_points:
        point = ctx.family.point(1.0, s)
        assert abs(point[0] ** 2 + point[1] + 1) < 1e-8


def test_vertex_exposed_by_positive_direction():
    f, ctx = _context("x^2 + y + 1")
    answer = query_oracle(ctx, (1, 0), seed=0)
    assert answer.tag is AnswerTag.COUNTS
    assert answer.beta == (2, 0)
    assert answer.beta_inf == 0
    assert answer.other == 0
    assert answer.vertex_point == (2, 0, 0)
    assert answer.vertex_point == symbolic_oracle(f, (1, 0)).vertex_point


def test_edge_exposed_by_negative_direction():
    f, ctx = _context("x^2 + y + 1", seed=1)
    answer = query_oracle(ctx, (-1, 0))
    assert answer.tag is AnswerTag.COUNTS
    assert answer.beta == (0, 0)
    assert answer.beta_inf == 1
    assert answer.other == 1
    assert not answer.vertex
    assert answer.counts == symbolic_oracle(f, (-1, 0)).counts
    verdicts = sorted(trace.verdict.value for trace in answer.traces)
    assert verdicts == ["diverged", "to_other"]


def test_homogeneous_direction_exposes_everything():
    _, ctx = _context("x^2 + y^2")
    answer = query_oracle(ctx, (1, 1))
    assert answer.is_eep
    assert all(trace.verdict is Verdict.FROZEN for trace in answer.traces)
    assert answer.to_json()["tag"] == "eep"


def test_rational_direction_matches_integer_multiple():
    _, ctx = _context("x^2*y + x*y^2 + 3*x + 1", seed=2)
    half = query_oracle(ctx, (Fraction(3, 2), 1))
    whole = query_oracle(ctx, (3, 2))
    assert half.tag is whole.tag is AnswerTag.COUNTS
    assert half.counts == whole.counts


def test_explicit_targets_and_line_coefficients():
    _, ctx = _context("x^2 + y + 1", targets=(2.0, -2.0))
    assert ctx.family.targets == pytest.approx((2.0, -2.0))
    answer = query_oracle(ctx, (1, 0))
    assert answer.beta == (2, 0)
    _, ctx = _context("x^2 + y + 1", a=(1.0, 1j), b=(1.0, 1.0))
    assert ctx.family.targets == pytest.approx((1.0, -1j))


def test_default_targets_are_separated():
    for n in (1, 2, 3, 7):
        gammas = default_targets(n)
        assert len(gammas) == n
        gaps = [abs(p - q) for i, p in enumerate(gammas) for q in gammas[i + 1 :]]
        assert all(g >= 0.5 for g in gaps)


def test_max_tracks_exhaustion_is_inconclusive():
    _, ctx = _context("x^2 + y + 1")
    settings = OracleSettings(min_tracks=1, max_tracks=2)
    answer = query_oracle(ctx, (-1, 0), settings)
    assert answer.tag is AnswerTag.INCONCLUSIVE
    assert "max_tracks" in answer.reason


def test_answer_json_includes_counts_and_seed():
    _, ctx = _context("x^2 + y + 1")
    payload = query_oracle(ctx, (1, 0), seed=11).to_json(include_traces=True)
    assert payload["beta"] == [2, 0]
    assert payload["betaInf"] == 0
    assert payload["vertex"] is True
    assert payload["seed"] == 11
    assert len(payload["traces"]) == 2


def test_trace_exports(tmp_path):
    _, ctx = _context("x^2 + y + 1", seed=3)
    answer = query_oracle(ctx, (-1, 0))

    document = export_traces(answer, "json", tmp_path / "traces.json")
    assert len(document["paths"]) == 2
    restored = answer_from_traces_json(json.loads((tmp_path / "traces.json").read_text()))
    assert [len(tr.samples) for tr in restored.traces] == [len(tr.samples) for tr in answer.traces]

    index = export_traces(answer, "svg-frames", tmp_path / "frames")
    assert index["pathCount"] == 2
    for frame in index["frames"]:
        assert (tmp_path / "frames" / frame["file"]).read_text().lstrip().startswith("<?xml")

    export_traces(answer, "parquet", tmp_path / "traces.parquet")
    table = pl.read_parquet(tmp_path / "traces.parquet")
    assert table.height == traces_to_frame(answer.traces).height
    assert set(table["verdict"].unique()) == {"diverged", "to_other"}
    t_values = table.filter(pl.col("path") == 0)["t"].to_list()
    assert t_values == sorted(t_values)

    with pytest.raises(ValueError):
        export_traces(answer, "parquet")


@pytest.mark.parametrize("seed", range(3))
def test_root_on_a_coordinate_factor_is_tracked(seed):
    f, ctx = _context("4*x^3*y + 5*x*y^3 + 7*y^3 + x*y + 6*y", seed=seed)
    answer = query_oracle(ctx, (0, -1))
    assert not any(trace.failed for trace in answer.traces)
    assert answer.tag is AnswerTag.COUNTS
    beta, beta_inf, other = symbolic_oracle(f, (0, -1)).as_counts()
    assert (answer.beta, answer.beta_inf, answer.other) == (tuple(beta), beta_inf, other)
    assert answer.beta == (0, 1)
