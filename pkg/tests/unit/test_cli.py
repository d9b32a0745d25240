import argparse
import json
from fractions import Fraction
from pathlib import Path

import pyarrow.parquet as pq
import pytest

from newtonscope.cli import main as cli_main
from newtonscope.cli import stage_oracle, stage_polytope, stage_traces, stage_tropical, stage_witness
from newtonscope.cli.config import SEED_ENV, RunConfig, parse_omega, resolve_seed
from newtonscope.cli.systemfile import SystemFile, SystemFileError

REPO = Path(__file__).resolve().parents[2]
SYSTEMS = REPO / "configs" / "systems"


def test_system_file_parses_sextic():
    sysfile = SystemFile.from_file(SYSTEMS / "sextic.sys")
    assert sysfile.variables == ("x", "y", "t")
    assert len(sysfile.equations) == 2
    assert sysfile.project == ("t",)
    assert sysfile.dropped == [2]
    assert sysfile.seed is None


def test_system_file_comments_and_seed():
    text = "# header\nvars: a, b\neq: a*b - 1  # hyperbola\nseed: 7\n"
    sysfile = SystemFile.parse(text)
    assert sysfile.variables == ("a", "b")
    assert sysfile.equations == ("a*b - 1",)
    assert sysfile.seed == 7
    assert sysfile.project == ()


@pytest.mark.parametrize(
    "text, line",
    [
        ("vars: x\nfoo: 1\n", 2),
        ("vars: x\neq: x +* 1\n", 2),
        ("vars: x y\neq: x\nproject: z\n", 3),
        ("vars: x\neq: x\nseed: -1\n", 3),
        ("vars: x\nvars: y\n", 2),
    ],
)
def test_system_file_errors_carry_line_numbers(text, line):
    with pytest.raises(SystemFileError) as excinfo:
        SystemFile.parse(text, source="bad.sys")
    assert excinfo.value.line == line
    assert str(excinfo.value).startswith(f"bad.sys:{line}: ")


def test_system_file_needs_vars_and_equations():
    with pytest.raises(SystemFileError, match="vars"):
        SystemFile.parse("eq: x\n")
    with pytest.raises(SystemFileError, match="eq"):
        SystemFile.parse("vars: x\n")


def test_resolve_seed_order(monkeypatch):
    monkeypatch.delenv(SEED_ENV, raising=False)
    assert resolve_seed(None) == 0
    monkeypatch.setenv(SEED_ENV, "11")
    assert resolve_seed(None) == 11
    assert resolve_seed(None, None, 5) == 5
    assert resolve_seed(None, 3, 5) == 3
    assert resolve_seed(1, 3, 5) == 1
    monkeypatch.setenv(SEED_ENV, "eleven")
    with pytest.raises(ValueError, match=SEED_ENV):
        resolve_seed(None)


def test_parse_omega():
    assert parse_omega("3,2") == (3, 2)
    assert parse_omega(" 3/2, -1 ") == (Fraction(3, 2), -1)
    for bad in ("", "1,,2", "1,x", "1/0"):
        with pytest.raises(argparse.ArgumentTypeError):
            parse_omega(bad)


def test_run_config_overrides(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"seed": 4, "oracle": {"certainty": 7}}))
    args = argparse.Namespace(config=str(path), workers=2, certainty=None, epsilon=0.05)
    cfg = RunConfig.from_args(args)
    assert cfg.seed == 4
    assert cfg.oracle.certainty == 7
    assert cfg.oracle.epsilon == 0.05
    assert cfg.tracker.workers == 2
    assert cfg.oracle.track.workers == 2
    with pytest.raises(ValueError, match="unknown"):
        RunConfig.from_mapping({"sedd": 1})


def test_shipped_run_config_loads():
    cfg = RunConfig.from_file(REPO / "configs" / "run" / "default.json")
    assert cfg.to_dict()["oracle"] == cfg.oracle.to_dict()


def test_witness_stage_writes_artifact_and_sidecar(tmp_path):
    out = tmp_path / "circle.witness.json"
    code = stage_witness.main([str(SYSTEMS / "circle.sys"), "--seed", "3", "--out", str(out)])
    assert code == 0
    document = json.loads(out.read_text())
    assert document["degree"] == 2
    assert document["seed"] == 3
    assert "timestamp" not in document
    sidecar = json.loads((tmp_path / "circle.witness.json.run.json").read_text())
    assert sidecar["seed"] == 3
    assert sidecar["artifact"] == "circle.witness.json"


def test_repeated_runs_are_byte_identical(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    for out in (first, second):
        assert stage_witness.main([str(SYSTEMS / "circle.sys"), "--seed", "9", "--out", str(out)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_oracle_stage_from_saved_witness(tmp_path):
    witness = tmp_path / "line.witness.json"
    assert stage_witness.main([str(SYSTEMS / "line_plane.sys"), "--out", str(witness)]) == 0
    out = tmp_path / "answer.json"
    code = stage_oracle.main([str(witness), "--omega", "1,2", "--include-traces", "--out", str(out)])
    assert code == 0
    document = json.loads(out.read_text())
    assert document["tag"] == "counts"
    assert document["degree"] == 1
    assert document["kept"] == [0, 1]
    assert document["vertex"] is True
    assert document["beta"] == [0, 1]
    assert document["betaInf"] == 0
    assert len(document["traces"]) == 1


def test_oracle_stage_exports_and_rerenders_traces(tmp_path):
    traces = tmp_path / "traces"
    code = stage_oracle.main(
        [str(SYSTEMS / "circle.sys"), "--omega", "1,1", "--emit-traces", "json", "--trace-dir", str(traces)]
    )
    assert code == 0
    assert (traces / "traces.json").exists()
    frames = tmp_path / "frames"
    assert stage_traces.main([str(traces / "traces.json"), "--trace-dir", str(frames)]) == 0
    index = json.loads((frames / "index.json").read_text())
    assert index["pathCount"] == 2
    assert all((frames / f["file"]).exists() for f in index["frames"])


def test_traces_stage_reads_an_answer_with_embedded_traces(tmp_path):
    answer = tmp_path / "answer.json"
    code = stage_oracle.main(
        [str(SYSTEMS / "circle.sys"), "--omega", "1,1", "--include-traces", "--out", str(answer)]
    )
    assert code == 0
    document = json.loads(answer.read_text())
    assert len(document["targets"]) == 2
    assert document["epsilon"] > 0
    table_dir = tmp_path / "table"
    assert stage_traces.main(
        [str(answer), "--emit-traces", "parquet", "--trace-dir", str(table_dir)]
    ) == 0
    table = pq.read_table(table_dir / "traces.parquet")
    assert sorted(set(table.column("path").to_pylist())) == [0, 1]
    frames = tmp_path / "frames"
    assert stage_traces.main([str(answer), "--trace-dir", str(frames)]) == 0
    assert json.loads((frames / "index.json").read_text())["pathCount"] == 2


def test_oracle_stage_needs_trace_dir_for_frames(tmp_path, capsys):
    code = stage_oracle.main([str(SYSTEMS / "line_plane.sys"), "--omega", "1,1", "--emit-traces", "svg"])
    assert code == 1
    assert "error: --emit-traces svg-frames needs --trace-dir" in capsys.readouterr().err


def test_oracle_stage_reports_inconclusive(capsys):
    code = stage_oracle.main(
        [str(SYSTEMS / "circle.sys"), "--omega=-1,0", "--min-tracks", "1", "--max-tracks", "2"]
    )
    assert code == 2
    assert json.loads(capsys.readouterr().out)["tag"] == "inconclusive"


def test_symbolic_polytope_of_sextic(capsys):
    code = stage_polytope.main([str(SYSTEMS / "sextic.sys"), "--symbolic", "--lattice-points"])
    assert code == 0
    document = json.loads(capsys.readouterr().out)
    assert document["mode"] == "symbolic"
    assert document["degree"] == 6
    assert document["affineDimension"] == 2
    assert [2, 4, 0] in document["points"]
    assert document["latticePointCount"] >= document["vertexCount"]


def test_numeric_polytope_of_a_line(tmp_path):
    out = tmp_path / "line.polytope.json"
    query_log = tmp_path / "queries.parquet"
    code = stage_polytope.main(
        [str(SYSTEMS / "line_plane.sys"), "--out", str(out), "--query-log", str(query_log)]
    )
    assert code == 0
    document = json.loads(out.read_text())
    assert document["mode"] == "numeric"
    assert sorted(document["points"]) == [[0, 0, 1], [0, 1, 0], [1, 0, 0]]
    assert document["queries"] > 0
    table = pq.read_table(query_log)
    assert table.num_rows == document["queries"]
    assert table.schema.names == ["query", "functional", "omega", "tag", "vertex"]


def test_symbolic_polytope_rejects_unsupported_systems(capsys):
    code = stage_polytope.main([str(SYSTEMS / "twisted_cubic.sys"), "--symbolic"])
    assert code == 1
    assert "--symbolic needs" in capsys.readouterr().err


def test_tropical_stage_several_directions(capsys):
    code = stage_tropical.main([str(SYSTEMS / "line_plane.sys"), "--omega", "1,1", "--omega", "1,2"])
    assert code == 0
    document = json.loads(capsys.readouterr().out)
    assert document["verdicts"] == [True, False]
    assert document["dimension"] == 1
    assert len(document["reports"]) == 2


def test_tropical_stage_with_map_file(tmp_path, capsys):
    map_file = tmp_path / "map.json"
    map_file.write_text(json.dumps({"matrix": [[1, 1], [0, 1]]}))
    code = stage_tropical.main(
        [str(SYSTEMS / "line_plane.sys"), "--omega", "1,1", "--monomial-map", str(map_file)]
    )
    assert code == 0
    document = json.loads(capsys.readouterr().out)
    assert document["verdict"] is True
    assert document["transformedOmega"] == ["0", "1"]


def test_dispatcher(capsys):
    assert cli_main.main(["frobnicate"]) == 1
    assert "unknown stage" in capsys.readouterr().err
    assert cli_main.main([]) == 1
    assert cli_main.main(["polytope", str(SYSTEMS / "line_plane.sys"), "--symbolic", "--box"]) == 0
    assert json.loads(capsys.readouterr().out)["box"] == [[0, 1], [0, 1], [0, 1]]
