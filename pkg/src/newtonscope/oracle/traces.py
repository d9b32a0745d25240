from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import polars as pl  # noqa: E402

from ..poly.types import as_fractions  # noqa: E402
from .types import AnswerTag, OracleAnswer, PathTrace, Verdict  # noqa: E402

VIEWPORT = 4.0
FRAME_COUNT = 12
TRACE_FORMATS = ("json", "svg-frames", "parquet")


def traces_to_json(answer: OracleAnswer) -> dict[str, Any]:
    return {
        "omega": [str(w) for w in answer.omega],
        "targets": [[g.real, g.imag] for g in answer.targets],
        "epsilon": answer.epsilon,
        "tag": answer.tag.value,
        "paths": [trace.to_json() for trace in answer.traces],
    }


def _inside(s: complex) -> bool:
    return abs(s.real) <= VIEWPORT and abs(s.imag) <= VIEWPORT


def _draw_frame(answer: OracleAnswer, upto: int, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(5, 5))
    try:
        for g in answer.targets:
            ax.add_patch(plt.Circle((g.real, g.imag), answer.epsilon, fill=False, color="tab:red"))
            ax.plot([g.real], [g.imag], marker="+", color="tab:red")
        for trace in answer.traces:
            pts = np.array([s for _, s, _ in trace.samples[: upto + 1]], dtype=complex)
            if not pts.size:
                continue
            ax.plot(pts.real, pts.imag, linewidth=0.8)
            if trace.verdict is Verdict.DIVERGED and not _inside(complex(pts[-1])):
                last = next((complex(s) for s in pts[::-1] if _inside(complex(s))), None)
                if last is not None:
                    ax.plot([last.real], [last.imag], marker="x", color="black")
        ax.set_xlim(-VIEWPORT, VIEWPORT)
        ax.set_ylim(-VIEWPORT, VIEWPORT)
        ax.set_aspect("equal")
        ax.set_title(f"omega = ({', '.join(str(w) for w in answer.omega)}), step {upto}")
        fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)


def write_svg_frames(answer: OracleAnswer, out_dir: Path) -> dict[str, Any]:
    """Snapshots of the s-plane at evenly spaced steps; the last frame shows every path in full."""
    out_dir.mkdir(parents=True, exist_ok=True)
    longest = max((len(tr.samples) - 1 for tr in answer.traces), default=0)
    steps = sorted({int(round(x)) for x in np.linspace(0, longest, FRAME_COUNT)}) if longest else [0]
    frames = []
    for number, upto in enumerate(steps, start=1):
        name = f"frame_{number:04d}.svg"
        _draw_frame(answer, upto, out_dir / name)
        frames.append({"file": name, "step": upto})
    index = {**traces_to_json(answer), "frames": frames}
    del index["paths"]
    index["pathCount"] = len(answer.traces)
    (out_dir / "index.json").write_text(json.dumps(index, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return index


def traces_to_frame(traces: tuple[PathTrace, ...] | list[PathTrace]) -> pl.DataFrame:
    rows = [
        {
            "path": trace.path_index,
            "step": step,
            "t": t,
            "s_re": s.real,
            "s_im": s.imag,
            "derivative": d,
            "verdict": trace.verdict.value,
        }
        for trace in traces
        for step, (t, s, d) in enumerate(trace.samples)
    ]
    schema = {
        "path": pl.Int64,
        "step": pl.Int64,
        "t": pl.Float64,
        "s_re": pl.Float64,
        "s_im": pl.Float64,
        "derivative": pl.Float64,
        "verdict": pl.Utf8,
    }
    return pl.DataFrame(rows, schema=schema)


def write_traces_parquet(answer: OracleAnswer, out_path: Path) -> Path:
    out_path.parent.mkdir(parents=True, exist_ok=True)
    traces_to_frame(answer.traces).write_parquet(out_path, compression="zstd")
    return out_path


def export_traces(answer: OracleAnswer, fmt: str, out: Path | None = None) -> dict[str, Any]:
    """Render ``answer.traces`` as a JSON document, SVG frames or a parquet table.

    Frame and table formats need ``out`` (a directory for frames, a file for parquet).
    """
    if fmt == "json":
        document = traces_to_json(answer)
        if out is not None:
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(json.dumps(document, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return document
    if out is None:
        raise ValueError(f"trace format {fmt!r} needs an output location")
    if fmt == "svg-frames":
        return write_svg_frames(answer, out)
    if fmt == "parquet":
        write_traces_parquet(answer, out)
        return {"table": str(out), "rows": sum(len(tr.samples) for tr in answer.traces)}
    raise ValueError(f"unknown trace format {fmt!r}; expected one of {TRACE_FORMATS}")


def answer_from_traces_json(document: Mapping[str, Any]) -> OracleAnswer:
    """Rebuild enough of an answer to re-render it.

    Accepts a ``traces_to_json`` document (paths under ``paths``) or an answer
    written with ``include_traces`` (paths under ``traces``).
    """
    paths = document["paths"] if "paths" in document else document.get("traces")
    if paths is None or "targets" not in document:
        raise ValueError("document carries no path traces with targets")
    return OracleAnswer(
        AnswerTag(document["tag"]),
        as_fractions(document["omega"]),
        traces=tuple(PathTrace.from_json(p) for p in paths),
        targets=tuple(complex(re, im) for re, im in document["targets"]),
        epsilon=float(document["epsilon"]),
    )
