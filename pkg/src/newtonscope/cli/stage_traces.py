"""Pipeline stage: re-render exported path traces.

Usage:
  python -m newtonscope.cli.stage_traces data/traces/traces.json --emit-traces svg-frames --trace-dir data/frames
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

from ..oracle import TRACE_FORMATS, answer_from_traces_json, export_traces
from .config import EXIT_OK, guarded, log


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Convert a traces JSON document to frames or a table.")
    parser.add_argument("traces", type=Path, help="Traces JSON or an answer written with --include-traces.")
    parser.add_argument("--emit-traces", choices=TRACE_FORMATS, default="svg-frames")
    parser.add_argument("--trace-dir", type=Path, required=True, help="Output directory.")
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    args = parse_args(argv)

    def run() -> int:
        with args.traces.open("r", encoding="utf-8") as handle:
            document = json.load(handle)
        answer = answer_from_traces_json(document)
        if args.emit_traces == "svg-frames":
            target = args.trace_dir
        else:
            target = args.trace_dir / f"traces.{args.emit_traces}"
        export_traces(answer, args.emit_traces, target)
        log("traces", f"{len(answer.traces)} paths written as {args.emit_traces} to {target}")
        return EXIT_OK

    return guarded(run)


if __name__ == "__main__":
    raise SystemExit(main())
