"""Pipeline stage: one numerical polytope-oracle query.

Usage:
  python -m newtonscope.cli.stage_oracle configs/systems/sextic.sys --omega 3,2
  python -m newtonscope.cli.stage_oracle data/sextic.witness.json --omega 3,2 \
      --emit-traces svg-frames --trace-dir data/frames
"""

from __future__ import annotations

import argparse
from pathlib import Path

from ..numerics import make_rng
from ..oracle import TRACE_FORMATS, AnswerTag, build_oracle, export_traces, query_oracle
from .config import (
    EXIT_INCONCLUSIVE,
    EXIT_OK,
    RunConfig,
    add_run_arguments,
    emit,
    guarded,
    log,
    parse_omega,
)
from .stage_witness import build_witness

ORACLE_STREAM = 1


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Query the numerical polytope oracle at one direction.")
    parser.add_argument("input", type=Path, help="System file or witness JSON.")
    parser.add_argument("--omega", required=True, type=parse_omega, help='Direction, e.g. "3,2" or "3/2,-1".')
    parser.add_argument(
        "--emit-traces",
        choices=TRACE_FORMATS + ("svg",),
        help="Also export the path traces (json, svg-frames or parquet; svg means svg-frames).",
    )
    parser.add_argument("--trace-dir", type=Path, help="Directory for exported traces.")
    parser.add_argument("--include-traces", action="store_true", help="Embed traces in the answer JSON.")
    add_run_arguments(parser)
    args = parser.parse_args(argv)
    if args.emit_traces == "svg":
        args.emit_traces = "svg-frames"
    return args


def _trace_target(fmt: str, trace_dir: Path | None) -> Path | None:
    """Where to export; None means embed the traces in the answer document."""
    if trace_dir is None:
        if fmt != "json":
            raise ValueError(f"--emit-traces {fmt} needs --trace-dir")
        return None
    if fmt == "json":
        return trace_dir / "traces.json"
    if fmt == "parquet":
        return trace_dir / "traces.parquet"
    return trace_dir


def main(argv: list[str] | None = None) -> int:
    args = parse_args(argv)

    def run() -> int:
        cfg = RunConfig.from_args(args)
        target = _trace_target(args.emit_traces, args.trace_dir) if args.emit_traces else None
        witness, seed = build_witness(args.input, args, cfg)
        ctx = build_oracle(witness, rng=make_rng(seed, ORACLE_STREAM), settings=cfg.tracker)
        answer = query_oracle(ctx, args.omega, cfg.oracle, seed=seed)
        log("oracle", f"{answer.tag.value} after {answer.steps} steps on {answer.degree} paths")

        if args.emit_traces:
            if target is None:
                args.include_traces = True
            else:
                export_traces(answer, args.emit_traces, target)
                log("oracle", f"traces ({args.emit_traces}) written to {target}")

        document = answer.to_json(include_traces=args.include_traces)
        document["kept"] = list(ctx.kept)
        document["degree"] = ctx.degree
        document["settings"] = {"tracker": cfg.tracker.to_dict(), "oracle": cfg.oracle.to_dict()}
        emit(document, args, cfg, seed, argv)
        return EXIT_INCONCLUSIVE if answer.tag is AnswerTag.INCONCLUSIVE else EXIT_OK

    return guarded(run)


if __name__ == "__main__":
    raise SystemExit(main())
