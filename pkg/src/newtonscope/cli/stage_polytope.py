"""Pipeline stage: reconstruct a homogenized Newton polytope from oracle queries.

Usage:
  python -m newtonscope.cli.stage_polytope configs/systems/sextic.sys --out data/sextic.polytope.json
  python -m newtonscope.cli.stage_polytope configs/systems/sextic.sys --symbolic
"""

from __future__ import annotations

import argparse
from pathlib import Path

from ..numerics import make_rng
from ..oracle import build_oracle, query_oracle
from ..poly.elimination import eliminate
from ..poly.types import Polynomial
from ..polytope import QueryLog, bounding_box, reconstruct_polytope, symbolic_oracle
from .config import EXIT_OK, RunConfig, add_run_arguments, emit, guarded, log, resolve_seed
from .stage_witness import compute_witness
from .systemfile import SystemFile

ORACLE_STREAM = 1
RECONSTRUCT_STREAM = 2


def explicit_polynomial(sysfile: SystemFile) -> Polynomial:
    """The single equation, or the resultant when one variable of two equations is projected away."""
    system = sysfile.system
    if not sysfile.project and len(system) == 1:
        return system[0]
    if len(sysfile.project) == 1 and len(system) == 2:
        return eliminate(system, sysfile.project[0])
    raise ValueError(
        "--symbolic needs one equation, or two equations with one projected variable; "
        f"got {len(system)} equations projecting {list(sysfile.project)}"
    )


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Reconstruct the homogenized Newton polytope.")
    parser.add_argument("system", type=Path, help="System file.")
    parser.add_argument(
        "--symbolic",
        action="store_true",
        help="Answer queries exactly from the explicit (or eliminated) polynomial.",
    )
    parser.add_argument("--box", action="store_true", help="Only compute coordinate bounds.")
    parser.add_argument("--max-queries", type=int, default=10_000)
    parser.add_argument("--lattice-points", action="store_true", help="Also count lattice points.")
    parser.add_argument("--query-log", type=Path, help="Write the oracle query log as parquet.")
    add_run_arguments(parser)
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    args = parse_args(argv)

    def run() -> int:
        cfg = RunConfig.from_args(args)
        sysfile = SystemFile.from_file(args.system)
        seed = resolve_seed(args.seed, sysfile.seed, cfg.seed)

        if args.symbolic:
            f = explicit_polynomial(sysfile)
            n, degree_hint = f.n, f.degree

            def oracle(omega):
                return symbolic_oracle(f, omega)

            mode = "symbolic"
        else:
            witness = compute_witness(sysfile, seed, cfg.tracker)
            ctx = build_oracle(witness, rng=make_rng(seed, ORACLE_STREAM), settings=cfg.tracker)
            n, degree_hint = ctx.n, ctx.degree

            def oracle(omega):
                return query_oracle(ctx, omega, cfg.oracle, seed=seed)

            mode = "numeric"

        query_log = QueryLog()
        rng = make_rng(seed, RECONSTRUCT_STREAM)
        document: dict = {"mode": mode, "seed": seed, "degree": degree_hint}
        if args.box:
            box = bounding_box(oracle, n, degree_hint, rng=rng, log=query_log)
            document["box"] = [list(b) for b in box]
        else:
            polytope = reconstruct_polytope(
                oracle, n, degree_hint, rng=rng, max_queries=args.max_queries, log=query_log
            )
            document.update(polytope.to_json())
            document["vertexCount"] = len(polytope)
            document["affineDimension"] = polytope.affine_dimension()
            if args.lattice_points:
                document["latticePointCount"] = len(polytope.lattice_points())
            log("polytope", f"{len(polytope)} vertices, affine dimension {polytope.affine_dimension()}")
        document["queries"] = len(query_log)
        document["settings"] = {"tracker": cfg.tracker.to_dict(), "oracle": cfg.oracle.to_dict()}
        log("polytope", f"{len(query_log)} {mode} oracle queries")
        if args.query_log is not None:
            query_log.write_parquet(args.query_log)
        emit(document, args, cfg, seed, argv)
        return EXIT_OK

    return guarded(run)


if __name__ == "__main__":
    raise SystemExit(main())
