"""Pipeline stage: tropical membership of one or more directions.

Usage:
  python -m newtonscope.cli.stage_tropical configs/systems/cube_pair_J.sys --omega 1,1,1
  python -m newtonscope.cli.stage_tropical configs/systems/cube_pair_I.sys \
      --monomial-map configs/maps/xyz.json --omega 1,1,1 --omega 1,-1,-1
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

import numpy as np

from ..numerics import make_rng
from ..tropical import MembershipSession
from .config import (
    EXIT_INCONCLUSIVE,
    EXIT_OK,
    RunConfig,
    add_run_arguments,
    emit,
    guarded,
    log,
    parse_omega,
    resolve_seed,
)
from .systemfile import SystemFile


def load_map(choice: str) -> str | np.ndarray | None:
    """``none``, ``random``, or a JSON file holding a square integer matrix (optionally under ``matrix``)."""
    if choice == "none":
        return None
    if choice == "random":
        return "random"
    with Path(choice).open("r", encoding="utf-8") as handle:
        payload = json.load(handle)
    rows = payload["matrix"] if isinstance(payload, dict) else payload
    return np.array(rows, dtype=np.int64)


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Test directions for membership in the tropical variety.")
    parser.add_argument("system", type=Path, help="System file (its project: line is ignored).")
    parser.add_argument(
        "--omega",
        required=True,
        action="append",
        type=parse_omega,
        help="Direction to test; repeat for several.",
    )
    parser.add_argument(
        "--monomial-map",
        default="none",
        help="none, random, or a JSON matrix file applied before projecting.",
    )
    add_run_arguments(parser)
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    args = parse_args(argv)

    def run() -> int:
        cfg = RunConfig.from_args(args)
        sysfile = SystemFile.from_file(args.system)
        seed = resolve_seed(args.seed, sysfile.seed, cfg.seed)
        session = MembershipSession(
            sysfile.system,
            rng=make_rng(seed),
            track=cfg.tracker,
            monomial_map=load_map(args.monomial_map),
        )
        live = sum(ctx is not None for _, ctx, _ in session.contexts)
        log("tropical", f"dimension {session.dimension}, {live} hypersurface projections")

        reports = []
        for omega in args.omega:
            report = session.query(omega, cfg.oracle, seed=seed)
            verdict = "inconclusive" if report.inconclusive else str(report.verdict).lower()
            log("tropical", f"omega = ({', '.join(str(w) for w in omega)}): {verdict}")
            reports.append(report)

        if len(reports) == 1:
            document = reports[0].to_json()
        else:
            document = {"seed": seed, "reports": [r.to_json() for r in reports]}
            document["verdicts"] = [r.verdict for r in reports]
        document["dimension"] = session.dimension
        document["settings"] = {"tracker": cfg.tracker.to_dict(), "oracle": cfg.oracle.to_dict()}
        emit(document, args, cfg, seed, argv)
        return EXIT_INCONCLUSIVE if any(r.inconclusive for r in reports) else EXIT_OK

    return guarded(run)


if __name__ == "__main__":
    raise SystemExit(main())
