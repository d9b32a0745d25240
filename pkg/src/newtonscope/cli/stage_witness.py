"""Pipeline stage: witness set of a hypersurface (or of a projection onto one).

Usage:
  python -m newtonscope.cli.stage_witness configs/systems/sextic.sys --out data/sextic.witness.json
"""

from __future__ import annotations

import argparse
import dataclasses
from pathlib import Path

from ..numerics import make_rng
from ..tracker import TrackSettings
from ..witness import WitnessSet, witness_for_projection
from .config import EXIT_OK, RunConfig, add_run_arguments, emit, guarded, log, resolve_seed
from .systemfile import SystemFile


def build_witness(path: Path, args: argparse.Namespace, cfg: RunConfig) -> tuple[WitnessSet, int]:
    """Witness from a system file, or loaded as-is from a witness JSON document."""
    if path.suffix == ".json":
        witness = WitnessSet.load(path)
        seed = resolve_seed(args.seed, witness.seed, cfg.seed)
        log("witness", f"loaded degree {witness.degree} witness from {path}")
        return witness, seed
    sysfile = SystemFile.from_file(path)
    seed = resolve_seed(args.seed, sysfile.seed, cfg.seed)
    witness = compute_witness(sysfile, seed, cfg.tracker)
    return witness, seed


def compute_witness(sysfile: SystemFile, seed: int, tracker: TrackSettings) -> WitnessSet:
    rng = make_rng(seed)
    witness = witness_for_projection(sysfile.system, sysfile.dropped, rng, tracker)
    witness = dataclasses.replace(witness, seed=seed)
    kept = ", ".join(witness.image_variables)
    log("witness", f"degree {witness.degree} image in ({kept}), {witness.hyperplanes} fiber hyperplanes")
    return witness


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Compute a witness set of a hypersurface image.")
    parser.add_argument("system", type=Path, help="System file (vars:/eq:/project:/seed: lines).")
    add_run_arguments(parser, oracle=False)
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    args = parse_args(argv)

    def run() -> int:
        cfg = RunConfig.from_args(args)
        sysfile = SystemFile.from_file(args.system)
        seed = resolve_seed(args.seed, sysfile.seed, cfg.seed)
        witness = compute_witness(sysfile, seed, cfg.tracker)
        document = witness.to_json()
        document["settings"] = {"tracker": cfg.tracker.to_dict()}
        emit(document, args, cfg, seed, argv)
        return EXIT_OK

    return guarded(run)


if __name__ == "__main__":
    raise SystemExit(main())
