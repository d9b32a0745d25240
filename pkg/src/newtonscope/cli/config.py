from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Mapping, Sequence

from .. import provenance
from ..oracle import OracleSettings
from ..tracker import TrackSettings

SEED_ENV = "NEWTONSCOPE_SEED"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2


@dataclass(frozen=True)
class RunConfig:
    seed: int | None = None
    tracker: TrackSettings = field(default_factory=TrackSettings)
    oracle: OracleSettings = field(default_factory=OracleSettings)

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "RunConfig":
        unknown = sorted(set(data) - {"seed", "tracker", "oracle"})
        if unknown:
            raise ValueError(f"unknown run config sections: {unknown}")
        seed = data.get("seed")
        return cls(
            seed=int(seed) if seed is not None else None,
            tracker=TrackSettings.from_mapping(data.get("tracker", {})),
            oracle=OracleSettings.from_mapping(data.get("oracle", {})),
        )

    @classmethod
    def from_file(cls, path: Path) -> "RunConfig":
        with path.open("r", encoding="utf-8") as handle:
            payload = json.load(handle)
        return cls.from_mapping(payload)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        """Config file (if any) with command-line overrides applied."""
        cfg = cls.from_file(Path(args.config)) if getattr(args, "config", None) else cls()
        tracker = cfg.tracker.with_overrides(workers=getattr(args, "workers", None))
        oracle = cfg.oracle.with_overrides(
            certainty=getattr(args, "certainty", None),
            epsilon=getattr(args, "epsilon", None),
            min_tracks=getattr(args, "min_tracks", None),
            max_tracks=getattr(args, "max_tracks", None),
            step_resolution=getattr(args, "step_resolution", None),
        )
        if tracker.workers != oracle.track.workers:
            oracle = oracle.with_overrides(track=oracle.track.with_overrides(workers=tracker.workers))
        return cls(seed=cfg.seed, tracker=tracker, oracle=oracle)

    def to_dict(self) -> dict[str, Any]:
        return {"seed": self.seed, "tracker": self.tracker.to_dict(), "oracle": self.oracle.to_dict()}


def resolve_seed(flag: int | None, file_seed: int | None = None, config_seed: int | None = None) -> int:
    """``--seed``, then the system file, then the run config, then ``NEWTONSCOPE_SEED``, else 0."""
    for candidate in (flag, file_seed, config_seed):
        if candidate is not None:
            return int(candidate)
    raw = os.environ.get(SEED_ENV)
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise ValueError(f"{SEED_ENV} must be an integer, got {raw!r}") from None
    return 0


def parse_omega(text: str) -> tuple[Fraction, ...]:
    """``"3/2,-1"`` -> ``(3/2, -1)``."""
    parts = [p.strip() for p in text.split(",")]
    if not parts or any(not p for p in parts):
        raise argparse.ArgumentTypeError(f"direction {text!r} must be comma-separated rationals")
    try:
        return tuple(Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"direction {text!r} must be comma-separated rationals") from None


def add_run_arguments(parser: argparse.ArgumentParser, *, oracle: bool = True) -> None:
    parser.add_argument("--config", help="Run settings JSON (seed, tracker, oracle sections).")
    parser.add_argument("--seed", type=int, help=f"RNG seed (falls back to the file, then ${SEED_ENV}).")
    parser.add_argument("--workers", type=int, help="Worker processes for path tracking.")
    parser.add_argument("--out", type=Path, help="Write the JSON result here plus a .run.json sidecar.")
    if oracle:
        parser.add_argument(
            "--certainty", type=float, help="Decide a path once |ds/d ln t| passes 10**certainty or 10**-certainty."
        )
        parser.add_argument("--epsilon", type=float, help="Capture radius around each target.")
        parser.add_argument("--min-tracks", type=int, help="Steps before any decision.")
        parser.add_argument("--max-tracks", type=int, help="Steps before giving up (Inconclusive).")
        parser.add_argument("--step-resolution", type=float, help="Ratio between consecutive t.")


def emit(document: Mapping[str, Any], args: argparse.Namespace, cfg: RunConfig, seed: int, argv: Sequence[str] | None) -> None:
    text = json.dumps(document, indent=2, sort_keys=True) + "\n"
    out: Path | None = getattr(args, "out", None)
    if out is None:
        sys.stdout.write(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    provenance.write(out, {**cfg.to_dict(), "seed": seed}, seed=seed, argv=argv)


def log(stage: str, message: str) -> None:
    print(f"[newtonscope.{stage}] {message}", file=sys.stderr)


def guarded(run: Callable[[], int]) -> int:
    """Run a stage body, turning exceptions into ``error: ...`` and exit code 1."""
    try:
        return run()
    except KeyboardInterrupt:
        raise
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
