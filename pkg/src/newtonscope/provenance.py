"""Run sidecars for CLI artifacts.

Every document written with ``--out`` gets a ``<artifact>.run.json`` neighbour
holding the settings, seed, git revision and wall-clock timestamp. The artifact
itself stays free of timestamps so repeated runs with one seed compare equal.
"""

from __future__ import annotations

import json
import os
import subprocess
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Mapping, Sequence


def _git_rev() -> str | None:
    try:
        out = subprocess.check_output(
            ["git", "rev-parse", "--short=12", "HEAD"],
            text=True,
            stderr=subprocess.DEVNULL,
        ).strip()
        return out or None
    except Exception:
        return None


def sidecar_path(output_path: os.PathLike[str] | str) -> Path:
    out = Path(output_path)
    return out.with_suffix(out.suffix + ".run.json")


def write(
    output_path: os.PathLike[str] | str,
    config: Mapping[str, Any],
    *,
    seed: int,
    argv: Sequence[str] | None = None,
) -> Path:
    """Write the sidecar for ``output_path`` and return its location."""
    sidecar = sidecar_path(output_path)
    sidecar.parent.mkdir(parents=True, exist_ok=True)

    payload: dict[str, Any] = {
        "artifact": Path(output_path).name,
        "config": dict(config),
        "seed": seed,
        "git_commit": _git_rev(),
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "command": ["newtonscope", *(argv if argv is not None else sys.argv[1:])],
    }

    tmp = sidecar.with_suffix(sidecar.suffix + ".tmp")
    with tmp.open("w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")
    tmp.replace(sidecar)
    return sidecar
