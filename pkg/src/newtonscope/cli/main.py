"""``newtonscope <stage> ...``: dispatch to the pipeline stages.

Directions starting with a minus sign must be attached to the flag, e.g.
``--omega=-1,1,1``.
"""

from __future__ import annotations

import sys

from . import stage_oracle, stage_polytope, stage_traces, stage_tropical, stage_witness

STAGES = {
    "witness": stage_witness.main,
    "oracle": stage_oracle.main,
    "polytope": stage_polytope.main,
    "tropical": stage_tropical.main,
    "traces": stage_traces.main,
}


def main(argv: list[str] | None = None) -> int:
    args = list(sys.argv[1:] if argv is None else argv)
    if not args or args[0] in {"-h", "--help"}:
        print(f"usage: newtonscope {{{','.join(STAGES)}}} ...", file=sys.stderr)
        return 0 if args else 1
    stage, rest = args[0], args[1:]
    if stage not in STAGES:
        print(f"error: unknown stage {stage!r}; choose from {sorted(STAGES)}", file=sys.stderr)
        return 1
    return STAGES[stage](rest)


if __name__ == "__main__":
    raise SystemExit(main())
