"""Line-oriented system files.

    # a space curve projected to the plane
    vars: x y t
    eq: x*y*t - (x-y-t)^2 + 3*x + t
    eq: x + y^2 + t^2
    project: t
    seed: 42

``vars:`` comes first, ``eq:`` repeats, ``project:`` names the dropped
variables and ``seed:`` is optional.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from ..poly.parser import parse_polynomial
from ..poly.types import PolySystem

KEYS = ("vars", "eq", "project", "seed")


class SystemFileError(ValueError):
    def __init__(self, message: str, *, line: int | None = None, source: str | None = None):
        where = f"{source or '<system>'}:{line}: " if line is not None else ""
        super().__init__(f"{where}{message}")
        self.line = line
        self.source = source


@dataclass(frozen=True)
class SystemFile:
    variables: tuple[str, ...]
    equations: tuple[str, ...]
    system: PolySystem
    project: tuple[str, ...] = ()
    seed: int | None = None
    source: str | None = None

    @property
    def dropped(self) -> list[int]:
        return [self.variables.index(name) for name in self.project]

    @classmethod
    def parse(cls, text: str, *, source: str | None = None) -> "SystemFile":
        variables: tuple[str, ...] | None = None
        equations: list[tuple[int, str]] = []
        project: tuple[str, ...] = ()
        project_line = 0
        seed: int | None = None
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition(":")
            key = key.strip().lower()
            value = value.strip()
            if not sep or key not in KEYS:
                raise SystemFileError(f"expected one of {list(KEYS)} followed by ':'", line=lineno, source=source)
            if key == "vars":
                if variables is not None:
                    raise SystemFileError("duplicate 'vars:' line", line=lineno, source=source)
                variables = tuple(value.replace(",", " ").split())
                if not variables:
                    raise SystemFileError("'vars:' lists no variables", line=lineno, source=source)
            elif key == "eq":
                if not value:
                    raise SystemFileError("empty equation", line=lineno, source=source)
                equations.append((lineno, value))
            elif key == "project":
                project = tuple(value.replace(",", " ").split())
                project_line = lineno
            else:
                try:
                    seed = int(value)
                except ValueError:
                    raise SystemFileError(f"seed must be an integer, got {value!r}", line=lineno, source=source) from None
                if seed < 0:
                    raise SystemFileError(f"seed must be unsigned, got {seed}", line=lineno, source=source)
        if variables is None:
            raise SystemFileError("missing 'vars:' line", source=source)
        if not equations:
            raise SystemFileError("no 'eq:' lines", source=source)
        polys = []
        for lineno, eq in equations:
            try:
                polys.append(parse_polynomial(eq, variables))
            except ValueError as exc:
                raise SystemFileError(str(exc), line=lineno, source=source) from exc
        unknown = [name for name in project if name not in variables]
        if unknown:
            raise SystemFileError(f"projected names {unknown} are not variables", line=project_line, source=source)
        return cls(
            variables=variables,
            equations=tuple(eq for _, eq in equations),
            system=PolySystem(variables, tuple(polys)),
            project=project,
            seed=seed,
            source=source,
        )

    @classmethod
    def from_file(cls, path: Path) -> "SystemFile":
        return cls.parse(path.read_text(encoding="utf-8"), source=str(path))
