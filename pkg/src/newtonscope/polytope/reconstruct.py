from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Protocol, Sequence

import numpy as np
import polars as pl
import sympy

from .exact import IntVector, differences, dot, nullspace
from .hull import IncrementalHull
from .lattice import LatticePolytope

PERTURBATION_RETRIES = 5
PERTURBATION_STEPS = (-2, -1, 1, 2)
DEFAULT_MAX_QUERIES = 10_000


class InconsistentOracleError(RuntimeError):
    pass


class BudgetExceededError(RuntimeError):
    pass


class AnswerLike(Protocol):
    @property
    def is_eep(self) -> bool: ...

    @property
    def vertex_point(self) -> tuple[int, ...] | None: ...

    def to_json(self) -> dict[str, Any]: ...


Oracle = Callable[[tuple[Fraction, ...]], AnswerLike]


def functional_to_direction(functional: Sequence[int]) -> tuple[Fraction, ...]:
    """Direction ``omega`` in ``Q^n`` acting like ``functional`` on ``sum(x) = const``."""
    *head, last = functional
    return tuple(Fraction(v - last) for v in head)


@dataclass(frozen=True)
class QueryRecord:
    functional: IntVector
    omega: tuple[Fraction, ...]
    answer: dict[str, Any]
    vertex: IntVector | None


@dataclass
class QueryLog:
    """Every oracle question asked during a reconstruction, in order."""

    records: list[QueryRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def append(self, record: QueryRecord) -> None:
        self.records.append(record)

    def to_json(self) -> list[dict[str, Any]]:
        return [
            {
                "functional": list(r.functional),
                "omega": [str(w) for w in r.omega],
                "answer": r.answer,
                "vertex": None if r.vertex is None else list(r.vertex),
            }
            for r in self.records
        ]

    def to_frame(self) -> pl.DataFrame:
        return pl.DataFrame(
            {
                "query": list(range(len(self.records))),
                "functional": [list(r.functional) for r in self.records],
                "omega": [[str(w) for w in r.omega] for r in self.records],
                "tag": [str(r.answer.get("tag")) for r in self.records],
                "vertex": [None if r.vertex is None else list(r.vertex) for r in self.records],
            },
            schema={
                "query": pl.Int64,
                "functional": pl.List(pl.Int64),
                "omega": pl.List(pl.Utf8),
                "tag": pl.Utf8,
                "vertex": pl.List(pl.Int64),
            },
        )

    def write_parquet(self, path: Path) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().write_parquet(path, compression="zstd")
        return path


class _Prober:
    """Asks the oracle for the vertex maximising an integer functional on ``Z^(n+1)``."""

    def __init__(
        self,
        oracle: Oracle,
        n: int,
        degree_hint: int,
        rng: np.random.Generator,
        max_queries: int,
        log: QueryLog,
    ):
        self.oracle = oracle
        self.width = n + 1
        self.degree_hint = max(int(degree_hint), 1)
        self.rng = rng
        self.max_queries = max_queries
        self.log = log
        self.level: int | None = None

    def _query(self, functional: IntVector) -> AnswerLike:
        if len(self.log) >= self.max_queries:
            raise BudgetExceededError(f"oracle budget of {self.max_queries} queries exhausted")
        omega = functional_to_direction(functional)
        answer = self.oracle(omega)
        vertex = answer.vertex_point
        self.log.append(QueryRecord(functional, omega, answer.to_json(), vertex))
        return answer

    def _perturbed(self, functional: IntVector) -> IntVector:
        # p > 4d keeps the maximiser of p*nu + delta inside the nu-face.
        prime = int(sympy.nextprime(4 * self.degree_hint + int(self.rng.integers(0, 64))))
        delta = self.rng.choice(PERTURBATION_STEPS, size=self.width)
        return tuple(prime * v + int(d) for v, d in zip(functional, delta))

    def _check_vertex(self, vertex: Sequence[int]) -> IntVector:
        v = tuple(int(x) for x in vertex)
        if len(v) != self.width or any(x < 0 for x in v):
            raise InconsistentOracleError(f"oracle returned {v}, not a point of N^{self.width}")
        if self.level is None:
            self.level = sum(v)
        elif sum(v) != self.level:
            raise InconsistentOracleError(
                f"vertex {v} has coordinate sum {sum(v)}, earlier vertices have {self.level}"
            )
        return v

    def ask(self, functional: Sequence[int]) -> IntVector | None:
        """Vertex attaining the max of ``functional``; None when it is constant on the polytope."""
        base = tuple(int(v) for v in functional)
        probe = base
        for _ in range(PERTURBATION_RETRIES + 1):
            answer = self._query(probe)
            if answer.is_eep and probe == base:
                return None
            vertex = answer.vertex_point
            if vertex is not None:
                return self._check_vertex(vertex)
            probe = self._perturbed(base)
        raise InconsistentOracleError(
            f"no vertex exposed near functional {list(base)} after {PERTURBATION_RETRIES} perturbations"
        )


def _unit(width: int, index: int, sign: int) -> IntVector:
    return tuple(sign if j == index else 0 for j in range(width))


def _detect_span(prober: _Prober) -> list[IntVector]:
    """Vertices whose affine span is the span of the polytope."""
    width = prober.width
    points: list[IntVector] = []
    for i in range(width):
        for sign in (1, -1):
            v = prober.ask(_unit(width, i, sign))
            if v is not None and v not in points:
                points.append(v)
    if not points:
        raise InconsistentOracleError("oracle exposed no vertex in any coordinate direction")
    while True:
        found = None
        for normal in nullspace(differences(points), width):
            level = dot(normal, points[0])
            for sign in (1, -1):
                v = prober.ask(tuple(sign * c for c in normal))
                if v is not None and dot(normal, v) != level:
                    found = v
                    break
            if found is not None:
                break
        if found is None:
            return points
        points.append(found)


def reconstruct_polytope(
    oracle: Oracle,
    n: int,
    degree_hint: int,
    *,
    rng: np.random.Generator,
    max_queries: int = DEFAULT_MAX_QUERIES,
    log: QueryLog | None = None,
) -> LatticePolytope:
    """Vertex set of the homogenized polytope behind ``oracle``, found by beneath-beyond.

    Every hull facet is queried with its outward normal; a returned vertex
    outside the hull is added, one on the facet certifies it. The result is
    complete once every facet is certified.
    """
    log = log if log is not None else QueryLog()
    prober = _Prober(oracle, n, degree_hint, rng, max_queries, log)
    hull = IncrementalHull(_detect_span(prober))
    certified: dict[tuple[IntVector, int], IntVector] = {}
    while True:
        pending = [f for f in hull.facets() if (f.normal, f.offset) not in certified]
        if not pending:
            break
        facet = pending[0]
        functional = hull.ambient_normal(facet.normal)
        v = prober.ask(functional)
        if v is None:
            raise InconsistentOracleError(f"facet normal {list(functional)} reported as constant")
        for (normal, offset), mu in certified.items():
            if dot(mu, v) >= offset + 1:
                raise InconsistentOracleError(
                    f"vertex {v} violates certified halfspace {list(mu)} . x <= {offset}"
                )
        if not hull.in_span(v):
            raise InconsistentOracleError(f"vertex {v} leaves the detected affine span")
        value = dot(functional, v)
        if value > facet.offset:
            hull.add(v)
        elif value == facet.offset:
            certified[(facet.normal, facet.offset)] = functional
        else:
            raise InconsistentOracleError(
                f"oracle maximum {value} of {list(functional)} is below known value {facet.offset}"
            )
    return LatticePolytope(hull.vertices())


def bounding_box(
    oracle: Oracle,
    n: int,
    degree_hint: int,
    *,
    rng: np.random.Generator,
    log: QueryLog | None = None,
) -> list[tuple[int, int]]:
    """Coordinate ranges ``(min, max)`` of the homogenized polytope, from the ``+-e_i`` queries."""
    prober = _Prober(oracle, n, degree_hint, rng, DEFAULT_MAX_QUERIES, log or QueryLog())
    width = n + 1
    tops = [prober.ask(_unit(width, i, 1)) for i in range(width)]
    bottoms = [prober.ask(_unit(width, i, -1)) for i in range(width)]
    known = next((v for v in tops + bottoms if v is not None), None)
    if known is None:
        raise InconsistentOracleError("oracle exposed no vertex in any coordinate direction")
    box = []
    for i in range(width):
        hi = tops[i][i] if tops[i] is not None else known[i]
        lo = bottoms[i][i] if bottoms[i] is not None else known[i]
        box.append((lo, hi))
    return box
