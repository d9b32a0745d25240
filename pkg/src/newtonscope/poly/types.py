from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

Exponent = tuple[int, ...]

# Minimum pairwise distance between the targets b_i / a_i of a line family.
TARGET_SEPARATION = 0.5


class DimensionMismatchError(ValueError):
    """A point, exponent or direction has the wrong number of coordinates."""


def _term_order(alpha: Exponent) -> tuple[int, Exponent]:
    return (sum(alpha), alpha)


def _check_identifiers(variables: Sequence[str]) -> tuple[str, ...]:
    names = tuple(str(v) for v in variables)
    for name in names:
        if not name or not (name[0].isalpha() or name[0] == "_"):
            raise ValueError(f"invalid variable name {name!r}")
        if not all(ch.isalnum() or ch == "_" for ch in name):
            raise ValueError(f"invalid variable name {name!r}")
        if name == "i":
            raise ValueError("'i' is reserved for the imaginary unit")
    if len(set(names)) != len(names):
        raise ValueError(f"variable names must be distinct, got {list(names)}")
    return names


class Polynomial:
    """Sparse polynomial with complex coefficients over named variables.

    Terms map exponent tuples to nonzero coefficients. Instances are immutable;
    arithmetic returns new polynomials with like terms combined and exact zeros
    removed.
    """

    __slots__ = ("_variables", "_terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Sequence[int], complex] | None = None):
        names = _check_identifiers(variables)
        n = len(names)
        combined: dict[Exponent, complex] = {}
        for alpha, coeff in (terms or {}).items():
            key = tuple(int(a) for a in alpha)
            if len(key) != n:
                raise DimensionMismatchError(
                    f"exponent {key} has {len(key)} entries, expected {n}"
                )
            if any(a < 0 for a in key):
                raise ValueError(f"exponent {key} has a negative entry")
            combined[key] = combined.get(key, 0j) + complex(coeff)
        ordered = sorted(
            ((k, c) for k, c in combined.items() if c != 0),
            key=lambda item: _term_order(item[0]),
            reverse=True,
        )
        self._variables = names
        self._terms: dict[Exponent, complex] = dict(ordered)

    @classmethod
    def constant(cls, value: complex, variables: Sequence[str]) -> "Polynomial":
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def variable(cls, name: str, variables: Sequence[str]) -> "Polynomial":
        names = tuple(variables)
        if name not in names:
            raise ValueError(f"unknown variable {name!r}")
        alpha = tuple(1 if v == name else 0 for v in names)
        return cls(names, {alpha: 1.0})

    @classmethod
    def linear(
        cls, coefficients: Sequence[complex], constant: complex, variables: Sequence[str]
    ) -> "Polynomial":
        names = tuple(variables)
        if len(coefficients) != len(names):
            raise DimensionMismatchError(
                f"{len(coefficients)} coefficients for {len(names)} variables"
            )
        terms: dict[Exponent, complex] = {(0,) * len(names): constant}
        for j, c in enumerate(coefficients):
            alpha = tuple(1 if k == j else 0 for k in range(len(names)))
            terms[alpha] = c
        return cls(names, terms)

    @property
    def variables(self) -> tuple[str, ...]:
        return self._variables

    @property
    def terms(self) -> Mapping[Exponent, complex]:
        return self._terms

    @property
    def n(self) -> int:
        return len(self._variables)

    @property
    def degree(self) -> int:
        return max((sum(alpha) for alpha in self._terms), default=0)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(sum(alpha) == 0 for alpha in self._terms)

    def is_homogeneous(self) -> bool:
        return len({sum(alpha) for alpha in self._terms}) <= 1

    def coefficient(self, alpha: Sequence[int]) -> complex:
        return self._terms.get(tuple(alpha), 0j)

    def max_coefficient(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[Exponent, complex]]:
        return iter(self._terms.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._variables == other._variables and self._terms == other._terms

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Polynomial({list(self._variables)!r}, {self!s})"

    def __str__(self) -> str:
        from .parser import to_string

        return to_string(self)

    def _coerce(self, other: "Polynomial | complex | float | int") -> "Polynomial":
        if isinstance(other, Polynomial):
            if other._variables != self._variables:
                raise DimensionMismatchError(
                    f"variables {other._variables} do not match {self._variables}"
                )
            return other
        return Polynomial.constant(complex(other), self._variables)

    def __add__(self, other: "Polynomial | complex | float | int") -> "Polynomial":
        rhs = self._coerce(other)
        terms = dict(self._terms)
        for alpha, c in rhs._terms.items():
            terms[alpha] = terms.get(alpha, 0j) + c
        return Polynomial(self._variables, terms)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self._variables, {alpha: -c for alpha, c in self._terms.items()})

    def __sub__(self, other: "Polynomial | complex | float | int") -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other: "Polynomial | complex | float | int") -> "Polynomial":
        return self._coerce(other) + (-self)

    def __mul__(self, other: "Polynomial | complex | float | int") -> "Polynomial":
        rhs = self._coerce(other)
        terms: dict[Exponent, complex] = {}
        for alpha, c in self._terms.items():
            for beta, e in rhs._terms.items():
                key = tuple(x + y for x, y in zip(alpha, beta))
                terms[key] = terms.get(key, 0j) + c * e
        return Polynomial(self._variables, terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"exponent must be a nonnegative integer, got {exponent!r}")
        result = Polynomial.constant(1.0, self._variables)
        base = self
        k = exponent
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scaled(self, factor: complex) -> "Polynomial":
        return Polynomial(self._variables, {a: c * factor for a, c in self._terms.items()})

    def embed(self, variables: Sequence[str]) -> "Polynomial":
        """Re-express over a superset of variables, padding exponents with zeros."""
        target = _check_identifiers(variables)
        index = {name: k for k, name in enumerate(target)}
        missing = [v for v in self._variables if v not in index]
        if missing:
            raise ValueError(f"variables {missing} are not in {list(target)}")
        slots = [index[v] for v in self._variables]
        terms: dict[Exponent, complex] = {}
        for alpha, c in self._terms.items():
            key = [0] * len(target)
            for slot, a in zip(slots, alpha):
                key[slot] = a
            terms[tuple(key)] = c
        return Polynomial(target, terms)


@dataclass(frozen=True, eq=False)
class PolySystem:
    """Ordered list of polynomials over shared, named variables."""

    variables: tuple[str, ...]
    polys: tuple[Polynomial, ...]

    def __post_init__(self) -> None:
        names = _check_identifiers(self.variables)
        polys = tuple(self.polys)
        for k, f in enumerate(polys):
            if f.variables != names:
                raise DimensionMismatchError(
                    f"equation {k} is over {list(f.variables)}, expected {list(names)}"
                )
        object.__setattr__(self, "variables", names)
        object.__setattr__(self, "polys", polys)

    @classmethod
    def of(cls, polys: Iterable[Polynomial]) -> "PolySystem":
        items = tuple(polys)
        if not items:
            raise ValueError("cannot infer variables from an empty system")
        return cls(items[0].variables, items)

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(f.degree for f in self.polys)

    def is_square(self) -> bool:
        return len(self.polys) == self.n

    def extend(self, polys: Iterable[Polynomial]) -> "PolySystem":
        return PolySystem(self.variables, self.polys + tuple(polys))

    def __len__(self) -> int:
        return len(self.polys)

    def __iter__(self) -> Iterator[Polynomial]:
        return iter(self.polys)

    def __getitem__(self, index: int) -> Polynomial:
        return self.polys[index]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolySystem):
            return NotImplemented
        return self.variables == other.variables and self.polys == other.polys

    __hash__ = None  # type: ignore[assignment]


def as_fractions(values: Iterable[Fraction | int | str | float]) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


@dataclass(frozen=True, eq=False)
class LineFamily:
    """Lines ``x_i = t**omega_i * (a_i * s - b_i)`` indexed by ``t > 0``.

    The targets ``b_i / a_i`` are where a root ``s`` lands when the ``i``-th
    coordinate is driven to zero; they must be pairwise separated.
    """

    omega: tuple[Fraction, ...]
    a: tuple[complex, ...]
    b: tuple[complex, ...]

    def __post_init__(self) -> None:
        omega = as_fractions(self.omega)
        a = tuple(complex(x) for x in self.a)
        b = tuple(complex(x) for x in self.b)
        if not (len(omega) == len(a) == len(b)):
            raise DimensionMismatchError(
                f"omega, a, b lengths differ: {len(omega)}, {len(a)}, {len(b)}"
            )
        if any(x == 0 for x in a) or any(x == 0 for x in b):
            raise ValueError("line family coefficients a_i and b_i must be nonzero")
        targets = [bi / ai for ai, bi in zip(a, b)]
        for i in range(len(targets)):
            for j in range(i + 1, len(targets)):
                if abs(targets[i] - targets[j]) < TARGET_SEPARATION:
                    raise ValueError(
                        f"targets {i} and {j} are {abs(targets[i] - targets[j]):.3g} apart, "
                        f"need at least {TARGET_SEPARATION}"
                    )
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def from_targets(
        cls, targets: Sequence[complex], a: Sequence[complex], omega: Sequence[Fraction] | None = None
    ) -> "LineFamily":
        b = tuple(complex(g) * complex(x) for g, x in zip(targets, a))
        direction = omega if omega is not None else (Fraction(0),) * len(b)
        return cls(tuple(direction), tuple(a), b)

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def targets(self) -> tuple[complex, ...]:
        return tuple(bi / ai for ai, bi in zip(self.a, self.b))

    def min_separation(self) -> float:
        pts = self.targets
        gaps = [abs(p - q) for i, p in enumerate(pts) for q in pts[i + 1 :]]
        return min(gaps, default=math.inf)

    def with_direction(self, omega: Sequence[Fraction | int | str]) -> "LineFamily":
        return LineFamily(as_fractions(omega), self.a, self.b)

    def scales(self, t: float) -> np.ndarray:
        """``t**omega_i`` computed as ``exp(omega_i * ln t)``."""
        if not t > 0:
            raise ValueError(f"t must be positive, got {t}")
        log_t = math.log(t)
        return np.array([math.exp(float(w) * log_t) for w in self.omega])

    def point(self, t: float, s: complex) -> np.ndarray:
        a = np.asarray(self.a)
        b = np.asarray(self.b)
        return self.scales(t) * (a * s - b)

    def parameter_of(self, x: Sequence[complex]) -> complex:
        """Recover ``s`` from a point on the line at ``t = 1``."""
        values = [(complex(xi) + bi) / ai for xi, ai, bi in zip(x, self.a, self.b)]
        return complex(sum(values) / len(values))
