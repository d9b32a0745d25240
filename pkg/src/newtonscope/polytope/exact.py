from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import sympy

IntVector = tuple[int, ...]


def dot(u: Sequence[int | Fraction], v: Sequence[int | Fraction]) -> Fraction:
    return sum((Fraction(a) * Fraction(b) for a, b in zip(u, v)), Fraction(0))


def _rational(x: int | Fraction) -> sympy.Rational:
    q = Fraction(x)
    return sympy.Rational(q.numerator, q.denominator)


def _matrix(rows: Sequence[Sequence[int | Fraction]], width: int) -> sympy.Matrix:
    if not rows:
        return sympy.zeros(0, width)
    return sympy.Matrix([[_rational(x) for x in row] for row in rows])


def rank(rows: Sequence[Sequence[int | Fraction]]) -> int:
    if not rows:
        return 0
    return int(_matrix(rows, len(rows[0])).rank())


def differences(points: Sequence[Sequence[int]]) -> list[IntVector]:
    base = points[0]
    return [tuple(int(a) - int(b) for a, b in zip(p, base)) for p in points[1:]]


def affine_rank(points: Sequence[Sequence[int]]) -> int:
    """Dimension of the affine hull; -1 for no points."""
    if not points:
        return -1
    return rank(differences(points))


def primitive(vector: Iterable[int | Fraction | sympy.Rational]) -> IntVector:
    """Smallest integer vector with the direction of ``vector``."""
    values = [Fraction(str(x)) if isinstance(x, sympy.Basic) else Fraction(x) for x in vector]
    scale = math.lcm(*(v.denominator for v in values)) if values else 1
    ints = [int(v * scale) for v in values]
    g = math.gcd(*ints) if ints else 0
    return tuple(x // g for x in ints) if g else tuple(ints)


def nullspace(rows: Sequence[Sequence[int | Fraction]], width: int) -> list[IntVector]:
    """Integer basis of ``{x : rows @ x = 0}``."""
    if not rows:
        return [tuple(int(i == j) for j in range(width)) for i in range(width)]
    return [primitive(list(col)) for col in _matrix(rows, width).nullspace()]


def pivot_columns(rows: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Columns of a maximal independent set, leftmost first."""
    if not rows:
        return ()
    _, pivots = _matrix(rows, len(rows[0])).rref()
    return tuple(int(p) for p in pivots)


def solve(matrix: Sequence[Sequence[int | Fraction]], rhs: Sequence[int | Fraction]) -> list[Fraction]:
    """Exact solution of a square nonsingular system."""
    solution = _matrix(matrix, len(matrix)).LUsolve(_matrix([[x] for x in rhs], 1))
    return [Fraction(str(x)) for x in solution]


def inverse(matrix: Sequence[Sequence[int | Fraction]]) -> list[list[Fraction]]:
    inv = _matrix(matrix, len(matrix)).inv()
    return [[Fraction(str(inv[i, j])) for j in range(inv.cols)] for i in range(inv.rows)]
