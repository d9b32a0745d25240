from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np
import numpy.polynomial.polynomial as npoly
import sympy

from .types import DimensionMismatchError, Exponent, LineFamily, PolySystem, Polynomial

LINE_VARIABLE = "s"
HOMOGENIZING_VARIABLE = "h"


class NonUnimodularError(ValueError):
    """A monomial map matrix is not unimodular or has negative entries."""


def _check_point(f: Polynomial, point: Sequence[complex]) -> None:
    if len(point) != f.n:
        raise DimensionMismatchError(f"point has {len(point)} coordinates, expected {f.n}")


def evaluate(f: Polynomial, point: Sequence[complex]) -> complex:
    """Value of ``f`` at ``point``; real and imaginary parts are summed with ``fsum``."""
    _check_point(f, point)
    values = [complex(x) for x in point]
    re_parts: list[float] = []
    im_parts: list[float] = []
    for alpha, c in f.terms.items():
        term = c
        for x, a in zip(values, alpha):
            if a:
                term *= x**a
        re_parts.append(term.real)
        im_parts.append(term.imag)
    return complex(math.fsum(re_parts), math.fsum(im_parts))


def evaluate_system(system: PolySystem, point: Sequence[complex]) -> np.ndarray:
    return np.array([evaluate(f, point) for f in system.polys], dtype=complex)


def support(f: Polynomial) -> frozenset[Exponent]:
    return frozenset(f.terms)


def univariate_coefficients(f: Polynomial) -> np.ndarray:
    """Ascending coefficient array of a polynomial in one variable."""
    if f.n != 1:
        raise DimensionMismatchError(f"expected a univariate polynomial, got {f.n} variables")
    coeffs = np.zeros(f.degree + 1, dtype=complex)
    for (k,), c in f.terms.items():
        coeffs[k] = c
    return coeffs


def _from_coefficients(coeffs: np.ndarray, name: str = LINE_VARIABLE) -> Polynomial:
    return Polynomial((name,), {(k,): complex(c) for k, c in enumerate(coeffs) if c != 0})


def _restrict(f: Polynomial, factors: Sequence[np.ndarray]) -> Polynomial:
    total = np.zeros(f.degree + 1, dtype=complex)
    for alpha, c in f.terms.items():
        term = np.array([c], dtype=complex)
        for factor, a in zip(factors, alpha):
            if a:
                term = npoly.polymul(term, npoly.polypow(factor, a))
        total[: len(term)] += term
    return _from_coefficients(total)


def restrict_to_line(f: Polynomial, line: LineFamily, t: float) -> Polynomial:
    """Substitute ``x_i = t**omega_i * (a_i s - b_i)``; the result is a polynomial in ``s``."""
    if line.n != f.n:
        raise DimensionMismatchError(f"line family has {line.n} coordinates, expected {f.n}")
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    log_t = math.log(t)
    factors = [np.array([-b, a], dtype=complex) for a, b in zip(line.a, line.b)]
    # t**<omega, alpha> is taken in one exponential per term.
    total = np.zeros(f.degree + 1, dtype=complex)
    for alpha, c in f.terms.items():
        weight = sum((w * a for w, a in zip(line.omega, alpha)), Fraction(0))
        term = np.array([c * math.exp(float(weight) * log_t)], dtype=complex)
        for factor, a in zip(factors, alpha):
            if a:
                term = npoly.polymul(term, npoly.polypow(factor, a))
        total[: len(term)] += term
    return _from_coefficients(total)


def restrict_to_affine_line(
    f: Polynomial, base: Sequence[complex], direction: Sequence[complex]
) -> Polynomial:
    """Substitute ``x = base + s * direction``."""
    _check_point(f, base)
    _check_point(f, direction)
    factors = [np.array([p, v], dtype=complex) for p, v in zip(base, direction)]
    return _restrict(f, factors)


def check_unimodular(matrix: Sequence[Sequence[int]] | np.ndarray) -> np.ndarray:
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonUnimodularError(f"monomial map must be a square matrix, got shape {a.shape}")
    if not np.issubdtype(a.dtype, np.integer):
        if not np.all(np.asarray(a, dtype=float) == np.round(np.asarray(a, dtype=float))):
            raise NonUnimodularError("monomial map entries must be integers")
    a = np.asarray(np.round(np.asarray(a, dtype=float)), dtype=np.int64)
    if np.any(a < 0):
        raise NonUnimodularError("monomial map entries must be nonnegative")
    det = sympy.Matrix(a.tolist()).det()
    if abs(int(det)) != 1:
        raise NonUnimodularError(f"monomial map has determinant {det}, expected +-1")
    return a


def apply_monomial_map(f: Polynomial, matrix: Sequence[Sequence[int]] | np.ndarray) -> Polynomial:
    """Substitute ``x_i -> prod_j x_j**A[i, j]``; exponent ``alpha`` becomes ``A.T @ alpha``."""
    a = check_unimodular(matrix)
    if a.shape[0] != f.n:
        raise DimensionMismatchError(f"map is {a.shape[0]}x{a.shape[0]}, polynomial has {f.n} variables")
    terms: dict[Exponent, complex] = {}
    for alpha, c in f.terms.items():
        image = tuple(int(v) for v in a.T @ np.asarray(alpha, dtype=np.int64))
        terms[image] = c
    return Polynomial(f.variables, terms)


def apply_monomial_map_system(
    system: PolySystem, matrix: Sequence[Sequence[int]] | np.ndarray
) -> PolySystem:
    return PolySystem(system.variables, tuple(apply_monomial_map(f, matrix) for f in system.polys))


def homogenize(f: Polynomial, name: str = HOMOGENIZING_VARIABLE) -> Polynomial:
    """Append a variable and pad every term to total degree ``deg f``."""
    extra = name
    suffix = 0
    while extra in f.variables:
        extra = f"{name}{suffix}"
        suffix += 1
    d = f.degree
    terms = {alpha + (d - sum(alpha),): c for alpha, c in f.terms.items()}
    return Polynomial(f.variables + (extra,), terms)


def homogenized_support(f: Polynomial) -> list[Exponent]:
    d = f.degree
    return [alpha + (d - sum(alpha),) for alpha in f.terms]


def differentiate(f: Polynomial, index: int) -> Polynomial:
    if not 0 <= index < f.n:
        raise DimensionMismatchError(f"variable index {index} out of range for {f.n} variables")
    terms: dict[Exponent, complex] = {}
    for alpha, c in f.terms.items():
        power = alpha[index]
        if power:
            lowered = alpha[:index] + (power - 1,) + alpha[index + 1 :]
            terms[lowered] = c * power
    return Polynomial(f.variables, terms)


def jacobian(system: PolySystem) -> list[list[Polynomial]]:
    """Entry ``(i, j)`` is the derivative of equation ``i`` in variable ``j``."""
    return [[differentiate(f, j) for j in range(system.n)] for f in system.polys]


def facial_form(f: Polynomial, omega: Sequence[Fraction]) -> Polynomial:
    """Terms of ``f`` maximising ``<omega, alpha>``."""
    if len(omega) != f.n:
        raise DimensionMismatchError(f"direction has {len(omega)} entries, expected {f.n}")
    weights = {
        alpha: sum((Fraction(w) * a for w, a in zip(omega, alpha)), Fraction(0))
        for alpha in f.terms
    }
    if not weights:
        return f
    top = max(weights.values())
    return Polynomial(f.variables, {a: c for a, c in f.terms.items() if weights[a] == top})


def common_monomial(f: Polynomial) -> Exponent:
    if f.is_zero():
        return (0,) * f.n
    return tuple(min(alpha[j] for alpha in f.terms) for j in range(f.n))


def divide_monomial(f: Polynomial, m: Sequence[int]) -> Polynomial:
    terms = {}
    for alpha, c in f.terms.items():
        lowered = tuple(a - k for a, k in zip(alpha, m))
        if any(v < 0 for v in lowered):
            raise ValueError(f"monomial {tuple(m)} does not divide term {alpha}")
        terms[lowered] = c
    return Polynomial(f.variables, terms)
