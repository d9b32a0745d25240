from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..poly.ops import (
    common_monomial,
    divide_monomial,
    facial_form,
    restrict_to_affine_line,
    univariate_coefficients,
)
from ..poly.types import DimensionMismatchError, LineFamily, Polynomial, as_fractions
from .exact import dot

# Distance within which tau counts as a root of the facial restriction.
ROOT_TOLERANCE = 1e-6


class EmptyComplementError(ValueError):
    pass


class NotAFacialRootError(ValueError):
    pass


def _weights(f: Polynomial, omega: Sequence[Fraction | int | str]) -> dict[tuple[int, ...], Fraction]:
    w = as_fractions(omega)
    if len(w) != f.n:
        raise DimensionMismatchError(f"direction has {len(w)} entries, expected {f.n}")
    return {alpha: dot(alpha, w) for alpha in f.terms}


def face_complement(f: Polynomial, omega: Sequence[Fraction | int | str]) -> list[tuple[int, ...]]:
    """Support points not on the face exposed by ``omega``."""
    weights = _weights(f, omega)
    top = max(weights.values(), default=Fraction(0))
    return [alpha for alpha, v in weights.items() if v < top]


def d_omega(f: Polynomial, omega: Sequence[Fraction | int | str]) -> Fraction:
    """Gap between the support function and the next-best support value."""
    weights = _weights(f, omega)
    top = max(weights.values(), default=Fraction(0))
    gaps = [top - v for v in weights.values() if v < top]
    if not gaps:
        raise EmptyComplementError(f"direction {list(map(str, omega))} exposes the whole support")
    return min(gaps)


def facial_restriction(
    f: Polynomial, omega: Sequence[Fraction | int | str], family: LineFamily
) -> np.ndarray:
    """Coefficients (ascending) of ``g_omega(a s - b)`` with ``g_omega = f_omega / x^m``."""
    face = facial_form(f, as_fractions(omega))
    g = divide_monomial(face, common_monomial(face))
    restricted = restrict_to_affine_line(g, [-b for b in family.b], family.a)
    return univariate_coefficients(restricted)


def convergence_bound(
    f: Polynomial,
    omega: Sequence[Fraction | int | str],
    family: LineFamily,
    tau: complex,
    beta: int,
    t: float,
) -> float:
    """Upper bound on ``|p(t) - tau|**beta`` for a root ``p(t)`` converging to the facial root ``tau``."""
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    if beta < 1:
        raise ValueError(f"multiplicity must be positive, got {beta}")
    gap = d_omega(f, omega)
    complement = face_complement(f, omega)
    coeffs = facial_restriction(f, omega, family)
    nonzero = np.flatnonzero(np.abs(coeffs) > 0)
    if not nonzero.size:
        raise NotAFacialRootError("facial form vanishes identically on the line")
    k = complex(coeffs[nonzero[-1]])
    roots = np.roots(coeffs[: nonzero[-1] + 1][::-1]) if nonzero[-1] > 0 else np.array([])
    if not roots.size or np.min(np.abs(roots - tau)) > ROOT_TOLERANCE * (1 + abs(tau)):
        raise NotAFacialRootError(f"{tau} is not a root of the facial form on the line")
    others = [r for r in roots if abs(r - tau) > ROOT_TOLERANCE * (1 + abs(tau))]

    a_abs = [abs(x) for x in family.a]
    a_min = min([1.0] + a_abs)
    a_max = max([1.0] + a_abs)
    targets = family.targets
    gamma = min([a_min] + [abs(tau - rho) / 2 for rho in list(targets) + others])
    big_gamma = max([2 / a_max] + [abs(tau - rho) for rho in targets])
    c = max(abs(x) for x in f.terms.values()) / abs(k)
    scale = (a_max / a_min) * (1 + big_gamma / gamma)
    return math.exp(-float(gap) * math.log(t)) * c * len(complement) * scale**f.degree
