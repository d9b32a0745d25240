"""Sparse multivariate polynomials over the complex numbers."""

from .compiled import CompiledSystem
from .elimination import eliminate
from .ops import (
    NonUnimodularError,
    apply_monomial_map,
    apply_monomial_map_system,
    differentiate,
    evaluate,
    evaluate_system,
    homogenize,
    homogenized_support,
    jacobian,
    restrict_to_affine_line,
    restrict_to_line,
    support,
    univariate_coefficients,
)
from .parser import (
    CoefficientCancellationWarning,
    NegativeExponentError,
    PolynomialSyntaxError,
    UnknownVariableError,
    parse_polynomial,
    to_string,
)
from .types import DimensionMismatchError, LineFamily, PolySystem, Polynomial

__all__ = [
    "CoefficientCancellationWarning",
    "CompiledSystem",
    "DimensionMismatchError",
    "LineFamily",
    "NegativeExponentError",
    "NonUnimodularError",
    "PolySystem",
    "Polynomial",
    "PolynomialSyntaxError",
    "UnknownVariableError",
    "apply_monomial_map",
    "apply_monomial_map_system",
    "differentiate",
    "eliminate",
    "evaluate",
    "evaluate_system",
    "homogenize",
    "homogenized_support",
    "jacobian",
    "parse_polynomial",
    "restrict_to_affine_line",
    "restrict_to_line",
    "support",
    "to_string",
    "univariate_coefficients",
]
