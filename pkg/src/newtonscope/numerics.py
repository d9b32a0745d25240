"""Dense complex linear algebra and seeded randomness."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np
import scipy.linalg

from .poly.types import Polynomial

# Relative pivot magnitude below which a matrix is treated as singular.
PIVOT_TOLERANCE = 1e-13
# Singular values below this fraction of the largest count as zero.
RANK_TOLERANCE = 1e-8
# Minimum angle (radians) between the gamma constant and the real axis.
GAMMA_MARGIN = 0.1


class SingularMatrixError(ArithmeticError):
    """LU found a pivot below ``PIVOT_TOLERANCE * ||A||_inf``."""


def _inf_norm(a: np.ndarray) -> float:
    return float(np.abs(a).sum(axis=1).max()) if a.size else 0.0


def lu_solve(a: np.ndarray, rhs: np.ndarray, *, qr_fallback: bool = True) -> np.ndarray:
    """Solve ``a @ x = rhs`` by partial-pivot LU.

    On a pivot failure the system is retried once with QR before giving up.
    """
    a = np.asarray(a, dtype=complex)
    rhs = np.asarray(rhs, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"lu_solve needs a square matrix, got shape {a.shape}")
    if a.shape[0] != rhs.shape[0]:
        raise ValueError(f"right-hand side has {rhs.shape[0]} rows, matrix has {a.shape[0]}")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(rhs))):
        raise SingularMatrixError("non-finite entries in linear system")
    if a.shape[0] == 0:
        return np.zeros_like(rhs)
    norm = _inf_norm(a)
    threshold = PIVOT_TOLERANCE * norm
    if norm == 0:
        raise SingularMatrixError("zero matrix")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    if np.abs(np.diag(lu)).min() >= threshold:
        return scipy.linalg.lu_solve((lu, piv), rhs, check_finite=False)
    if qr_fallback:
        q, r = scipy.linalg.qr(a, check_finite=False)
        if np.abs(np.diag(r)).min() >= threshold:
            return scipy.linalg.solve_triangular(r, q.conj().T @ rhs, check_finite=False)
    raise SingularMatrixError(
        f"pivot below {threshold:.3g} in {a.shape[0]}x{a.shape[0]} system"
    )


def scaled_solve(a: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """``lu_solve`` after equilibrating rows and columns by their largest entries."""
    a = np.asarray(a, dtype=complex)
    if a.size == 0:
        return lu_solve(a, rhs)
    row = np.abs(a).max(axis=1)
    row[row == 0] = 1.0
    scaled = a / row[:, None]
    col = np.abs(scaled).max(axis=0)
    col[col == 0] = 1.0
    y = lu_solve(scaled / col[None, :], np.asarray(rhs, dtype=complex) / row)
    return y / col


def numeric_rank(a: np.ndarray, rel_tol: float = RANK_TOLERANCE) -> int:
    a = np.asarray(a, dtype=complex)
    if a.size == 0:
        return 0
    sigma = scipy.linalg.svdvals(a)
    if sigma[0] == 0:
        return 0
    return int(np.sum(sigma > rel_tol * sigma[0]))


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Generator for ``seed`` and an optional stream id, independent across streams."""
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(stream)))


def random_unit_complex(rng: np.random.Generator) -> complex:
    return complex(np.exp(2j * math.pi * rng.random()))


def random_gamma(rng: np.random.Generator) -> complex:
    """Unit-modulus constant whose argument stays ``GAMMA_MARGIN`` away from 0 and pi."""
    angle = rng.uniform(GAMMA_MARGIN, math.pi - GAMMA_MARGIN)
    if rng.random() < 0.5:
        angle += math.pi
    return complex(np.exp(1j * angle))


def random_complex_array(shape: int | tuple[int, ...], rng: np.random.Generator) -> np.ndarray:
    """Entries with uniform phase and magnitude in [0.5, 1.5]."""
    magnitude = rng.uniform(0.5, 1.5, size=shape)
    phase = np.exp(2j * math.pi * rng.random(size=shape))
    return magnitude * phase


@dataclass(frozen=True, eq=False)
class LinearSlice:
    """Affine equations ``A[:, :n] @ x + A[:, n] = 0`` cutting out a linear space."""

    coefficients: np.ndarray

    def __post_init__(self) -> None:
        coeffs = np.array(self.coefficients, dtype=complex)
        if coeffs.ndim != 2 or coeffs.shape[1] < 1:
            raise ValueError(f"slice coefficients must be k x (n+1), got shape {coeffs.shape}")
        k, width = coeffs.shape
        if k > width - 1:
            raise ValueError(f"slice has {k} equations in only {width - 1} unknowns")
        if k and numeric_rank(coeffs[:, :-1]) < k:
            raise ValueError("slice equations are linearly dependent")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def k(self) -> int:
        return self.coefficients.shape[0]

    @property
    def n(self) -> int:
        return self.coefficients.shape[1] - 1

    def evaluate(self, x: Sequence[complex] | np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        return self.coefficients[:, :-1] @ x + self.coefficients[:, -1]

    def parametrize(self) -> tuple[np.ndarray, np.ndarray]:
        """A point on the slice and a basis (columns) of its direction space."""
        a = self.coefficients[:, :-1]
        if self.k == 0:
            return np.zeros(self.n, dtype=complex), np.eye(self.n, dtype=complex)
        base = scipy.linalg.lstsq(a, -self.coefficients[:, -1])[0]
        return np.asarray(base, dtype=complex), scipy.linalg.null_space(a)

    def pullback(self, variables: Sequence[str], columns: Sequence[int]) -> list[Polynomial]:
        """Slice equations as polynomials over ``variables``, image coordinate ``j`` at ``columns[j]``."""
        if len(columns) != self.n:
            raise ValueError(f"{len(columns)} columns for a slice in {self.n} coordinates")
        polys = []
        for row in self.coefficients:
            coeffs = [0j] * len(variables)
            for j, col in enumerate(columns):
                coeffs[col] = row[j]
            polys.append(Polynomial.linear(coeffs, row[-1], variables))
        return polys

    def to_json(self) -> list[list[list[float]]]:
        return [[[float(c.real), float(c.imag)] for c in row] for row in self.coefficients]

    @classmethod
    def from_json(cls, payload: Any, n: int | None = None) -> "LinearSlice":
        rows = [[complex(re, im) for re, im in row] for row in payload]
        if not rows:
            width = (n if n is not None else 0) + 1
            return cls(np.zeros((0, width), dtype=complex))
        return cls(np.array(rows, dtype=complex))


def random_slice(n: int, k: int, rng: np.random.Generator) -> LinearSlice:
    """``k`` generic affine equations in ``n`` unknowns."""
    if not 0 < k <= n:
        raise ValueError(f"random_slice needs 0 < k <= n, got k={k}, n={n}")
    return LinearSlice(random_complex_array((k, n + 1), rng))


def empty_slice(n: int) -> LinearSlice:
    return LinearSlice(np.zeros((0, n + 1), dtype=complex))
