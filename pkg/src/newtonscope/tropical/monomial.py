from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np
import sympy

from ..poly.ops import check_unimodular
from ..poly.types import DimensionMismatchError, as_fractions

ELEMENTARY_ENTRIES = (0, 1, 2)


def random_unimodular_map(n: int, rng: np.random.Generator) -> np.ndarray:
    """Product of ``2n`` elementary matrices ``I + c E_ij``, alternately upper and lower triangular.

    Entries stay nonnegative and the determinant is 1.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    result = np.eye(n, dtype=np.int64)
    if n == 1:
        return result
    for k in range(2 * n):
        i, j = sorted(int(x) for x in rng.choice(n, size=2, replace=False))
        if k % 2:
            i, j = j, i
        factor = np.eye(n, dtype=np.int64)
        factor[i, j] = int(rng.choice(ELEMENTARY_ENTRIES))
        result = result @ factor
    return result


def inverse_map(matrix: Sequence[Sequence[int]] | np.ndarray) -> np.ndarray:
    """Exact integer inverse of a unimodular matrix."""
    a = check_unimodular(matrix)
    inv = sympy.Matrix(a.tolist()).inv()
    return np.array(inv.tolist(), dtype=np.int64)


def transform_direction(
    matrix: Sequence[Sequence[int]] | np.ndarray, omega: Sequence[Fraction | int | str]
) -> tuple[Fraction, ...]:
    """``A^-1 omega`` in exact rational arithmetic."""
    inv = inverse_map(matrix)
    w = as_fractions(omega)
    if len(w) != inv.shape[0]:
        raise DimensionMismatchError(f"direction has {len(w)} entries, map is {inv.shape[0]}x{inv.shape[0]}")
    return tuple(sum((int(inv[i, j]) * w[j] for j in range(len(w))), Fraction(0)) for i in range(len(w)))
