from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .types import PolySystem


def monomials_and_gradients(
    z: np.ndarray, exponents: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Monomials ``z**E[t]`` and their gradients ``d/dz_k``, shapes ``(T,)`` and ``(T, N)``."""
    powers = z[None, :] ** exponents
    monomials = powers.prod(axis=1)
    n = exponents.shape[1]
    if n == 0:
        return monomials, np.zeros((exponents.shape[0], 0), dtype=complex)
    lowered = exponents * z[None, :] ** np.maximum(exponents - 1, 0)
    # Row t, column k: product over j of powers[t, j], with factor k replaced by its derivative.
    stacked = np.broadcast_to(powers[:, None, :], (exponents.shape[0], n, n)).copy()
    diag = np.arange(n)
    stacked[:, diag, diag] = lowered
    return monomials, stacked.prod(axis=2)


def term_scales(z: np.ndarray, exponents: np.ndarray) -> np.ndarray:
    """``prod_k max(|z_k|, 1)**E[t, k]``: the size a monomial is measured against."""
    return (np.maximum(np.abs(z), 1.0)[None, :] ** exponents).prod(axis=1)


def relative_values(values: np.ndarray, sizes: np.ndarray) -> float:
    if not values.size:
        return 0.0
    return float(np.max(np.abs(values) / np.maximum(sizes, np.finfo(float).tiny)))


@dataclass(frozen=True, eq=False)
class CompiledSystem:
    """Dense array form of a polynomial system for repeated evaluation.

    All terms of all equations are stacked into one exponent matrix; an
    indicator matrix sums term values back into equations.
    """

    variables: tuple[str, ...]
    exponents: np.ndarray  # (T, N) int
    coefficients: np.ndarray  # (T,) complex
    rows: np.ndarray  # (m, T) indicator
    degrees: tuple[int, ...]

    @classmethod
    def from_system(cls, system: PolySystem) -> "CompiledSystem":
        exps: list[tuple[int, ...]] = []
        coeffs: list[complex] = []
        owners: list[int] = []
        for j, f in enumerate(system.polys):
            for alpha, c in f.terms.items():
                exps.append(alpha)
                coeffs.append(c)
                owners.append(j)
        m = len(system.polys)
        exponents = np.array(exps, dtype=np.int64).reshape(len(exps), system.n)
        rows = np.zeros((m, len(exps)), dtype=float)
        rows[owners, np.arange(len(exps))] = 1.0
        return cls(
            variables=system.variables,
            exponents=exponents,
            coefficients=np.array(coeffs, dtype=complex),
            rows=rows,
            degrees=system.degrees,
        )

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def m(self) -> int:
        return self.rows.shape[0]

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        powers = np.asarray(z, dtype=complex)[None, :] ** self.exponents
        return self.rows @ (self.coefficients * powers.prod(axis=1))

    def jacobian(self, z: np.ndarray) -> np.ndarray:
        return self.evaluate_and_jacobian(z)[1]

    def evaluate_and_jacobian(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        monomials, grads = monomials_and_gradients(np.asarray(z, dtype=complex), self.exponents)
        values = self.rows @ (self.coefficients * monomials)
        jac = self.rows @ (self.coefficients[:, None] * grads)
        return values, jac

    def residual(self, z: np.ndarray) -> float:
        values = self.evaluate(z)
        return float(np.max(np.abs(values))) if values.size else 0.0

    def relative_residual(self, z: np.ndarray) -> float:
        """Largest ``|f_j(z)| / sum_t |c_t| prod_k max(|z_k|, 1)**alpha_tk`` over equations.

        Points where every term of an equation vanishes (on a coordinate
        hyperplane) still get a small residual.
        """
        z = np.asarray(z, dtype=complex)
        sizes = self.rows @ (np.abs(self.coefficients) * term_scales(z, self.exponents))
        return relative_values(self.evaluate(z), sizes)

    def same_as(self, other: "CompiledSystem") -> bool:
        return (
            self.variables == other.variables
            and self.exponents.shape == other.exponents.shape
            and np.array_equal(self.exponents, other.exponents)
            and np.array_equal(self.coefficients, other.coefficients)
            and np.array_equal(self.rows, other.rows)
        )
