from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from ..poly.compiled import CompiledSystem


class Homotopy(ABC):
    """Square family ``H(z, lam) = 0`` tracked from ``lam = 0`` to ``lam = 1``.

    Subclasses provide values and both partial derivatives; tracking only ever
    talks to this interface.
    """

    size: int

    @abstractmethod
    def evaluate(self, z: np.ndarray, lam: float) -> np.ndarray: ...

    @abstractmethod
    def jacobian(self, z: np.ndarray, lam: float) -> np.ndarray:
        """Partial derivative in ``z``, shape ``(size, size)``."""

    @abstractmethod
    def derivative(self, z: np.ndarray, lam: float) -> np.ndarray:
        """Partial derivative in ``lam``, shape ``(size,)``."""

    def residual(self, z: np.ndarray, lam: float) -> float:
        values = self.evaluate(z, lam)
        return float(np.max(np.abs(values))) if values.size else 0.0

    def monitored_norm(self, z: np.ndarray) -> float:
        return float(np.max(np.abs(z))) if z.size else 0.0

    def is_stationary(self) -> bool:
        return False

    def at(self, lam: float) -> "FrozenHomotopy":
        return FrozenHomotopy(self, lam)


@dataclass(frozen=True)
class FrozenHomotopy:
    """``H(., lam)`` as a plain square system for Newton's method."""

    homotopy: Homotopy
    lam: float

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        return self.homotopy.evaluate(z, self.lam)

    def jacobian(self, z: np.ndarray) -> np.ndarray:
        return self.homotopy.jacobian(z, self.lam)

    def residual(self, z: np.ndarray) -> float:
        return self.homotopy.residual(z, self.lam)


class StraightLineHomotopy(Homotopy):
    """``H = gamma * (1 - lam) * G + lam * F`` with start ``G`` and target ``F``."""

    def __init__(self, start: CompiledSystem, target: CompiledSystem, gamma: complex):
        if start.n != target.n or start.m != target.m:
            raise ValueError(
                f"start is {start.m}x{start.n}, target is {target.m}x{target.n}; shapes must agree"
            )
        if target.m != target.n:
            raise ValueError(f"homotopy needs a square system, got {target.m}x{target.n}")
        self.start = start
        self.target = target
        self.gamma = complex(gamma)
        self.size = target.n

    def evaluate(self, z: np.ndarray, lam: float) -> np.ndarray:
        return self.gamma * (1 - lam) * self.start.evaluate(z) + lam * self.target.evaluate(z)

    def jacobian(self, z: np.ndarray, lam: float) -> np.ndarray:
        return self.gamma * (1 - lam) * self.start.jacobian(z) + lam * self.target.jacobian(z)

    def derivative(self, z: np.ndarray, lam: float) -> np.ndarray:
        return self.target.evaluate(z) - self.gamma * self.start.evaluate(z)

    def is_stationary(self) -> bool:
        return self.start.same_as(self.target)
