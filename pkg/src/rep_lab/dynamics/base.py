from __future__ import annotations

import enum
import math
from abc import ABC, abstractmethod

import numpy as np


class Coordinates(str, enum.Enum):
    LAMBDA = "lambda"
    U = "u"
    MATRIX = "matrix"


class CoordinateSystem(ABC):
    """A flat-vector view of the spectral system for the integrators.

    Implementations own the packing of their state into a 1-D array and know
    how to read eigenvalues and density back out of it.
    """

    coords: Coordinates

    @property
    @abstractmethod
    def n(self) -> int:  # pragma: no cover - interface
        raise NotImplementedError

    @abstractmethod
    def initial_vector(self) -> np.ndarray:  # pragma: no cover - interface
        raise NotImplementedError

    @abstractmethod
    def rhs(self, t: float, y: np.ndarray) -> np.ndarray:  # pragma: no cover - interface
        raise NotImplementedError

    @abstractmethod
    def lambdas(self, y: np.ndarray) -> np.ndarray:  # pragma: no cover - interface
        raise NotImplementedError

    @abstractmethod
    def density(self, y: np.ndarray) -> float:  # pragma: no cover - interface
        raise NotImplementedError

    def max_step(self, y: np.ndarray) -> float:
        return math.inf

    def residual(self, y: np.ndarray) -> float:
        """Conservation diagnostic for a single state; NaN when none applies."""
        return math.nan

    def escape_magnitude(self, y: np.ndarray) -> float:
        return float(np.max(np.abs(self.lambdas(y))))
