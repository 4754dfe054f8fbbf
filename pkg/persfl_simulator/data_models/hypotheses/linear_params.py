from dataclasses import dataclass
from typing import Union

import numpy as np

from persfl_simulator.system.exceptions import DimensionMismatchError, DivergenceError


@dataclass(frozen=True, eq=False)
class LinearParams:
    """Weight vector w of the homogeneous linear hypothesis h(x) = w^T x."""
    weights: np.ndarray

    def __post_init__(self):
        weights = np.array(self.weights, dtype=float)
        if weights.ndim != 1:
            raise DimensionMismatchError(f"Weights must be a vector, got shape {weights.shape}")
        if not np.all(np.isfinite(weights)):
            raise DivergenceError(f"Weights must be finite, got {weights}")
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def zeros(cls, dim: int) -> "LinearParams":
        return cls(np.zeros(dim))

    @property
    def dim(self) -> int:
        return self.weights.shape[0]

    def predict(self, features: np.ndarray) -> Union[float, np.ndarray]:
        features = np.asarray(features, dtype=float)
        if features.shape[-1] != self.dim:
            raise DimensionMismatchError(
                f"Feature shape {features.shape} does not match parameter dimension {self.dim}")
        if features.ndim == 1:
            return float(features @ self.weights)
        return features @ self.weights

    def __eq__(self, other):
        if not isinstance(other, LinearParams):
            return NotImplemented
        return np.array_equal(self.weights, other.weights)

    __hash__ = None
