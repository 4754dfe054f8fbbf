from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from persfl_simulator.system.exceptions import DimensionMismatchError


@dataclass(frozen=True, eq=False)
class WeightedSample:
    features: np.ndarray
    label: float
    weight: float = 1.0

    def __post_init__(self):
        if not self.weight > 0:
            raise ValueError(f"Sample weight must be positive, got {self.weight}")


@dataclass(frozen=True)
class TreeNode:
    """Node of a fitted regression tree; a leaf when it has no children."""
    value: float
    split_feature: Optional[int] = None
    split_threshold: Optional[float] = None
    left: Optional["TreeNode"] = None
    right: Optional["TreeNode"] = None
    n_features: Optional[int] = None

    def __post_init__(self):
        has_split = self.split_feature is not None
        if has_split != (self.left is not None and self.right is not None):
            raise ValueError("An internal node needs a split and two children; a leaf needs neither")

    @property
    def is_leaf(self) -> bool:
        return self.split_feature is None

    def predict(self, features: np.ndarray) -> Union[float, np.ndarray]:
        features = np.asarray(features, dtype=float)
        if self.n_features is not None and features.shape[-1] != self.n_features:
            raise DimensionMismatchError(
                f"Feature shape {features.shape} does not match the {self.n_features} features the tree was fit on")
        if features.ndim == 1:
            return self._predict_one(features)
        predictions = np.empty(features.shape[0])
        self._route(features, np.arange(features.shape[0]), predictions)
        return predictions

    def _predict_one(self, x: np.ndarray) -> float:
        node = self
        while not node.is_leaf:
            node = node.left if x[node.split_feature] < node.split_threshold else node.right
        return node.value

    def _route(self, features: np.ndarray, rows: np.ndarray, out: np.ndarray):
        if self.is_leaf:
            out[rows] = self.value
            return
        goes_left = features[rows, self.split_feature] < self.split_threshold
        self.left._route(features, rows[goes_left], out)
        self.right._route(features, rows[~goes_left], out)
