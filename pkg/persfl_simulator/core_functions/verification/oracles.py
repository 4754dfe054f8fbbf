"""Brute-force reference computations the fast implementations are checked against."""
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from persfl_simulator.core_functions.linmodel import loss_gradient, squared_loss
from persfl_simulator.data_models.federation import LocalDataset
from persfl_simulator.data_models.hypotheses import LinearParams, TreeNode


def finite_difference_gradient(params: LinearParams, data: LocalDataset, step: float = 1e-5) -> np.ndarray:
    gradient = np.empty(params.dim)
    for index in range(params.dim):
        offset = np.zeros(params.dim)
        offset[index] = step
        forward = squared_loss(LinearParams(params.weights + offset), data)
        backward = squared_loss(LinearParams(params.weights - offset), data)
        gradient[index] = (forward - backward) / (2 * step)
    return gradient


def numeric_proximal_minimizer(anchor: LinearParams, data: LocalDataset, eta: float) -> LinearParams:
    """Minimize eta * L(w) + ||w - anchor||^2 with a generic quasi-Newton solver."""

    def objective(weights: np.ndarray) -> float:
        gap = weights - anchor.weights
        return eta * squared_loss(LinearParams(weights), data) + float(gap @ gap)

    def gradient(weights: np.ndarray) -> np.ndarray:
        return eta * loss_gradient(LinearParams(weights), data) + 2.0 * (weights - anchor.weights)

    result = minimize(objective, x0=np.array(anchor.weights), jac=gradient, method="BFGS",
                      options={"gtol": 1e-12, "maxiter": 10_000})
    return LinearParams(result.x)


def _weighted_sse(labels: np.ndarray, weights: np.ndarray) -> float:
    mean = np.sum(weights * labels) / np.sum(weights)
    return float(np.sum(weights * (labels - mean) ** 2))


def exhaustive_best_gain(features: np.ndarray,
                         labels: np.ndarray,
                         weights: np.ndarray,
                         min_leaf: int = 1) -> Optional[float]:
    """Largest weighted-SSE reduction over every admissible (feature, midpoint) split, by direct summation."""
    parent_sse = _weighted_sse(labels, weights)
    best = None
    for feature in range(features.shape[1]):
        values = np.unique(features[:, feature])
        for low, high in zip(values[:-1], values[1:]):
            threshold = 0.5 * (low + high)
            if threshold <= low:
                threshold = high
            left = features[:, feature] < threshold
            if left.sum() < min_leaf or (~left).sum() < min_leaf:
                continue
            gain = parent_sse - _weighted_sse(labels[left], weights[left]) - _weighted_sse(labels[~left], weights[~left])
            if best is None or gain > best:
                best = gain
    return best


def split_gain(features: np.ndarray, labels: np.ndarray, weights: np.ndarray, feature: int, threshold: float) -> float:
    left = features[:, feature] < threshold
    return (_weighted_sse(labels, weights)
            - _weighted_sse(labels[left], weights[left])
            - _weighted_sse(labels[~left], weights[~left]))


def greedy_splits_are_optimal(tree: TreeNode,
                              features: np.ndarray,
                              labels: np.ndarray,
                              weights: np.ndarray,
                              max_depth: int,
                              min_leaf: int = 1,
                              depth: int = 0,
                              tolerance: float = 1e-9) -> bool:
    """Walk the fitted tree and compare every node against exhaustive enumeration on the samples reaching it.

    A split node must attain the best gain; a leaf above max_depth must have no split with positive gain.
    """
    scale = max(1.0, _weighted_sse(labels, weights))
    best = exhaustive_best_gain(features, labels, weights, min_leaf) if depth < max_depth else None

    if tree.is_leaf:
        return best is None or best <= tolerance * scale

    if depth >= max_depth or best is None:
        return False
    gain = split_gain(features, labels, weights, tree.split_feature, tree.split_threshold)
    if gain < best - tolerance * scale:
        return False
    left = features[:, tree.split_feature] < tree.split_threshold
    return (greedy_splits_are_optimal(tree.left, features[left], labels[left], weights[left],
                                      max_depth, min_leaf, depth + 1, tolerance)
            and greedy_splits_are_optimal(tree.right, features[~left], labels[~left], weights[~left],
                                          max_depth, min_leaf, depth + 1, tolerance))
