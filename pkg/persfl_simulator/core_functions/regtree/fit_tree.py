"""Greedy CART regression tree with per-sample weights.

Splits maximize the reduction of weighted squared error; thresholds sit at midpoints between
consecutive distinct feature values (at the upper value when the two are adjacent floats), and a sample
goes left when `x[feature] < threshold`.
Among splits of (numerically) equal gain the lowest feature index wins, then the lowest threshold.
"""
import logging
from dataclasses import replace
from typing import Iterable, NamedTuple, Optional

import numpy as np

from persfl_simulator.data_models.hypotheses import TreeNode, WeightedSample
from persfl_simulator.system.constants import SPLIT_GAIN_RELATIVE_TOLERANCE
from persfl_simulator.system.exceptions import ConfigurationError, DimensionMismatchError

logger = logging.getLogger(__name__)


class Split(NamedTuple):
    feature: int
    threshold: float
    gain: float


def weighted_mean(labels: np.ndarray, weights: np.ndarray) -> float:
    return float(np.sum(weights * labels) / np.sum(weights))


def find_best_split(features: np.ndarray,
                    labels: np.ndarray,
                    weights: np.ndarray,
                    min_leaf: int = 1) -> Optional[Split]:
    n_samples, n_features = features.shape
    if n_samples < 2 * min_leaf:
        return None

    # Centre labels on the node mean so the gain formula avoids cancellation
    centred = labels - weighted_mean(labels, weights)
    parent_sse = float(np.sum(weights * centred ** 2))
    if parent_sse <= 0:
        return None

    order = np.argsort(features, axis=0, kind="stable")
    sorted_x = np.take_along_axis(features, order, axis=0)
    sorted_w = weights[order]
    sorted_wy = sorted_w * centred[order]

    left_w = np.cumsum(sorted_w, axis=0)[:-1]
    left_wy = np.cumsum(sorted_wy, axis=0)[:-1]
    total_w = float(np.sum(weights))
    total_wy = float(np.sum(weights * centred))
    right_w = total_w - left_w
    right_wy = total_wy - left_wy

    # SSE reduction = sum_wy_L^2 / w_L + sum_wy_R^2 / w_R - sum_wy^2 / w
    gains = left_wy ** 2 / left_w + right_wy ** 2 / right_w - total_wy ** 2 / total_w

    left_counts = np.arange(1, n_samples)[:, np.newaxis]
    valid = (sorted_x[:-1] < sorted_x[1:]) & (left_counts >= min_leaf) & (n_samples - left_counts >= min_leaf)
    if not np.any(valid):
        return None
    gains = np.where(valid, gains, -np.inf)

    best_gain = float(np.max(gains))
    tolerance = SPLIT_GAIN_RELATIVE_TOLERANCE * parent_sse
    if best_gain <= tolerance:
        return None

    near_best = gains >= best_gain - tolerance
    feature = int(np.flatnonzero(near_best.any(axis=0))[0])
    position = int(np.flatnonzero(near_best[:, feature])[0])
    low, high = sorted_x[position, feature], sorted_x[position + 1, feature]
    threshold = 0.5 * (low + high)
    # adjacent floats: the midpoint rounds onto `low` and would send every sample right
    if threshold <= low:
        threshold = high
    return Split(feature=feature, threshold=float(threshold), gain=float(gains[position, feature]))


def _grow(features: np.ndarray,
          labels: np.ndarray,
          weights: np.ndarray,
          depth: int,
          max_depth: int,
          min_leaf: int) -> TreeNode:
    value = weighted_mean(labels, weights)
    if depth >= max_depth:
        return TreeNode(value=value)

    split = find_best_split(features, labels, weights, min_leaf)
    if split is None:
        return TreeNode(value=value)

    goes_left = features[:, split.feature] < split.threshold
    goes_right = ~goes_left
    return TreeNode(value=value,
                    split_feature=split.feature,
                    split_threshold=split.threshold,
                    left=_grow(features[goes_left], labels[goes_left], weights[goes_left],
                               depth + 1, max_depth, min_leaf),
                    right=_grow(features[goes_right], labels[goes_right], weights[goes_right],
                                depth + 1, max_depth, min_leaf))


def fit_tree_arrays(features: np.ndarray,
                    labels: np.ndarray,
                    weights: Optional[np.ndarray] = None,
                    max_depth: int = 3,
                    min_leaf: int = 1) -> TreeNode:
    features = np.asarray(features, dtype=float)
    if features.ndim == 1:
        features = features[:, np.newaxis]
    labels = np.asarray(labels, dtype=float)
    weights = np.ones(labels.shape[0]) if weights is None else np.asarray(weights, dtype=float)

    if labels.shape[0] == 0:
        raise ValueError("Cannot fit a tree to an empty sample set")
    if not features.shape[0] == labels.shape[0] == weights.shape[0]:
        raise DimensionMismatchError(
            f"Features {features.shape}, labels {labels.shape} and weights {weights.shape} disagree on sample count")
    if np.any(weights <= 0):
        raise ValueError("Sample weights must be positive")
    if max_depth < 0 or min_leaf < 1:
        raise ConfigurationError(f"Need max_depth >= 0 and min_leaf >= 1, got {max_depth} and {min_leaf}")

    root = _grow(features, labels, weights, depth=0, max_depth=max_depth, min_leaf=min_leaf)
    logger.trace(f"Fitted tree on {labels.shape[0]} samples with {features.shape[1]} features")
    return replace(root, n_features=features.shape[1])


def fit_tree(samples: Iterable[WeightedSample], max_depth: int, min_leaf: int = 1) -> TreeNode:
    samples = list(samples)
    if len(samples) == 0:
        raise ValueError("Cannot fit a tree to an empty sample set")
    features = np.vstack([np.atleast_1d(np.asarray(sample.features, dtype=float)) for sample in samples])
    labels = np.array([sample.label for sample in samples], dtype=float)
    weights = np.array([sample.weight for sample in samples], dtype=float)
    return fit_tree_arrays(features, labels, weights, max_depth=max_depth, min_leaf=min_leaf)
