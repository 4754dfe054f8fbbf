from typing import Union

import numpy as np
from scipy.linalg import cho_factor, cho_solve, lstsq

from persfl_simulator.data_models.federation import LocalDataset
from persfl_simulator.data_models.hypotheses import LinearParams
from persfl_simulator.system.exceptions import ConfigurationError, DimensionMismatchError


def _check_dims(params: LinearParams, data: LocalDataset):
    if not params.dim == data.dim:
        raise DimensionMismatchError(
            f"Parameter dimension {params.dim} does not match feature matrix shape {data.features.shape}")


def predict(params: LinearParams, features: np.ndarray) -> Union[float, np.ndarray]:
    return params.predict(features)


def squared_loss(params: LinearParams, data: LocalDataset) -> float:
    """(1/m) ||y - X w||^2"""
    _check_dims(params, data)
    residuals = data.labels - data.features @ params.weights
    return float(residuals @ residuals) / data.sample_size


def loss_gradient(params: LinearParams, data: LocalDataset) -> np.ndarray:
    """(-2/m) X^T (y - X w)"""
    _check_dims(params, data)
    residuals = data.labels - data.features @ params.weights
    return (-2.0 / data.sample_size) * (data.features.T @ residuals)


def proximal_least_squares(anchor: LinearParams, data: LocalDataset, eta: float) -> LinearParams:
    """argmin_w  eta * L(w) + ||w - anchor||^2, solved in closed form."""
    _check_dims(anchor, data)
    if not eta > 0:
        raise ConfigurationError(f"eta must be positive, got {eta}")
    scale = 2.0 * eta / data.sample_size
    # the +2I term keeps the system positive definite for any data
    normal_matrix = scale * (data.features.T @ data.features) + 2.0 * np.eye(data.dim)
    rhs = scale * (data.features.T @ data.labels) + 2.0 * anchor.weights
    return LinearParams(cho_solve(cho_factor(normal_matrix), rhs))


def ridge_least_squares(data: LocalDataset, penalty: float) -> LinearParams:
    """argmin_w  L(w) + penalty * ||w||^2"""
    if not penalty > 0:
        raise ConfigurationError(f"Ridge penalty must be positive, got {penalty}")
    normal_matrix = (data.features.T @ data.features) / data.sample_size + penalty * np.eye(data.dim)
    rhs = (data.features.T @ data.labels) / data.sample_size
    return LinearParams(cho_solve(cho_factor(normal_matrix), rhs))


def weighted_least_squares(features: np.ndarray, labels: np.ndarray, weights: np.ndarray) -> LinearParams:
    """Minimum-norm minimizer of sum_r weights_r (labels_r - w^T x_r)^2."""
    features = np.asarray(features, dtype=float)
    labels = np.asarray(labels, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if not features.shape[0] == labels.shape[0] == weights.shape[0]:
        raise DimensionMismatchError(
            f"Features {features.shape}, labels {labels.shape} and weights {weights.shape} disagree on sample count")
    if np.any(weights < 0):
        raise ValueError("Sample weights must be nonnegative")
    sqrt_weights = np.sqrt(weights)
    solution, _, _, _ = lstsq(sqrt_weights[:, np.newaxis] * features, sqrt_weights * labels,
                              lapack_driver="gelsd")
    return LinearParams(solution)


def min_norm_least_squares(data: LocalDataset) -> LinearParams:
    """Ordinary least squares; the minimum-norm solution when d > m."""
    return weighted_least_squares(data.features, data.labels, np.ones(data.sample_size))
