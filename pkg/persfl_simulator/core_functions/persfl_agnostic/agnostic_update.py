from typing import NamedTuple

import numpy as np

from persfl_simulator.data_models.federation import LocalDataset
from persfl_simulator.data_models.hypotheses import Hypothesis
from persfl_simulator.data_models.parameter_models import ModelConfig
from persfl_simulator.system.exceptions import ConfigurationError, DimensionMismatchError
from .model_fitting import fit_hypothesis


class AugmentedSamples(NamedTuple):
    features: np.ndarray
    labels: np.ndarray
    weights: np.ndarray


def check_test_set(test_set: np.ndarray, dim: int) -> np.ndarray:
    test_set = np.asarray(test_set, dtype=float)
    if test_set.ndim != 2 or test_set.shape[0] == 0:
        raise ConfigurationError(f"Test set must be a nonempty matrix, got shape {test_set.shape}")
    if not test_set.shape[1] == dim:
        raise DimensionMismatchError(f"Test set has {test_set.shape[1]} features, expected {dim}")
    return test_set


def prediction_deviation(a: Hypothesis, b: Hypothesis, test_set: np.ndarray) -> float:
    """(1/m_t) sum_{x in test set} (a(x) - b(x))^2"""
    test_set = np.asarray(test_set, dtype=float)
    if test_set.ndim != 2 or test_set.shape[0] == 0:
        raise ConfigurationError(f"Test set must be a nonempty matrix, got shape {test_set.shape}")
    gap = np.asarray(a.predict(test_set), dtype=float) - np.asarray(b.predict(test_set), dtype=float)
    return float(gap @ gap) / test_set.shape[0]


def augmented_dataset(anchor: Hypothesis, peer_data: LocalDataset, test_set: np.ndarray, eta: float) -> AugmentedSamples:
    """Peer points weighted eta/m_peer followed by pseudo-labeled test points (x, anchor(x)) weighted 1/m_t.

    Weighted squared error over these samples equals eta * L_peer(h) + deviation(h, anchor) up to a constant.
    Zero-weight rows (eta == 0) are dropped.
    """
    if peer_data.sample_size == 0:
        raise ConfigurationError("Peer dataset is empty")
    if eta < 0:
        raise ConfigurationError(f"eta must be nonnegative, got {eta}")
    test_set = check_test_set(test_set, peer_data.dim)

    pseudo_labels = np.asarray(anchor.predict(test_set), dtype=float)
    pseudo_weights = np.full(test_set.shape[0], 1.0 / test_set.shape[0])
    if eta == 0:
        return AugmentedSamples(test_set, pseudo_labels, pseudo_weights)

    peer_weights = np.full(peer_data.sample_size, eta / peer_data.sample_size)
    return AugmentedSamples(features=np.vstack([peer_data.features, test_set]),
                            labels=np.concatenate([peer_data.labels, pseudo_labels]),
                            weights=np.concatenate([peer_weights, pseudo_weights]))


def agnostic_update(anchor: Hypothesis,
                    peer_data: LocalDataset,
                    test_set: np.ndarray,
                    eta: float,
                    model: ModelConfig) -> Hypothesis:
    """argmin_h  eta * L_peer(h) + deviation(h, anchor), realized by fitting `model` to the augmented samples."""
    samples = augmented_dataset(anchor, peer_data, test_set, eta)
    return fit_hypothesis(samples.features, samples.labels, model, weights=samples.weights)
