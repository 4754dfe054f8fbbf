import logging

import numpy as np

from persfl_simulator.data_models.federation import ClusterAssignment, Federation, LocalDataset, SyntheticSpec
from persfl_simulator.system.constants import (CLUSTER_PARAMS_STREAM, FEATURES_STREAM, NOISE_STREAM,
                                               TEST_SET_STREAM, VALIDATION_STREAM)
from persfl_simulator.system.exceptions import ConfigurationError
from .random_streams import random_stream

logger = logging.getLogger(__name__)


def draw_labeled_samples(true_weights: np.ndarray,
                         noise_std: float,
                         count: int,
                         feature_rng: np.random.Generator,
                         noise_rng: np.random.Generator) -> LocalDataset:
    # y = X w + sigma * eps, x ~ N(0, I), eps ~ N(0, 1)
    features = feature_rng.standard_normal((count, true_weights.shape[0]))
    noise = noise_rng.standard_normal(count)
    labels = features @ true_weights
    if noise_std > 0:
        labels = labels + noise_std * noise
    return LocalDataset(features=features, labels=labels)


def generate_federation(spec: SyntheticSpec) -> Federation:
    low, high = spec.param_range
    cluster_params = random_stream(spec.seed, CLUSTER_PARAMS_STREAM).uniform(low, high,
                                                                            size=(spec.n_clusters, spec.dim))
    device_to_cluster = np.repeat(np.arange(spec.n_clusters), spec.cluster_sizes)

    datasets = [
        draw_labeled_samples(true_weights=cluster_params[device_to_cluster[device]],
                             noise_std=spec.noise_std,
                             count=spec.samples_per_device,
                             feature_rng=random_stream(spec.seed, FEATURES_STREAM, device),
                             noise_rng=random_stream(spec.seed, NOISE_STREAM, device))
        for device in range(spec.n_devices)
    ]

    logger.debug(f"Generated federation: n={spec.n_devices}, m={spec.samples_per_device}, d={spec.dim}, "
                 f"sigma={spec.noise_std}, cluster sizes={spec.cluster_sizes}, seed={spec.seed}")
    return Federation(datasets=tuple(datasets),
                      truth=ClusterAssignment(device_to_cluster=device_to_cluster, cluster_params=cluster_params),
                      spec=spec)


def generate_unlabeled_test_set(count: int, dim: int, seed: int) -> np.ndarray:
    if count < 1 or dim < 1:
        raise ConfigurationError(f"Test set needs positive count and dim, got count={count}, dim={dim}")
    test_set = random_stream(seed, TEST_SET_STREAM).standard_normal((count, dim))
    test_set.setflags(write=False)
    return test_set


def generate_validation_set(device: int, federation: Federation, count: int, seed: int) -> LocalDataset:
    """Fresh labeled points from the same distribution as `device`'s training data."""
    federation.validate_device(device)
    if count < 1:
        raise ConfigurationError(f"Validation set size must be positive, got {count}")
    return draw_labeled_samples(true_weights=federation.truth.true_params(device).weights,
                                noise_std=federation.spec.noise_std,
                                count=count,
                                feature_rng=random_stream(seed, VALIDATION_STREAM, device, 0),
                                noise_rng=random_stream(seed, VALIDATION_STREAM, device, 1))
