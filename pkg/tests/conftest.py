import numpy as np
import pytest

from persfl_simulator.core_functions.synthdata import generate_federation
from persfl_simulator.data_models.federation import (ClusterAssignment, Federation, LocalDataset,
                                                     SyntheticSpec)


def make_linear_dataset(rng: np.random.Generator, weights, count: int, noise_std: float = 0.0) -> LocalDataset:
    weights = np.asarray(weights, dtype=float)
    features = rng.standard_normal((count, weights.shape[0]))
    labels = features @ weights + noise_std * rng.standard_normal(count)
    return LocalDataset(features=features, labels=labels)


def make_federation(cluster_params, device_to_cluster, samples_per_device: int = 20, seed: int = 0) -> Federation:
    """Hand-built noiseless federation with an explicit partition."""
    rng = np.random.default_rng(seed)
    cluster_params = np.asarray(cluster_params, dtype=float)
    device_to_cluster = np.asarray(device_to_cluster, dtype=int)
    datasets = [make_linear_dataset(rng, cluster_params[cluster], samples_per_device) for cluster in device_to_cluster]
    spec = SyntheticSpec(n_devices=len(device_to_cluster),
                         samples_per_device=samples_per_device,
                         dim=cluster_params.shape[1],
                         n_clusters=cluster_params.shape[0],
                         cluster_sizes=tuple(np.bincount(device_to_cluster, minlength=cluster_params.shape[0])),
                         seed=seed)
    return Federation(datasets=tuple(datasets),
                      truth=ClusterAssignment(device_to_cluster=device_to_cluster, cluster_params=cluster_params),
                      spec=spec)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_spec():
    return SyntheticSpec.with_equal_clusters(n_devices=10, samples_per_device=20, dim=2, n_clusters=2, seed=3)


@pytest.fixture
def small_federation(small_spec):
    return generate_federation(small_spec)


@pytest.fixture
def single_cluster_federation():
    return generate_federation(SyntheticSpec(n_devices=6, samples_per_device=10, dim=2,
                                             n_clusters=1, cluster_sizes=(6,), seed=5))
