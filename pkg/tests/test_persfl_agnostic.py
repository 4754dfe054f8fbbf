import dataclasses

import numpy as np
import pytest

from persfl_simulator.core_functions.linmodel import proximal_least_squares
from persfl_simulator.core_functions.metrics import validation_mse
from persfl_simulator.core_functions.persfl_agnostic import (agnostic_update, augmented_dataset, hypothesis_loss,
                                                             prediction_deviation, run_algorithm2,
                                                             run_algorithm2_online)
from persfl_simulator.core_functions.synthdata import generate_validation_set
from persfl_simulator.data_models.federation import LocalDataset
from persfl_simulator.data_models.hypotheses import LinearParams, TreeNode
from persfl_simulator.data_models.parameter_models import Alg2Config, ModelConfig, ModelKind
from persfl_simulator.system.exceptions import ConfigurationError

from conftest import make_federation, make_linear_dataset

LINEAR = ModelConfig(kind=ModelKind.LINEAR)
TREE = ModelConfig(kind=ModelKind.TREE, max_depth=3)


def test_prediction_deviation_of_constant_predictors(rng):
    test_set = rng.standard_normal((25, 3))
    assert prediction_deviation(TreeNode(value=1.0), TreeNode(value=3.0), test_set) == pytest.approx(4.0)
    assert prediction_deviation(TreeNode(value=1.0), TreeNode(value=1.0), test_set) == 0.0


def test_prediction_deviation_of_linear_models(rng):
    test_set = rng.standard_normal((40, 4))
    a, b = LinearParams(rng.standard_normal(4)), LinearParams(rng.standard_normal(4))
    expected = sum((x @ a.weights - x @ b.weights) ** 2 for x in test_set) / 40
    assert prediction_deviation(a, b, test_set) == pytest.approx(expected, rel=1e-12)


def test_prediction_deviation_needs_test_points():
    with pytest.raises(ConfigurationError):
        prediction_deviation(TreeNode(value=1.0), TreeNode(value=2.0), np.zeros((0, 2)))


def test_augmented_weights(rng):
    peer = make_linear_dataset(rng, [1.0, 2.0], count=8)
    test_set = rng.standard_normal((20, 2))
    anchor = LinearParams([0.5, 0.5])

    samples = augmented_dataset(anchor, peer, test_set, eta=2.0)
    assert samples.features.shape == (28, 2)
    np.testing.assert_allclose(samples.weights[:8], 2.0 / 8)
    np.testing.assert_allclose(samples.weights[8:], 1.0 / 20)
    np.testing.assert_allclose(samples.labels[8:], test_set @ anchor.weights)

    without_peer = augmented_dataset(anchor, peer, test_set, eta=0.0)
    assert without_peer.features.shape == (20, 2)


def test_weighted_sse_equals_the_update_objective(rng):
    peer = make_linear_dataset(rng, [1.0, -1.0, 2.0], count=6, noise_std=0.3)
    test_set = rng.standard_normal((15, 3))
    anchor = LinearParams(rng.standard_normal(3))
    samples = augmented_dataset(anchor, peer, test_set, eta=1.5)
    for _ in range(20):
        candidate = LinearParams(rng.standard_normal(3))
        weighted_sse = float(np.sum(samples.weights * (samples.labels - samples.features @ candidate.weights) ** 2))
        objective = 1.5 * hypothesis_loss(candidate, peer) + prediction_deviation(candidate, anchor, test_set)
        assert weighted_sse == pytest.approx(objective, rel=1e-10)


def test_zero_eta_reproduces_the_anchor(rng):
    peer = make_linear_dataset(rng, [3.0, 3.0], count=5)
    test_set = rng.standard_normal((30, 2))
    anchor = LinearParams([-1.0, 0.25])
    updated = agnostic_update(anchor, peer, test_set, eta=0.0, model=LINEAR)
    assert prediction_deviation(updated, anchor, test_set) <= 1e-8


def test_linear_update_approaches_the_proximal_step(rng):
    peer = make_linear_dataset(rng, [2.0, -1.0, 0.5], count=10, noise_std=0.1)
    anchor = LinearParams([0.0, 1.0, 1.0])
    test_set = rng.standard_normal((10_000, 3))
    updated = agnostic_update(anchor, peer, test_set, eta=1.0, model=LINEAR)
    closed_form = proximal_least_squares(anchor, peer, eta=1.0)
    gap = np.linalg.norm(updated.weights - closed_form.weights) / np.linalg.norm(closed_form.weights)
    assert gap < 0.02


def test_update_leaves_the_anchor_unchanged(rng):
    peer = make_linear_dataset(rng, [1.0, 1.0], count=10)
    test_set = rng.standard_normal((20, 2))
    anchor = TreeNode(value=0.5)
    before = anchor.predict(test_set).copy()
    updated = agnostic_update(anchor, peer, test_set, eta=1.0, model=TREE)
    assert isinstance(updated, TreeNode)
    np.testing.assert_array_equal(anchor.predict(test_set), before)


def test_linear_run_on_one_cluster_reaches_zero_error(single_cluster_federation):
    validation = generate_validation_set(0, single_cluster_federation, count=50, seed=1)
    config = Alg2Config(rounds=200, candidate_count=5, model=LINEAR, test_set_size=100, seed=1)
    result = run_algorithm2(single_cluster_federation, config, validation)
    assert len(result.trace) == 201
    assert result.trace.final_value < 1e-10


def test_tree_run_records(small_federation):
    validation = generate_validation_set(0, small_federation, count=40, seed=2)
    test_set = np.random.default_rng(0).standard_normal((30, 2))
    config = Alg2Config(rounds=5, candidate_count=4, model=TREE, test_set=test_set, seed=2)
    result = run_algorithm2(small_federation, config, validation)

    assert np.array_equal(result.test_set, test_set)
    assert result.trace.values[-1] == pytest.approx(validation_mse(result.hypothesis, validation))
    for record in result.records:
        assert 0 not in record.candidates
        assert record.rewards[record.candidates.index(record.chosen)] == record.best_reward
    assert result.records[-1].target_loss_after == pytest.approx(
        hypothesis_loss(result.hypothesis, small_federation.datasets[0]))


def _federation_with_blank_peer_labels():
    """One noiseless cluster whose peers stored all-zero labels; only the target's data is clean."""
    federation = make_federation([[1.0, -2.0]], [0] * 6, samples_per_device=20, seed=4)
    datasets = [federation.datasets[0]] + [LocalDataset(features=dataset.features, labels=np.zeros(dataset.sample_size))
                                           for dataset in federation.datasets[1:]]
    return dataclasses.replace(federation, datasets=tuple(datasets))


def test_online_run_draws_fresh_peer_batches():
    federation = _federation_with_blank_peer_labels()
    validation = generate_validation_set(0, federation, count=50, seed=1)
    config = Alg2Config(rounds=30, candidate_count=3, model=LINEAR, test_set_size=50, seed=2)

    stored = run_algorithm2(federation, config, validation)
    online = run_algorithm2_online(federation, config, validation, batch_size=10)

    assert online.trace.label == "algorithm2_online"
    assert len(online.records) == 30
    assert online.trace.final_value < 1e-10
    assert stored.trace.final_value > 1.0


def test_online_run_is_reproducible(small_federation):
    validation = generate_validation_set(0, small_federation, count=40, seed=2)
    config = Alg2Config(rounds=8, candidate_count=4, model=TREE, test_set_size=30, seed=6)
    first = run_algorithm2_online(small_federation, config, validation, batch_size=5)
    second = run_algorithm2_online(small_federation, config, validation, batch_size=5)
    np.testing.assert_array_equal(first.trace.values, second.trace.values)
    assert first.chosen_devices == second.chosen_devices


def test_online_run_needs_a_positive_batch(small_federation):
    validation = generate_validation_set(0, small_federation, count=10, seed=2)
    with pytest.raises(ConfigurationError):
        run_algorithm2_online(small_federation, Alg2Config(rounds=1, candidate_count=2), validation, batch_size=0)
