import numpy as np
import pytest

from persfl_simulator.core_functions.baselines import (DeviceMoments, run_ifca, run_oracle_sampler,
                                                       train_cluster_oracle_model, train_local_only)
from persfl_simulator.core_functions.linmodel import loss_gradient, squared_loss
from persfl_simulator.data_models.hypotheses import LinearParams
from persfl_simulator.data_models.parameter_models import Alg1Config, IfcaConfig, ModelConfig, ModelKind
from persfl_simulator.system.exceptions import ConfigurationError

from conftest import make_federation

LINEAR = ModelConfig(kind=ModelKind.LINEAR)


def test_device_moments_reproduce_local_losses(small_federation, rng):
    moments = DeviceMoments.from_federation(small_federation)
    models = rng.standard_normal((3, 2))
    losses = moments.losses(models)
    for device in (0, 4, 9):
        for cluster in range(3):
            assert losses[device, cluster] == pytest.approx(
                squared_loss(LinearParams(models[cluster]), small_federation.datasets[device]), rel=1e-10, abs=1e-10)


def test_single_cluster_model_takes_everyone(small_federation):
    result = run_ifca(small_federation, IfcaConfig(k_assumed=1, rounds=20, seed=3))
    assert result.assignments.shape == (20, 10)
    assert np.all(result.assignments == 0)
    assert len(result.models) == 1


def test_initial_models_lie_in_the_init_box(small_federation):
    result = run_ifca(small_federation, IfcaConfig(k_assumed=3, rounds=0, init_scale=0.5, seed=1))
    assert all(np.all(np.abs(model.weights) <= 0.5) for model in result.models)
    assert len(result.trace) == 1


def test_ifca_is_deterministic_per_seed(small_federation):
    config = IfcaConfig(k_assumed=2, rounds=30, seed=8)
    first, second = run_ifca(small_federation, config), run_ifca(small_federation, config)
    assert np.array_equal(first.assignments, second.assignments)
    assert np.array_equal(first.trace.values, second.trace.values)


def test_one_model_per_device_is_local_gradient_descent():
    params = [[5.0, 0.0], [0.0, 5.0], [-5.0, -5.0]]
    federation = make_federation(params, device_to_cluster=[0, 1, 2], samples_per_device=10, seed=2)
    start = [LinearParams(np.array(p) + 0.01) for p in params]
    config = IfcaConfig(k_assumed=3, eta=0.05, rounds=50)
    result = run_ifca(federation, config, initial_models=start)

    assert np.all(result.assignments == np.arange(3))
    for device in range(3):
        weights = start[device].weights.copy()
        for _ in range(50):
            weights = weights - 0.05 * loss_gradient(LinearParams(weights), federation.datasets[device])
        np.testing.assert_allclose(result.models[device].weights, weights, rtol=1e-9, atol=1e-12)


def test_empty_cluster_keeps_its_parameters(single_cluster_federation):
    far_away = LinearParams([1000.0, 1000.0])
    start = [LinearParams([0.0, 0.0]), far_away]
    result = run_ifca(single_cluster_federation, IfcaConfig(k_assumed=2, rounds=10), initial_models=start)
    assert np.all(result.assignments == 0)
    np.testing.assert_array_equal(result.models[1].weights, far_away.weights)


def test_well_specified_ifca_reaches_the_truth():
    federation = make_federation([[3.0, -2.0], [-4.0, 1.0]], device_to_cluster=[0] * 4 + [1] * 4, seed=6)
    start = [LinearParams([2.0, -1.0]), LinearParams([-3.0, 0.0])]
    result = run_ifca(federation, IfcaConfig(k_assumed=2, eta=0.05, rounds=300), initial_models=start)
    assert result.trace.final_value < 1e-6
    # stable assignments over the last rounds
    assert np.all(result.assignments[-10:] == result.assignments[-1])


def test_wrong_number_of_initial_models_is_rejected(small_federation):
    with pytest.raises(ConfigurationError):
        run_ifca(small_federation, IfcaConfig(k_assumed=2, rounds=1), initial_models=[LinearParams([0.0, 0.0])])


def test_oracle_sampler_stays_in_the_true_cluster(small_federation):
    result = run_oracle_sampler(small_federation, Alg1Config(rounds=300, seed=5))
    assert set(result.chosen_devices) <= set(small_federation.truth.peers_of(0))
    assert result.trace.values[300] < result.trace.values[0]


def test_oracle_sampler_with_a_single_peer():
    federation = make_federation([[1.0, 1.0], [-1.0, 2.0]], device_to_cluster=[0, 0, 1, 1, 1])
    result = run_oracle_sampler(federation, Alg1Config(rounds=10, candidate_count=1))
    assert set(result.chosen_devices) == {1}


def test_oracle_sampler_needs_a_peer():
    federation = make_federation([[1.0, 1.0], [-1.0, 2.0]], device_to_cluster=[0, 1, 1])
    with pytest.raises(ConfigurationError):
        run_oracle_sampler(federation, Alg1Config(rounds=10, candidate_count=1))


def test_local_only_linear_recovers_noiseless_parameters(small_federation):
    model = train_local_only(small_federation.datasets[0], LINEAR)
    np.testing.assert_allclose(model.weights, small_federation.truth.true_params(0).weights, atol=1e-8)


def test_local_only_linear_interpolates_when_underdetermined():
    federation = make_federation([np.linspace(-1, 1, 8)], device_to_cluster=[0, 0], samples_per_device=3)
    data = federation.datasets[0]
    model = train_local_only(data, LINEAR)
    np.testing.assert_allclose(data.features @ model.weights, data.labels, atol=1e-10)


def test_cluster_oracle_model(small_federation):
    oracle = train_cluster_oracle_model(small_federation, 7, LINEAR)
    np.testing.assert_allclose(oracle.weights, small_federation.truth.true_params(7).weights, atol=1e-8)

    lonely = make_federation([[1.0, 1.0], [-1.0, 2.0]], device_to_cluster=[0, 1, 1])
    tree = ModelConfig(kind=ModelKind.TREE, max_depth=2)
    pooled_alone = train_cluster_oracle_model(lonely, 0, tree)
    local = train_local_only(lonely.datasets[0], tree)
    probe = np.random.default_rng(0).standard_normal((10, 2))
    np.testing.assert_array_equal(pooled_alone.predict(probe), local.predict(probe))
