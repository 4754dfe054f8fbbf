import numpy as np
import pytest

from persfl_simulator.core_functions.linmodel import loss_gradient, ridge_least_squares, squared_loss
from persfl_simulator.core_functions.metrics import param_mse
from persfl_simulator.core_functions.persfl_param import (SelectionRecord, probe_gradient_step, reward, run_algorithm1,
                                                          run_algorithm1_online, sample_candidates, select_candidate)
from persfl_simulator.core_functions.synthdata import generate_federation
from persfl_simulator.data_models.federation import SyntheticSpec
from persfl_simulator.data_models.hypotheses import LinearParams
from persfl_simulator.data_models.parameter_models import Alg1Config, InitMode
from persfl_simulator.system.exceptions import ConfigurationError


def test_probe_step_leaves_current_untouched(small_federation):
    current = LinearParams([0.5, -0.5])
    peer = small_federation.datasets[3]
    probe = probe_gradient_step(current, peer, eta=0.1)
    np.testing.assert_array_equal(current.weights, [0.5, -0.5])
    np.testing.assert_allclose(probe.weights, current.weights - 0.1 * loss_gradient(current, peer))


def test_reward_is_the_decrease_of_target_loss(small_federation):
    target = small_federation.datasets[0]
    truth = small_federation.truth.true_params(0)
    assert reward(target, LinearParams.zeros(2), truth) == pytest.approx(squared_loss(LinearParams.zeros(2), target))
    assert reward(target, truth, LinearParams.zeros(2)) < 0


def test_candidates_are_distinct_sorted_peers(rng):
    for _ in range(50):
        candidates = sample_candidates(rng, n_devices=12, target_device=4, count=6)
        assert len(set(candidates)) == 6
        assert 4 not in candidates
        assert list(candidates) == sorted(candidates)
    assert sample_candidates(rng, n_devices=3, target_device=0, count=2) == (1, 2)


def test_selection_breaks_ties_by_lowest_device():
    assert select_candidate((3, 5, 7), (1.0, 0.5, 0.5)) == 1
    assert select_candidate((8, 2), (0.5, 0.5)) == 1
    assert select_candidate((1, 2, 3), (3.0, 2.0, 1.0)) == 2


def test_run_records_and_trace(small_federation):
    result = run_algorithm1(small_federation, Alg1Config(rounds=25, candidate_count=4, seed=2))
    truth = small_federation.truth.true_params(0)

    assert len(result.trace) == 26
    assert result.trace.values[0] == pytest.approx(param_mse(LinearParams.zeros(2), truth))
    assert result.trace.final_value == pytest.approx(param_mse(result.params, truth))
    assert result.selection_rounds == tuple(range(1, 26))
    for record in result.records:
        assert len(record.candidates) == 4
        assert 0 not in record.candidates
        # the adopted probe has the largest reward, i.e. the smallest target loss
        assert record.rewards[record.candidates.index(record.chosen)] == record.best_reward


def test_run_is_deterministic_per_seed(small_federation):
    config = Alg1Config(rounds=30, candidate_count=3, seed=7)
    first, second = run_algorithm1(small_federation, config), run_algorithm1(small_federation, config)
    assert first.chosen_devices == second.chosen_devices
    assert np.array_equal(first.trace.values, second.trace.values)


def test_noiseless_run_converges_to_the_cluster_parameters(small_federation):
    result = run_algorithm1(small_federation, Alg1Config(rounds=400, candidate_count=9, seed=1))
    assert result.trace.final_value < 1e-3
    assert set(result.chosen_devices[300:]) <= set(small_federation.truth.peers_of(0))


def test_local_pretrain_initialisation(small_federation):
    result = run_algorithm1(small_federation, Alg1Config(rounds=0, candidate_count=3, init=InitMode.LOCAL_PRETRAIN))
    pretrained = ridge_least_squares(small_federation.datasets[0], penalty=1e-3)
    assert len(result.trace) == 1
    assert result.trace.values[0] == pytest.approx(param_mse(pretrained, small_federation.truth.true_params(0)))


def test_invalid_candidate_counts_are_rejected(small_federation):
    with pytest.raises(ConfigurationError):
        run_algorithm1(small_federation, Alg1Config(rounds=1, candidate_count=10))
    with pytest.raises(ConfigurationError):
        Alg1Config(candidate_count=0)
    with pytest.raises(ConfigurationError):
        Alg1Config(init="warm")


def test_single_device_federation_is_rejected():
    lonely = generate_federation(SyntheticSpec(n_devices=1, samples_per_device=5, dim=2,
                                               n_clusters=1, cluster_sizes=(1,)))
    with pytest.raises(ConfigurationError):
        run_algorithm1(lonely, Alg1Config(rounds=1, candidate_count=1))


def test_online_variant(small_federation):
    config = Alg1Config(rounds=400, candidate_count=9, seed=4)
    first = run_algorithm1_online(small_federation, config, batch_size=20)
    second = run_algorithm1_online(small_federation, config, batch_size=20)
    assert np.array_equal(first.trace.values, second.trace.values)
    assert len(first.trace) == 401
    assert first.trace.final_value < 1e-2
    with pytest.raises(ConfigurationError):
        run_algorithm1_online(small_federation, config, batch_size=0)


def test_lowest_target_loss_is_the_highest_reward(rng):
    for _ in range(100):
        count = int(rng.integers(1, 10))
        candidates = tuple(sorted(rng.choice(50, size=count, replace=False).tolist()))
        target_losses = rng.uniform(0.0, 10.0, count)
        rewards = 5.0 - target_losses
        assert select_candidate(candidates, tuple(target_losses)) == int(np.argmax(rewards))


def test_record_tracks_the_sign_of_the_best_reward():
    worse = SelectionRecord(round=1, candidates=(1, 2), rewards=(-0.2, -0.1), chosen=2, target_loss_after=1.1)
    level = SelectionRecord(round=2, candidates=(1, 2), rewards=(-0.1, 0.0), chosen=2, target_loss_after=1.0)
    assert not worse.improved
    assert level.improved


def test_round_log_reports_whether_the_target_improved(small_federation, caplog):
    caplog.set_level(5)
    result = run_algorithm1(small_federation, Alg1Config(rounds=15, candidate_count=3, seed=4))
    round_lines = [record.getMessage() for record in caplog.records if "[algorithm1] round" in record.getMessage()]
    assert len(round_lines) == 15
    for line, record in zip(round_lines, result.records):
        assert ("(improved)" if record.improved else "(worsened)") in line
