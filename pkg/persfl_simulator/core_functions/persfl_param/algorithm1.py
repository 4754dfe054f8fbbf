import logging
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from persfl_simulator.core_functions.linmodel import loss_gradient, ridge_least_squares, squared_loss
from persfl_simulator.core_functions.metrics import MetricTrace, param_mse
from persfl_simulator.core_functions.synthdata import random_stream
from persfl_simulator.data_models.federation import Federation, LocalDataset
from persfl_simulator.data_models.hypotheses import LinearParams
from persfl_simulator.data_models.parameter_models import Alg1Config, InitMode
from persfl_simulator.system.constants import CANDIDATE_SAMPLING_STREAM, LOCAL_PRETRAIN_RIDGE_PENALTY
from .candidate_selection import SelectionRecord, sample_candidates, select_candidate, validate_candidate_setup

logger = logging.getLogger(__name__)

# (peer device, round k, current params) -> gradient of that peer's (estimated) loss at the current params
PeerGradient = Callable[[int, int, LinearParams], np.ndarray]


@dataclass(frozen=True)
class Algorithm1Result:
    params: LinearParams
    records: Tuple[SelectionRecord, ...]
    trace: MetricTrace

    @property
    def chosen_devices(self) -> Tuple[int, ...]:
        return tuple(record.chosen for record in self.records)

    @property
    def selection_rounds(self) -> Tuple[int, ...]:
        return tuple(record.round for record in self.records)


def gradient_step(current: LinearParams, gradient: np.ndarray, eta: float) -> LinearParams:
    return LinearParams(current.weights - eta * gradient)


def probe_gradient_step(current: LinearParams, peer_data: LocalDataset, eta: float) -> LinearParams:
    """Simulated update w~ = w - eta * grad L_peer(w); `current` is left untouched."""
    return gradient_step(current, loss_gradient(current, peer_data), eta)


def reward(target_data: LocalDataset, current: LinearParams, candidate: LinearParams) -> float:
    """Decrease of the target's local loss when moving from `current` to `candidate` (may be negative)."""
    return squared_loss(current, target_data) - squared_loss(candidate, target_data)


def initial_params(target_data: LocalDataset, init: InitMode) -> LinearParams:
    if InitMode(init) is InitMode.LOCAL_PRETRAIN:
        return ridge_least_squares(target_data, penalty=LOCAL_PRETRAIN_RIDGE_PENALTY)
    return LinearParams.zeros(target_data.dim)


def run_probing_rounds(federation: Federation,
                       config: Alg1Config,
                       peer_gradient: PeerGradient,
                       label: str = "algorithm1") -> Algorithm1Result:
    """Round loop shared by the exact and the online variant; only the gradient source differs.

    The target's dataset is used for initialisation (if requested) and for scoring probes, never
    as the source of a gradient step.
    """
    validate_candidate_setup(federation, config.target_device, config.candidate_count)
    target = config.target_device
    target_data = federation.datasets[target]
    true_params = federation.truth.true_params(target)
    rng = random_stream(config.seed, CANDIDATE_SAMPLING_STREAM)

    current = initial_params(target_data, config.init)
    mse_values = [param_mse(current, true_params)]
    records = []

    for k in range(1, config.rounds + 1):
        candidates = sample_candidates(rng, federation.n_devices, target, config.candidate_count)
        loss_before = squared_loss(current, target_data)

        # probes are independent; evaluated in candidate order so the reduction is deterministic
        probes = [gradient_step(current, peer_gradient(device, k, current), config.eta) for device in candidates]
        target_losses = [squared_loss(probe, target_data) for probe in probes]
        best = select_candidate(candidates, target_losses)

        record = SelectionRecord(round=k,
                                 candidates=candidates,
                                 rewards=tuple(loss_before - loss for loss in target_losses),
                                 chosen=candidates[best],
                                 target_loss_after=target_losses[best])
        records.append(record)
        # applied even when the best reward is negative
        current = probes[best]
        mse_values.append(param_mse(current, true_params))
        logger.trace(f"[{label}] round {k}: chose device {record.chosen} ({'improved' if record.improved else 'worsened'}), "
                     f"target loss {loss_before:.6g} -> {target_losses[best]:.6g}, MSE {mse_values[-1]:.6g}")

    logger.debug(f"[{label}] finished {config.rounds} rounds for device {target}: final MSE {mse_values[-1]:.6g}")
    return Algorithm1Result(params=current,
                            records=tuple(records),
                            trace=MetricTrace.from_values(label, mse_values))


def run_algorithm1(federation: Federation, config: Alg1Config) -> Algorithm1Result:
    def exact_gradient(device: int, round_index: int, current: LinearParams) -> np.ndarray:
        return loss_gradient(current, federation.datasets[device])

    return run_probing_rounds(federation, config, exact_gradient, label="algorithm1")
