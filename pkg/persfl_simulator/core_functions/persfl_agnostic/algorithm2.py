import logging
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from persfl_simulator.core_functions.metrics import MetricTrace, validation_mse
from persfl_simulator.core_functions.persfl_param import (SelectionRecord, sample_candidates, select_candidate,
                                                          validate_candidate_setup)
from persfl_simulator.core_functions.synthdata import generate_unlabeled_test_set, random_stream
from persfl_simulator.data_models.federation import Federation, LocalDataset
from persfl_simulator.data_models.hypotheses import Hypothesis
from persfl_simulator.data_models.parameter_models import Alg2Config
from persfl_simulator.system.constants import CANDIDATE_SAMPLING_STREAM
from persfl_simulator.system.exceptions import DimensionMismatchError
from .agnostic_update import agnostic_update, check_test_set
from .model_fitting import fit_hypothesis, hypothesis_loss

logger = logging.getLogger(__name__)

# (device, round) -> the data that device contributes to a probe in that round
PeerData = Callable[[int, int], LocalDataset]


@dataclass(frozen=True, eq=False)
class Algorithm2Result:
    hypothesis: Hypothesis
    records: Tuple[SelectionRecord, ...]
    trace: MetricTrace
    test_set: np.ndarray

    @property
    def chosen_devices(self) -> Tuple[int, ...]:
        return tuple(record.chosen for record in self.records)

    @property
    def selection_rounds(self) -> Tuple[int, ...]:
        return tuple(record.round for record in self.records)


def resolve_test_set(federation: Federation, config: Alg2Config) -> np.ndarray:
    """The configured shared test set, or `test_set_size` fresh N(0, I) points."""
    if config.test_set is not None:
        return check_test_set(config.test_set, federation.dim)
    return generate_unlabeled_test_set(config.test_set_size, federation.dim, config.seed)


def run_agnostic_rounds(federation: Federation,
                        config: Alg2Config,
                        validation: LocalDataset,
                        peer_data: PeerData,
                        label: str = "algorithm2") -> Algorithm2Result:
    """Model-agnostic peer selection.

    The target's own data trains the initial hypothesis and scores each probe; every later update is
    fitted on a peer's data plus pseudo-labeled test points. `validation` is only used for the trace.
    """
    validate_candidate_setup(federation, config.target_device, config.candidate_count)
    if not validation.dim == federation.dim:
        raise DimensionMismatchError(f"Validation set has {validation.dim} features, federation has {federation.dim}")
    target = config.target_device
    target_data = federation.datasets[target]
    test_set = resolve_test_set(federation, config)
    rng = random_stream(config.seed, CANDIDATE_SAMPLING_STREAM)

    current = fit_hypothesis(target_data.features, target_data.labels, config.model)
    mse_values = [validation_mse(current, validation)]
    records = []

    for k in range(1, config.rounds + 1):
        candidates = sample_candidates(rng, federation.n_devices, target, config.candidate_count)
        loss_before = hypothesis_loss(current, target_data)

        probes = [agnostic_update(current, peer_data(device, k), test_set, config.eta, config.model)
                  for device in candidates]
        target_losses = [hypothesis_loss(probe, target_data) for probe in probes]
        best = select_candidate(candidates, target_losses)

        record = SelectionRecord(round=k,
                                 candidates=candidates,
                                 rewards=tuple(loss_before - loss for loss in target_losses),
                                 chosen=candidates[best],
                                 target_loss_after=target_losses[best])
        records.append(record)
        current = probes[best]
        mse_values.append(validation_mse(current, validation))
        logger.trace(f"[{label}] round {k}: chose device {record.chosen} "
                     f"({'improved' if record.improved else 'worsened'}), "
                     f"target loss {loss_before:.6g} -> {target_losses[best]:.6g}, validation MSE {mse_values[-1]:.6g}")

    logger.debug(f"[{label}] finished {config.rounds} rounds for device {target} "
                 f"({config.model.kind.value} model): final validation MSE {mse_values[-1]:.6g}")
    return Algorithm2Result(hypothesis=current,
                            records=tuple(records),
                            trace=MetricTrace.from_values(label, mse_values),
                            test_set=test_set)


def run_algorithm2(federation: Federation, config: Alg2Config, validation: LocalDataset) -> Algorithm2Result:
    def local_dataset(device: int, round_index: int) -> LocalDataset:
        return federation.datasets[device]

    return run_agnostic_rounds(federation, config, validation, local_dataset, label="algorithm2")
