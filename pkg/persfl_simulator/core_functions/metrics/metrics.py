from typing import Optional, Sequence

import numpy as np

from persfl_simulator.data_models.federation import ClusterAssignment, LocalDataset
from persfl_simulator.data_models.hypotheses import Hypothesis, LinearParams
from persfl_simulator.system.exceptions import DimensionMismatchError, UndefinedMetricError
from .metric_trace import MetricTrace


def param_mse(estimate: LinearParams, truth: LinearParams) -> float:
    """Squared Euclidean distance ||estimate - truth||^2."""
    if not estimate.dim == truth.dim:
        raise DimensionMismatchError(f"Cannot compare parameters of dimension {estimate.dim} and {truth.dim}")
    difference = estimate.weights - truth.weights
    return float(difference @ difference)


def validation_mse(hypothesis: Hypothesis, validation: LocalDataset) -> float:
    """Sum (not mean) of squared prediction errors over the validation set."""
    residuals = validation.labels - np.asarray(hypothesis.predict(validation.features), dtype=float)
    return float(residuals @ residuals)


def normalized_mse(hypothesis: Hypothesis, oracle_hypothesis: Hypothesis, validation: LocalDataset) -> float:
    oracle_mse = validation_mse(oracle_hypothesis, validation)
    if oracle_mse <= 0:
        raise UndefinedMetricError("Normalized MSE is undefined: the oracle model has zero validation error")
    return validation_mse(hypothesis, validation) / oracle_mse


def rounds_to_threshold(trace: MetricTrace, threshold: float) -> Optional[int]:
    """First iteration k whose value is <= threshold, or None if never reached."""
    reached = np.flatnonzero(trace.values <= threshold)
    if reached.size == 0:
        return None
    return int(trace.rounds[reached[0]])


def selection_accuracy(chosen_devices: Sequence[int],
                       rounds: Sequence[int],
                       truth: ClusterAssignment,
                       target_device: int,
                       burn_in: int = 20) -> float:
    """Fraction of rounds k > burn_in whose chosen peer lies in the target's true cluster."""
    target_cluster = truth.cluster_of(target_device)
    after_burn_in = [truth.cluster_of(device) == target_cluster
                     for device, k in zip(chosen_devices, rounds) if k > burn_in]
    if len(after_burn_in) == 0:
        raise UndefinedMetricError(f"No selections recorded after burn-in round {burn_in}")
    return float(np.mean(after_burn_in))
