import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np

from persfl_simulator.core_functions.metrics import MetricTrace, param_mse
from persfl_simulator.core_functions.synthdata import random_stream
from persfl_simulator.data_models.federation import Federation
from persfl_simulator.data_models.hypotheses import LinearParams
from persfl_simulator.data_models.parameter_models import IfcaConfig
from persfl_simulator.system.constants import IFCA_INIT_STREAM
from persfl_simulator.system.exceptions import ConfigurationError, DimensionMismatchError, DivergenceError

logger = logging.getLogger(__name__)


class DeviceMoments(NamedTuple):
    """Per-device sufficient statistics of the squared loss: L_i(w) = c_i - 2 w.b_i + w^T G_i w."""
    second_moments: np.ndarray  # n x d x d, X^T X / m
    cross_moments: np.ndarray  # n x d, X^T y / m
    label_energy: np.ndarray  # n, y^T y / m

    @classmethod
    def from_federation(cls, federation: Federation) -> "DeviceMoments":
        return cls(
            second_moments=np.stack([data.features.T @ data.features / data.sample_size
                                     for data in federation.datasets]),
            cross_moments=np.stack([data.features.T @ data.labels / data.sample_size
                                    for data in federation.datasets]),
            label_energy=np.array([data.labels @ data.labels / data.sample_size
                                   for data in federation.datasets]))

    def losses(self, models: np.ndarray) -> np.ndarray:
        """n x K matrix of every device's local loss under every cluster model."""
        quadratic = np.einsum("kd,nde,ke->nk", models, self.second_moments, models)
        return self.label_energy[:, np.newaxis] - 2.0 * self.cross_moments @ models.T + quadratic

    def average_gradient(self, model: np.ndarray, devices: np.ndarray) -> np.ndarray:
        second = self.second_moments[devices].mean(axis=0)
        cross = self.cross_moments[devices].mean(axis=0)
        return 2.0 * (second @ model - cross)


@dataclass(frozen=True, eq=False)
class IfcaResult:
    models: Tuple[LinearParams, ...]
    # rounds x n_devices: cluster chosen by each device in each round
    assignments: np.ndarray
    trace: MetricTrace


def initial_cluster_models(config: IfcaConfig, dim: int) -> np.ndarray:
    rng = random_stream(config.seed, IFCA_INIT_STREAM)
    return rng.uniform(-config.init_scale, config.init_scale, size=(config.k_assumed, dim))


def assign_clusters(moments: DeviceMoments, models: np.ndarray) -> np.ndarray:
    """Each device picks the model with the lowest local loss; ties go to the lowest cluster index."""
    return np.argmin(moments.losses(models), axis=1)


def run_ifca(federation: Federation,
             config: IfcaConfig,
             initial_models: Optional[Sequence[LinearParams]] = None) -> IfcaResult:
    """Iterative federated clustering with one averaged gradient step per cluster model and round.

    The trace follows the model the target device would pick after each round's update.
    """
    federation.validate_device(config.target_device)
    if initial_models is None:
        models = initial_cluster_models(config, federation.dim)
    else:
        models = np.vstack([np.asarray(model.weights, dtype=float) for model in initial_models])
        if not models.shape[0] == config.k_assumed:
            raise ConfigurationError(f"Got {models.shape[0]} initial models for k_assumed={config.k_assumed}")
        if not models.shape[1] == federation.dim:
            raise DimensionMismatchError(f"Initial models have dimension {models.shape[1]}, expected {federation.dim}")

    target = config.target_device
    true_params = federation.truth.true_params(target)
    moments = DeviceMoments.from_federation(federation)

    def target_mse() -> float:
        chosen = int(np.argmin(moments.losses(models)[target]))
        return param_mse(LinearParams(models[chosen]), true_params)

    mse_values = [target_mse()]
    assignments = np.empty((config.rounds, federation.n_devices), dtype=int)

    for k in range(1, config.rounds + 1):
        assignment = assign_clusters(moments, models)
        assignments[k - 1] = assignment
        updated = models.copy()
        for cluster in range(config.k_assumed):
            members = np.flatnonzero(assignment == cluster)
            if members.size == 0:
                continue
            updated[cluster] = models[cluster] - config.eta * moments.average_gradient(models[cluster], members)
        if not np.all(np.isfinite(updated)):
            raise DivergenceError(f"IFCA diverged in round {k}; reduce eta (currently {config.eta})")
        models = updated
        mse_values.append(target_mse())
        logger.trace(f"[ifca] round {k}: cluster sizes {np.bincount(assignment, minlength=config.k_assumed).tolist()}, "
                     f"target MSE {mse_values[-1]:.6g}")

    logger.debug(f"[ifca] finished {config.rounds} rounds with k={config.k_assumed}: "
                 f"final target MSE {mse_values[-1]:.6g}")
    assignments.setflags(write=False)
    return IfcaResult(models=tuple(LinearParams(model) for model in models),
                      assignments=assignments,
                      trace=MetricTrace.from_values("ifca", mse_values))
