import logging

from persfl_simulator.core_functions.linmodel import squared_loss
from persfl_simulator.core_functions.metrics import MetricTrace, param_mse
from persfl_simulator.core_functions.persfl_param import (Algorithm1Result, SelectionRecord, initial_params,
                                                          probe_gradient_step)
from persfl_simulator.core_functions.synthdata import random_stream
from persfl_simulator.data_models.federation import Federation
from persfl_simulator.data_models.parameter_models import Alg1Config
from persfl_simulator.system.constants import ORACLE_SAMPLING_STREAM
from persfl_simulator.system.exceptions import ConfigurationError

logger = logging.getLogger(__name__)


def run_oracle_sampler(federation: Federation, config: Alg1Config) -> Algorithm1Result:
    """Same gradient steps as peer selection, but the peer is drawn uniformly from the target's true cluster.

    `candidate_count` plays no role here.
    """
    federation.validate_device(config.target_device)
    target = config.target_device
    peers = federation.truth.peers_of(target)
    if len(peers) == 0:
        raise ConfigurationError(f"Device {target} has no other member in its cluster to sample from")

    target_data = federation.datasets[target]
    true_params = federation.truth.true_params(target)
    rng = random_stream(config.seed, ORACLE_SAMPLING_STREAM)

    current = initial_params(target_data, config.init)
    mse_values = [param_mse(current, true_params)]
    records = []
    for k in range(1, config.rounds + 1):
        chosen = peers[int(rng.integers(len(peers)))]
        loss_before = squared_loss(current, target_data)
        current = probe_gradient_step(current, federation.datasets[chosen], config.eta)
        loss_after = squared_loss(current, target_data)
        records.append(SelectionRecord(round=k,
                                       candidates=(chosen,),
                                       rewards=(loss_before - loss_after,),
                                       chosen=chosen,
                                       target_loss_after=loss_after))
        mse_values.append(param_mse(current, true_params))
        logger.trace(f"[oracle] round {k}: sampled device {chosen}, MSE {mse_values[-1]:.6g}")

    logger.debug(f"[oracle] finished {config.rounds} rounds for device {target}: final MSE {mse_values[-1]:.6g}")
    return Algorithm1Result(params=current,
                            records=tuple(records),
                            trace=MetricTrace.from_values("oracle", mse_values))
