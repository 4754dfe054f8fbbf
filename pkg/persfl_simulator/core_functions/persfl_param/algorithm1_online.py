import numpy as np

from persfl_simulator.core_functions.linmodel import loss_gradient
from persfl_simulator.core_functions.synthdata import DeviceStream
from persfl_simulator.data_models.federation import Federation, LocalDataset
from persfl_simulator.data_models.hypotheses import LinearParams
from persfl_simulator.data_models.parameter_models import Alg1Config
from persfl_simulator.system.exceptions import ConfigurationError
from .algorithm1 import Algorithm1Result, run_probing_rounds


def batch_gradient_estimate(current: LinearParams, batch: LocalDataset) -> np.ndarray:
    """g = (-2/|B|) sum_{(x, y) in B} x (y - x^T w)"""
    return loss_gradient(current, batch)


def run_algorithm1_online(federation: Federation, config: Alg1Config, batch_size: int) -> Algorithm1Result:
    """Every probe uses a gradient estimated from a fresh batch of the peer's data; probes are still
    scored on the target's fixed local dataset."""
    if batch_size < 1:
        raise ConfigurationError(f"batch_size must be at least 1, got {batch_size}")
    stream = DeviceStream(federation, seed=config.seed)

    def fresh_batch_gradient(device: int, round_index: int, current: LinearParams) -> np.ndarray:
        return batch_gradient_estimate(current, stream.draw_batch(device, round_index, batch_size))

    return run_probing_rounds(federation, config, fresh_batch_gradient, label="algorithm1_online")
