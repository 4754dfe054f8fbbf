from persfl_simulator.core_functions.synthdata import DeviceStream
from persfl_simulator.data_models.federation import Federation, LocalDataset
from persfl_simulator.data_models.parameter_models import Alg2Config
from persfl_simulator.system.exceptions import ConfigurationError
from .algorithm2 import Algorithm2Result, run_agnostic_rounds


def run_algorithm2_online(federation: Federation,
                          config: Alg2Config,
                          validation: LocalDataset,
                          batch_size: int) -> Algorithm2Result:
    """Each probe is fitted on a fresh batch from the peer's generating distribution instead of its
    stored dataset; the initial fit and the scoring still use the target's local data."""
    if batch_size < 1:
        raise ConfigurationError(f"batch_size must be at least 1, got {batch_size}")
    stream = DeviceStream(federation, seed=config.seed)

    def fresh_batch(device: int, round_index: int) -> LocalDataset:
        return stream.draw_batch(device, round_index, batch_size)

    return run_agnostic_rounds(federation, config, validation, fresh_batch, label="algorithm2_online")
