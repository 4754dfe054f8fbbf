from persfl_simulator.data_models.federation import Federation, LocalDataset
from persfl_simulator.system.constants import ONLINE_BATCH_STREAM
from persfl_simulator.system.exceptions import ConfigurationError
from .generate_federation import draw_labeled_samples
from .random_streams import random_stream


class DeviceStream:
    """Serves a federation as data arriving over time: every (round, device) pair gets a fresh batch
    drawn from that device's generating distribution."""

    def __init__(self, federation: Federation, seed: int):
        self.federation = federation
        self.seed = seed

    def draw_batch(self, device: int, round_index: int, batch_size: int) -> LocalDataset:
        self.federation.validate_device(device)
        if batch_size < 1:
            raise ConfigurationError(f"batch_size must be at least 1, got {batch_size}")
        return draw_labeled_samples(true_weights=self.federation.truth.true_params(device).weights,
                                    noise_std=self.federation.spec.noise_std,
                                    count=batch_size,
                                    feature_rng=random_stream(self.seed, ONLINE_BATCH_STREAM, round_index, device, 0),
                                    noise_rng=random_stream(self.seed, ONLINE_BATCH_STREAM, round_index, device, 1))
