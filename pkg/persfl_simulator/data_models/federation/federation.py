from dataclasses import dataclass
from typing import Tuple

from persfl_simulator.system.exceptions import ConfigurationError, DimensionMismatchError
from .local_dataset import LocalDataset
from .synthetic_spec import ClusterAssignment, SyntheticSpec
from .federation_stats import FederationStats


@dataclass(frozen=True, eq=False)
class Federation:
    """The network of devices: one local dataset per device plus the hidden cluster truth."""
    datasets: Tuple[LocalDataset, ...]
    truth: ClusterAssignment
    spec: SyntheticSpec

    def __post_init__(self):
        object.__setattr__(self, "datasets", tuple(self.datasets))
        self._validate()

    def _validate(self):
        if not len(self.datasets) == self.spec.n_devices:
            raise ConfigurationError(
                f"Federation holds {len(self.datasets)} datasets but spec declares n_devices={self.spec.n_devices}")
        if not len(self.truth.device_to_cluster) == self.spec.n_devices:
            raise ConfigurationError(
                f"Cluster assignment covers {len(self.truth.device_to_cluster)} devices, expected {self.spec.n_devices}")
        for device, dataset in enumerate(self.datasets):
            if not dataset.dim == self.spec.dim:
                raise DimensionMismatchError(
                    f"Device {device} has {dataset.dim} features, spec declares dim={self.spec.dim}")

    @property
    def n_devices(self) -> int:
        return len(self.datasets)

    @property
    def dim(self) -> int:
        return self.spec.dim

    def validate_device(self, device: int):
        if not 0 <= device < self.n_devices:
            raise IndexError(f"Device index {device} out of range for a federation of {self.n_devices} devices")

    def pooled_cluster_data(self, cluster: int) -> LocalDataset:
        return LocalDataset.concatenate(self.datasets[device] for device in self.truth.members(cluster))

    def __str__(self):
        return str(FederationStats.from_federation(self))
