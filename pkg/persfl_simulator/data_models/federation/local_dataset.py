from dataclasses import dataclass

import numpy as np

from persfl_simulator.system.exceptions import DimensionMismatchError


def _frozen_array(values, ndim: int, name: str) -> np.ndarray:
    array = np.array(values, dtype=float)
    if array.ndim != ndim:
        raise DimensionMismatchError(f"{name} must be {ndim}-dimensional, got shape {array.shape}")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class LocalDataset:
    """Feature matrix (m x d) and label vector (m,) held by one device."""
    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        features = _frozen_array(self.features, ndim=2, name="features")
        labels = _frozen_array(self.labels, ndim=1, name="labels")
        if not features.shape[0] == labels.shape[0]:
            raise DimensionMismatchError(
                f"Feature matrix shape {features.shape} does not match label vector length {labels.shape[0]}")
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)

    @property
    def sample_size(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    @classmethod
    def concatenate(cls, datasets) -> "LocalDataset":
        datasets = list(datasets)
        if len(datasets) == 0:
            raise ValueError("Cannot pool an empty collection of datasets")
        return cls(features=np.vstack([dataset.features for dataset in datasets]),
                   labels=np.concatenate([dataset.labels for dataset in datasets]))

    def __len__(self):
        return self.sample_size
