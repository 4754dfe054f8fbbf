from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

import numpy as np

from persfl_simulator.system.constants import (DEFAULT_N_SEEDS, DEFAULT_ROUNDS, DEFAULT_SEED,
                                               DEFAULT_SWEEP_VALUES, EXPERIMENT_KINDS, SWEEP_PARAMETERS)
from persfl_simulator.system.exceptions import ConfigurationError


class InitMode(str, Enum):
    ZERO = "zero"
    LOCAL_PRETRAIN = "local_pretrain"


class ModelKind(str, Enum):
    TREE = "tree"
    LINEAR = "linear"


def _require_integers(owner: str, **values):
    for name, value in values.items():
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
            raise ConfigurationError(f"{owner}: {name} must be an integer, got {value!r}")


def _check_candidate_settings(owner: str, eta: float, rounds: int, candidate_count: int, target_device: int):
    if not eta > 0:
        raise ConfigurationError(f"{owner}: eta must be positive, got {eta}")
    if rounds < 0:
        raise ConfigurationError(f"{owner}: rounds must be nonnegative, got {rounds}")
    if candidate_count < 1:
        raise ConfigurationError(f"{owner}: candidate_count must be at least 1, got {candidate_count}")
    if target_device < 0:
        raise ConfigurationError(f"{owner}: target_device must be a device index, got {target_device}")


@dataclass
class Alg1Config:
    eta: float = 0.05
    rounds: int = DEFAULT_ROUNDS
    candidate_count: int = 20
    target_device: int = 0
    init: InitMode = InitMode.ZERO
    seed: int = 0

    def __post_init__(self):
        try:
            self.init = InitMode(self.init)
        except ValueError:
            raise ConfigurationError(
                f"Alg1Config: init must be one of {[mode.value for mode in InitMode]}, got {self.init!r}")
        _check_candidate_settings("Alg1Config", self.eta, self.rounds, self.candidate_count, self.target_device)


@dataclass
class ModelConfig:
    kind: ModelKind = ModelKind.TREE
    max_depth: int = 3
    min_leaf: int = 1

    def __post_init__(self):
        try:
            self.kind = ModelKind(self.kind)
        except ValueError:
            raise ConfigurationError(
                f"ModelConfig: kind must be one of {[kind.value for kind in ModelKind]}, got {self.kind!r}")
        if self.max_depth < 0:
            raise ConfigurationError(f"ModelConfig: max_depth must be nonnegative, got {self.max_depth}")
        if self.min_leaf < 1:
            raise ConfigurationError(f"ModelConfig: min_leaf must be at least 1, got {self.min_leaf}")


@dataclass
class Alg2Config:
    eta: float = 1.0
    rounds: int = DEFAULT_ROUNDS
    candidate_count: int = 20
    target_device: int = 0
    model: ModelConfig = field(default_factory=ModelConfig)
    # Unlabeled points shared by all probes; drawn from N(0, I) when left empty
    test_set: Optional[np.ndarray] = None
    test_set_size: int = 100
    validation_size: int = 100
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.model, dict):
            self.model = ModelConfig(**self.model)
        _check_candidate_settings("Alg2Config", self.eta, self.rounds, self.candidate_count, self.target_device)
        if self.test_set is not None:
            self.test_set = np.atleast_2d(np.asarray(self.test_set, dtype=float))
            if self.test_set.shape[0] == 0:
                raise ConfigurationError("Alg2Config: test_set must not be empty")
        if self.test_set_size < 1 or self.validation_size < 1:
            raise ConfigurationError(
                f"Alg2Config: test_set_size and validation_size must be positive, "
                f"got {self.test_set_size} and {self.validation_size}")


@dataclass
class IfcaConfig:
    k_assumed: int = 2
    eta: float = 0.05
    rounds: int = DEFAULT_ROUNDS
    init_scale: float = 1.0
    target_device: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.k_assumed < 1:
            raise ConfigurationError(f"IfcaConfig: k_assumed must be at least 1, got {self.k_assumed}")
        if not self.eta > 0:
            raise ConfigurationError(f"IfcaConfig: eta must be positive, got {self.eta}")
        if self.rounds < 0 or self.init_scale < 0:
            raise ConfigurationError(
                f"IfcaConfig: rounds and init_scale must be nonnegative, got {self.rounds} and {self.init_scale}")


@dataclass
class SyntheticSettings:
    """Federation shape shared by every sweep value; the swept quantity overrides its field."""
    n_devices: int = 100
    samples_per_device: int = 10
    dim_ratio: float = 2.0
    # None means "not given": the default 0 is used and flagged in the manifest
    noise_std: Optional[float] = None
    # None means the kind's default partition (two equal clusters, five for ifca_misspecified)
    cluster_sizes: Optional[List[int]] = None
    param_range: List[float] = field(default_factory=lambda: [-5.0, 5.0])

    def __post_init__(self):
        _require_integers("synthetic", n_devices=self.n_devices, samples_per_device=self.samples_per_device)
        if self.n_devices < 2:
            raise ConfigurationError(f"synthetic: n_devices must be at least 2, got {self.n_devices}")
        if self.samples_per_device < 1:
            raise ConfigurationError(f"synthetic: samples_per_device must be positive, got {self.samples_per_device}")
        if not self.dim_ratio > 0:
            raise ConfigurationError(f"synthetic: dim_ratio must be positive, got {self.dim_ratio}")
        if self.noise_std is not None and self.noise_std < 0:
            raise ConfigurationError(f"synthetic: noise_std must be nonnegative, got {self.noise_std}")
        if self.cluster_sizes is not None and (any(size < 1 for size in self.cluster_sizes)
                                               or sum(self.cluster_sizes) != self.n_devices):
            raise ConfigurationError(
                f"synthetic: cluster_sizes {self.cluster_sizes} must be positive and sum to n_devices={self.n_devices}")
        if len(self.param_range) != 2 or not self.param_range[0] <= self.param_range[1]:
            raise ConfigurationError(f"synthetic: param_range must be an interval [low, high], got {self.param_range}")


@dataclass
class ExperimentConfig:
    kind: str
    seed: int = DEFAULT_SEED
    n_seeds: int = DEFAULT_N_SEEDS
    sweep_values: Optional[List[float]] = None
    output_path: Optional[str] = None
    workers: int = 1
    online_batch_size: int = 10
    synthetic: SyntheticSettings = field(default_factory=SyntheticSettings)
    algorithm1: Alg1Config = field(default_factory=Alg1Config)
    algorithm2: Alg2Config = field(default_factory=Alg2Config)
    ifca: IfcaConfig = field(default_factory=IfcaConfig)

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ConfigurationError(
                f"Unknown experiment kind {self.kind!r}; valid kinds are: {', '.join(EXPERIMENT_KINDS)}")
        _require_integers(self.kind, seed=self.seed, n_seeds=self.n_seeds, workers=self.workers,
                          online_batch_size=self.online_batch_size)
        if self.sweep_values is None:
            self.sweep_values = list(DEFAULT_SWEEP_VALUES[self.kind])
        if len(self.sweep_values) == 0:
            raise ConfigurationError(f"{self.kind}: sweep_values must not be empty")
        if self.n_seeds < 1 or self.workers < 1 or self.online_batch_size < 1:
            raise ConfigurationError(
                f"{self.kind}: n_seeds, workers and online_batch_size must be positive, got "
                f"{self.n_seeds}, {self.workers} and {self.online_batch_size}")
        if self.sweep_parameter == "candidate_count":
            for value in self.sweep_values:
                if int(value) != value or not 1 <= value <= self.synthetic.n_devices - 1:
                    raise ConfigurationError(
                        f"{self.kind}: candidate counts must be integers in [1, {self.synthetic.n_devices - 1}], "
                        f"got {value}")
        elif any(not value > 0 and not (self.sweep_parameter == "noise_std" and value == 0)
                 for value in self.sweep_values):
            raise ConfigurationError(f"{self.kind}: invalid sweep values {self.sweep_values}")

    @property
    def sweep_parameter(self) -> str:
        return SWEEP_PARAMETERS[self.kind]
