from persfl_simulator.core_functions.persfl_agnostic import fit_hypothesis
from persfl_simulator.data_models.federation import Federation, LocalDataset
from persfl_simulator.data_models.hypotheses import Hypothesis
from persfl_simulator.data_models.parameter_models import ModelConfig
from persfl_simulator.system.exceptions import ConfigurationError


def train_local_only(target_data: LocalDataset, model: ModelConfig) -> Hypothesis:
    """Fit on the target's own samples only; linear fits fall back to minimum norm when d > m."""
    if target_data.sample_size == 0:
        raise ConfigurationError("Cannot train a local model on an empty dataset")
    return fit_hypothesis(target_data.features, target_data.labels, model)


def train_cluster_oracle_model(federation: Federation, target_device: int, model: ModelConfig) -> Hypothesis:
    """Fit on the pooled data of every device in the target's true cluster (target included)."""
    federation.validate_device(target_device)
    pooled = federation.pooled_cluster_data(federation.truth.cluster_of(target_device))
    return train_local_only(pooled, model)
