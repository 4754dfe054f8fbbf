from .load_parameters_config import load_experiment_configs, parse_experiment_config
from .parameter_models import (Alg1Config, Alg2Config, ExperimentConfig, IfcaConfig, InitMode, ModelConfig,
                               ModelKind, SyntheticSettings)

__all__ = [
    "Alg1Config",
    "Alg2Config",
    "ExperimentConfig",
    "IfcaConfig",
    "InitMode",
    "ModelConfig",
    "ModelKind",
    "SyntheticSettings",
    "load_experiment_configs",
    "parse_experiment_config",
]
