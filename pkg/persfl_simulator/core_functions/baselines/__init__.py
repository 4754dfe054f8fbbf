from .ifca import DeviceMoments, IfcaResult, assign_clusters, initial_cluster_models, run_ifca
from .local_training import train_cluster_oracle_model, train_local_only
from .oracle_sampler import run_oracle_sampler

__all__ = [
    "DeviceMoments",
    "IfcaResult",
    "assign_clusters",
    "initial_cluster_models",
    "run_ifca",
    "run_oracle_sampler",
    "train_cluster_oracle_model",
    "train_local_only",
]
