from .federation import Federation
from .local_dataset import LocalDataset
from .synthetic_spec import ClusterAssignment, SyntheticSpec

__all__ = ["ClusterAssignment", "Federation", "LocalDataset", "SyntheticSpec"]
