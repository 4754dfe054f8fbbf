from .metric_trace import MetricTrace
from .metrics import normalized_mse, param_mse, rounds_to_threshold, selection_accuracy, validation_mse

__all__ = [
    "MetricTrace",
    "normalized_mse",
    "param_mse",
    "rounds_to_threshold",
    "selection_accuracy",
    "validation_mse",
]
