from .agnostic_update import AugmentedSamples, agnostic_update, augmented_dataset, check_test_set, prediction_deviation
from .algorithm2 import Algorithm2Result, PeerData, resolve_test_set, run_agnostic_rounds, run_algorithm2
from .algorithm2_online import run_algorithm2_online
from .model_fitting import fit_hypothesis, hypothesis_loss

__all__ = [
    "Algorithm2Result",
    "AugmentedSamples",
    "agnostic_update",
    "augmented_dataset",
    "check_test_set",
    "fit_hypothesis",
    "hypothesis_loss",
    "PeerData",
    "prediction_deviation",
    "resolve_test_set",
    "run_agnostic_rounds",
    "run_algorithm2",
    "run_algorithm2_online",
]
