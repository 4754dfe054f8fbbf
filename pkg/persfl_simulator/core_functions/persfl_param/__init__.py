from .algorithm1 import (Algorithm1Result, gradient_step, initial_params, probe_gradient_step, reward,
                         run_algorithm1, run_probing_rounds)
from .algorithm1_online import batch_gradient_estimate, run_algorithm1_online
from .candidate_selection import SelectionRecord, sample_candidates, select_candidate, validate_candidate_setup

__all__ = [
    "Algorithm1Result",
    "SelectionRecord",
    "batch_gradient_estimate",
    "gradient_step",
    "initial_params",
    "probe_gradient_step",
    "reward",
    "run_algorithm1",
    "run_algorithm1_online",
    "run_probing_rounds",
    "sample_candidates",
    "select_candidate",
    "validate_candidate_setup",
]
