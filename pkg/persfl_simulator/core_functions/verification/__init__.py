from .acceptance_suite import (ACCEPTANCE_CHECKS, CONVERGED_MSE_FLOOR, CheckResult, VerifySettings,
                               format_results_table, run_acceptance_suite, seeds_reaching, within_factor)
from .oracles import (exhaustive_best_gain, finite_difference_gradient, greedy_splits_are_optimal,
                      numeric_proximal_minimizer)

__all__ = [
    "ACCEPTANCE_CHECKS",
    "CONVERGED_MSE_FLOOR",
    "CheckResult",
    "VerifySettings",
    "exhaustive_best_gain",
    "finite_difference_gradient",
    "format_results_table",
    "greedy_splits_are_optimal",
    "numeric_proximal_minimizer",
    "run_acceptance_suite",
    "seeds_reaching",
    "within_factor",
]
