from .experiment_runs import (EXPERIMENT_RUNNERS, default_cluster_sizes, experiment_methods, noise_std_source,
                              resolve_algorithm1, resolve_algorithm2, resolve_ifca, resolve_synthetic_spec, run_seeds,
                              run_setting, sweep_label)

__all__ = [
    "EXPERIMENT_RUNNERS",
    "default_cluster_sizes",
    "experiment_methods",
    "noise_std_source",
    "resolve_algorithm1",
    "resolve_algorithm2",
    "resolve_ifca",
    "resolve_synthetic_spec",
    "run_seeds",
    "run_setting",
    "sweep_label",
]
