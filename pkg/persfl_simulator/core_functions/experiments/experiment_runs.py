"""One (sweep value, seed) run of every experiment kind.

A run builds its federation from the run seed, hands the same seed to every algorithm it compares,
and returns one metric trace per method, keyed by method name.
"""
import logging
from dataclasses import replace
from typing import Callable, Dict, List, Tuple

import numpy as np

from persfl_simulator.core_functions.baselines import (run_ifca, run_oracle_sampler, train_cluster_oracle_model,
                                                       train_local_only)
from persfl_simulator.core_functions.metrics import MetricTrace, normalized_mse, validation_mse
from persfl_simulator.core_functions.persfl_agnostic import run_algorithm2
from persfl_simulator.core_functions.persfl_param import run_algorithm1, run_algorithm1_online
from persfl_simulator.core_functions.synthdata import generate_federation, generate_validation_set
from persfl_simulator.data_models.federation import Federation, SyntheticSpec
from persfl_simulator.data_models.parameter_models import Alg1Config, Alg2Config, ExperimentConfig, IfcaConfig
from persfl_simulator.system.constants import (DM_SWEEP, IFCA_COMPARE, IFCA_MISSPECIFIED, NOISE_SWEEP, ONLINE,
                                               ORACLE_COMPARE, SUBSET_SWEEP, SWEEP_LABEL_PREFIXES, TREE_AGNOSTIC)

logger = logging.getLogger(__name__)

MISSPECIFIED_TRUE_CLUSTERS = 5
DEFAULT_TRUE_CLUSTERS = 2


def sweep_label(config: ExperimentConfig, value: float) -> str:
    return f"{SWEEP_LABEL_PREFIXES[config.sweep_parameter]}={value:g}"


def run_seeds(config: ExperimentConfig) -> List[int]:
    return [config.seed + offset for offset in range(config.n_seeds)]


def default_cluster_sizes(n_devices: int, n_clusters: int) -> Tuple[int, ...]:
    """Near-equal partition; the first clusters take the remainder."""
    return tuple(int(len(chunk)) for chunk in np.array_split(np.arange(n_devices), n_clusters))


def noise_std_source(config: ExperimentConfig) -> str:
    if config.sweep_parameter == "noise_std" or config.synthetic.noise_std is not None:
        return "config"
    return "default"


def resolve_synthetic_spec(config: ExperimentConfig, sweep_value: float, run_seed: int) -> SyntheticSpec:
    settings = config.synthetic
    dim_ratio = sweep_value if config.sweep_parameter == "dim_ratio" else settings.dim_ratio
    noise_std = sweep_value if config.sweep_parameter == "noise_std" else (settings.noise_std or 0.0)
    if settings.cluster_sizes is not None:
        cluster_sizes = tuple(settings.cluster_sizes)
    else:
        n_clusters = MISSPECIFIED_TRUE_CLUSTERS if config.kind == IFCA_MISSPECIFIED else DEFAULT_TRUE_CLUSTERS
        cluster_sizes = default_cluster_sizes(settings.n_devices, n_clusters)

    return SyntheticSpec(n_devices=settings.n_devices,
                         samples_per_device=settings.samples_per_device,
                         dim=max(1, int(round(dim_ratio * settings.samples_per_device))),
                         noise_std=float(noise_std),
                         n_clusters=len(cluster_sizes),
                         cluster_sizes=cluster_sizes,
                         param_range=tuple(settings.param_range),
                         seed=run_seed)


def resolve_algorithm1(config: ExperimentConfig, sweep_value: float, run_seed: int) -> Alg1Config:
    candidate_count = int(sweep_value) if config.sweep_parameter == "candidate_count" else None
    return replace(config.algorithm1,
                   seed=run_seed,
                   candidate_count=candidate_count or config.algorithm1.candidate_count)


def resolve_algorithm2(config: ExperimentConfig, run_seed: int) -> Alg2Config:
    return replace(config.algorithm2, seed=run_seed)


def resolve_ifca(config: ExperimentConfig, run_seed: int) -> IfcaConfig:
    return replace(config.ifca, seed=run_seed)


def _run_parameter_sweep(config: ExperimentConfig, federation: Federation, sweep_value: float, run_seed: int):
    return {"alg1": run_algorithm1(federation, resolve_algorithm1(config, sweep_value, run_seed)).trace}


def _run_ifca_comparison(config: ExperimentConfig, federation: Federation, sweep_value: float, run_seed: int):
    return {"alg1": run_algorithm1(federation, resolve_algorithm1(config, sweep_value, run_seed)).trace,
            "ifca": run_ifca(federation, resolve_ifca(config, run_seed)).trace}


def _run_oracle_comparison(config: ExperimentConfig, federation: Federation, sweep_value: float, run_seed: int):
    alg1_config = resolve_algorithm1(config, sweep_value, run_seed)
    return {"alg1": run_algorithm1(federation, alg1_config).trace,
            "oracle": run_oracle_sampler(federation, alg1_config).trace}


def _run_online(config: ExperimentConfig, federation: Federation, sweep_value: float, run_seed: int):
    alg1_config = resolve_algorithm1(config, sweep_value, run_seed)
    return {"alg1_online": run_algorithm1_online(federation, alg1_config, config.online_batch_size).trace}


def _run_tree_agnostic(config: ExperimentConfig, federation: Federation, sweep_value: float, run_seed: int):
    """Validation MSE of the agnostic method and of the local-only model, both relative to the cluster oracle."""
    alg2_config = resolve_algorithm2(config, run_seed)
    target = alg2_config.target_device
    validation = generate_validation_set(target, federation, alg2_config.validation_size, run_seed)

    oracle_model = train_cluster_oracle_model(federation, target, alg2_config.model)
    local_model = train_local_only(federation.datasets[target], alg2_config.model)
    # raises UndefinedMetricError when the oracle is exact on the validation set
    local_only_norm = normalized_mse(local_model, oracle_model, validation)

    trace = run_algorithm2(federation, alg2_config, validation).trace
    return {"alg2": trace.scaled(1.0 / validation_mse(oracle_model, validation)),
            "local_only": MetricTrace(label="local_only",
                                      rounds=trace.rounds,
                                      values=np.full(len(trace), local_only_norm))}


RunFunction = Callable[[ExperimentConfig, Federation, float, int], Dict[str, MetricTrace]]

EXPERIMENT_RUNNERS: Dict[str, Tuple[Tuple[str, ...], RunFunction]] = {
    DM_SWEEP: (("alg1",), _run_parameter_sweep),
    NOISE_SWEEP: (("alg1",), _run_parameter_sweep),
    SUBSET_SWEEP: (("alg1",), _run_parameter_sweep),
    IFCA_COMPARE: (("alg1", "ifca"), _run_ifca_comparison),
    IFCA_MISSPECIFIED: (("alg1", "ifca"), _run_ifca_comparison),
    ORACLE_COMPARE: (("alg1", "oracle"), _run_oracle_comparison),
    ONLINE: (("alg1_online",), _run_online),
    TREE_AGNOSTIC: (("alg2", "local_only"), _run_tree_agnostic),
}


def experiment_methods(kind: str) -> Tuple[str, ...]:
    return EXPERIMENT_RUNNERS[kind][0]


def run_setting(config: ExperimentConfig, sweep_value: float, run_seed: int) -> Dict[str, MetricTrace]:
    """Generate the federation for one sweep value and seed, then run every method of the experiment on it."""
    methods, run_function = EXPERIMENT_RUNNERS[config.kind]
    federation = generate_federation(resolve_synthetic_spec(config, sweep_value, run_seed))
    logger.debug(f"[{config.kind}] {sweep_label(config, sweep_value)}, seed {run_seed}: "
                 f"n={federation.n_devices}, d={federation.dim}, sigma={federation.spec.noise_std}")
    traces = run_function(config, federation, sweep_value, run_seed)
    return {method: traces[method] for method in methods}
