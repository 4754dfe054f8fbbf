import filecmp
import logging
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from persfl_simulator.core_functions.experiment_controller import ExperimentController
from persfl_simulator.core_functions.linmodel import loss_gradient, proximal_least_squares
from persfl_simulator.core_functions.metrics import MetricTrace, rounds_to_threshold, selection_accuracy
from persfl_simulator.core_functions.persfl_param import run_algorithm1
from persfl_simulator.core_functions.regtree import fit_tree_arrays
from persfl_simulator.core_functions.synthdata import generate_federation, random_stream
from persfl_simulator.data_models.federation import LocalDataset, SyntheticSpec
from persfl_simulator.data_models.hypotheses import LinearParams
from persfl_simulator.data_models.parameter_models import (Alg1Config, Alg2Config, ExperimentConfig, IfcaConfig,
                                                           SyntheticSettings)
from persfl_simulator.system.constants import (DEFAULT_ROUNDS, DM_SWEEP, IFCA_COMPARE, IFCA_MISSPECIFIED, NOISE_SWEEP,
                                               ONLINE, ORACLE_COMPARE, SUBSET_SWEEP, TREE_AGNOSTIC)
from .oracles import finite_difference_gradient, greedy_splits_are_optimal, numeric_proximal_minimizer

logger = logging.getLogger(__name__)

# spawn keys for the instance generators of the oracle checks, kept apart from the simulation streams
_GRADIENT_CHECK_STREAM = 100
_PROXIMAL_CHECK_STREAM = 101
_TREE_CHECK_STREAM = 102

# final MSEs at or below this are floating-point zero; ratios between them carry no information
CONVERGED_MSE_FLOOR = 1e-12


@dataclass
class VerifySettings:
    seed: int = 1
    n_seeds: int = 5
    rounds: int = 500
    # the tree experiment refits S trees per round, so it runs shorter by default
    tree_rounds: int = 100
    workers: int = 1


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


@dataclass
class _Experiment:
    """Runs one experiment without writing files and exposes its per-seed traces."""
    kind: str
    sweep_values: List[float]
    settings: VerifySettings
    synthetic: SyntheticSettings = field(default_factory=SyntheticSettings)
    rounds: Optional[int] = None
    ifca: Optional[IfcaConfig] = None
    algorithm2: Optional[Alg2Config] = None

    def run(self) -> Dict[str, List[List[MetricTrace]]]:
        rounds = self.rounds if self.rounds is not None else self.settings.rounds
        config = ExperimentConfig(kind=self.kind,
                                  seed=self.settings.seed,
                                  n_seeds=self.settings.n_seeds,
                                  sweep_values=list(self.sweep_values),
                                  workers=self.settings.workers,
                                  synthetic=self.synthetic,
                                  algorithm1=Alg1Config(rounds=rounds),
                                  algorithm2=self.algorithm2 or Alg2Config(rounds=rounds),
                                  ifca=self.ifca or IfcaConfig(rounds=rounds))
        controller = ExperimentController(config)
        controller.run_all_settings()
        return controller.per_seed_traces


def _final_averaged(per_seed: Sequence[MetricTrace]) -> float:
    return MetricTrace.average(per_seed).final_value


def within_factor(value: float, reference: float, factor: float, floor: float = CONVERGED_MSE_FLOOR) -> bool:
    """value <= factor * reference, where anything at or below `floor` counts as converged to zero."""
    return value <= max(factor * reference, floor)


def seeds_reaching(per_seed: Sequence[MetricTrace], seeds: Sequence[int], threshold: float) -> List[int]:
    return [seed for seed, trace in zip(seeds, per_seed) if rounds_to_threshold(trace, threshold) is not None]


def _required_seeds(n_seeds: int) -> int:
    return int(np.ceil(0.8 * n_seeds))


def check_gradient_oracle(settings: VerifySettings) -> Tuple[bool, str]:
    rng = random_stream(settings.seed, _GRADIENT_CHECK_STREAM)
    worst = 0.0
    for _ in range(100):
        dim, count = int(rng.integers(1, 9)), int(rng.integers(1, 13))
        data = LocalDataset(features=rng.standard_normal((count, dim)), labels=rng.standard_normal(count))
        params = LinearParams(rng.uniform(-5, 5, dim))
        analytic = loss_gradient(params, data)
        numeric = finite_difference_gradient(params, data)
        worst = max(worst, float(np.linalg.norm(analytic - numeric) / max(np.linalg.norm(analytic), 1.0)))
    return worst <= 1e-6, f"max relative error {worst:.2e} over 100 instances"


def check_proximal_oracle(settings: VerifySettings) -> Tuple[bool, str]:
    rng = random_stream(settings.seed, _PROXIMAL_CHECK_STREAM)
    worst = 0.0
    for _ in range(20):
        dim, count = int(rng.integers(1, 6)), int(rng.integers(1, 11))
        data = LocalDataset(features=rng.standard_normal((count, dim)), labels=rng.standard_normal(count))
        anchor = LinearParams(rng.uniform(-2, 2, dim))
        eta = float(rng.uniform(0.01, 5.0))
        closed_form = proximal_least_squares(anchor, data, eta)
        numeric = numeric_proximal_minimizer(anchor, data, eta)
        worst = max(worst, float(np.max(np.abs(closed_form.weights - numeric.weights))))
    return worst <= 1e-6, f"max parameter gap {worst:.2e} over 20 instances"


def check_tree_oracle(settings: VerifySettings) -> Tuple[bool, str]:
    rng = random_stream(settings.seed, _TREE_CHECK_STREAM)
    failures = 0
    for _ in range(50):
        count, n_features, max_depth = int(rng.integers(2, 13)), int(rng.integers(1, 3)), int(rng.integers(1, 3))
        # one decimal keeps ties among feature values
        features = np.round(rng.uniform(-1, 1, (count, n_features)), 1)
        labels = rng.standard_normal(count)
        weights = rng.uniform(0.5, 2.0, count)
        tree = fit_tree_arrays(features, labels, weights, max_depth=max_depth)
        if not greedy_splits_are_optimal(tree, features, labels, weights, max_depth=max_depth):
            failures += 1
    return failures == 0, f"{50 - failures}/50 micro-datasets match exhaustive enumeration"


def check_convergence(settings: VerifySettings) -> Tuple[bool, str]:
    traces = _Experiment(DM_SWEEP, [0.2, 10], settings).run()["alg1"]
    low_dim, high_dim = traces
    first_rounds = [rounds_to_threshold(trace, 1e-3) for trace in low_dim]
    converged = sum(1 for first in first_rounds if first is not None and first <= 300)
    low_rounds = rounds_to_threshold(MetricTrace.average(low_dim), 1e-1)
    high_rounds = rounds_to_threshold(MetricTrace.average(high_dim), 1e-1)
    slower = low_rounds is not None and (high_rounds is None or high_rounds > low_rounds)
    return (converged >= _required_seeds(len(low_dim)) and slower,
            f"d/m=0.2 reached 1e-3 within 300 rounds in {converged}/{len(low_dim)} seeds; "
            f"rounds to 1e-1: d/m=0.2 -> {low_rounds}, d/m=10 -> {high_rounds}")


def check_noise_monotonicity(settings: VerifySettings) -> Tuple[bool, str]:
    noise_levels = [0.05, 0.1, 0.2, 0.5, 1]
    finals = [_final_averaged(traces) for traces in _Experiment(NOISE_SWEEP, noise_levels, settings).run()["alg1"]]
    return bool(np.all(np.diff(finals) >= 0)), "final MSE by sigma: " + ", ".join(f"{v:.3g}" for v in finals)


def check_candidate_count(settings: VerifySettings) -> Tuple[bool, str]:
    small, large = (_final_averaged(traces) for traces in _Experiment(SUBSET_SWEEP, [5, 20], settings).run()["alg1"])
    return small >= 10 * large, f"final MSE S=5: {small:.3g}, S=20: {large:.3g}"


def check_oracle_comparability(settings: VerifySettings) -> Tuple[bool, str]:
    traces = _Experiment(ORACLE_COMPARE, [2], settings).run()
    ours, oracle = _final_averaged(traces["alg1"][0]), _final_averaged(traces["oracle"][0])
    return (within_factor(ours, oracle, factor=2.0),
            f"final MSE peer selection: {ours:.3g}, cluster oracle: {oracle:.3g} "
            f"(both count as converged at or below {CONVERGED_MSE_FLOOR:g})")


def check_ifca_well_specified(settings: VerifySettings) -> Tuple[bool, str]:
    traces = _Experiment(IFCA_COMPARE, [0.2], settings).run()
    seeds = list(range(settings.seed, settings.seed + settings.n_seeds))
    reached = {method: seeds_reaching(traces[method][0], seeds, 1e-2) for method in ("alg1", "ifca")}
    for method, good in reached.items():
        stuck = sorted(set(seeds) - set(good))
        if stuck:
            # e.g. an IFCA initialization that sends every device to one model
            logger.warning(f"{method} stayed above 1e-2 for seed(s) {stuck}")
    required = _required_seeds(len(seeds))
    return (all(len(good) >= required for good in reached.values()),
            f"seeds reaching 1e-2 (need {required}/{len(seeds)}): peer selection {len(reached['alg1'])}, "
            f"IFCA {len(reached['ifca'])}")


def check_ifca_misspecified(settings: VerifySettings) -> Tuple[bool, str]:
    ratios = [0.2, 2, 5]
    traces = _Experiment(IFCA_MISSPECIFIED, ratios, settings, ifca=IfcaConfig(k_assumed=2, rounds=settings.rounds)).run()
    pairs = [(_final_averaged(ours), _final_averaged(ifca)) for ours, ifca in zip(traces["alg1"], traces["ifca"])]
    return (all(ours < ifca for ours, ifca in pairs),
            "; ".join(f"d/m={ratio:g}: {ours:.3g} vs IFCA {ifca:.3g}" for ratio, (ours, ifca) in zip(ratios, pairs)))


def check_online(settings: VerifySettings) -> Tuple[bool, str]:
    ratios = [0.2, 1, 2]
    traces = _Experiment(ONLINE, ratios, settings).run()["alg1_online"]
    reached = [rounds_to_threshold(MetricTrace.average(per_seed), 1e-1) for per_seed in traces]
    return (all(value is not None for value in reached),
            "rounds to 1e-1: " + ", ".join(f"d/m={ratio:g} -> {value}" for ratio, value in zip(ratios, reached)))


def check_tree_agnostic(settings: VerifySettings) -> Tuple[bool, str]:
    ratios = [0.2, 1, 2, 5, 10]
    traces = _Experiment(TREE_AGNOSTIC, ratios, settings, rounds=settings.tree_rounds).run()
    ours = [_final_averaged(per_seed) for per_seed in traces["alg2"]]
    local = [_final_averaged(per_seed) for per_seed in traces["local_only"]]
    beats_local = all(o <= l for ratio, o, l in zip(ratios, ours, local) if ratio >= 1)
    near_oracle = all(o >= 0.8 for o in ours)
    return (beats_local and near_oracle,
            f"after {settings.tree_rounds} rounds (harness default {DEFAULT_ROUNDS}): "
            + "; ".join(f"d/m={ratio:g}: {o:.3g} vs local {l:.3g}" for ratio, o, l in zip(ratios, ours, local)))


def check_selection_accuracy(settings: VerifySettings) -> Tuple[bool, str]:
    accuracies = []
    for seed in range(settings.seed, settings.seed + settings.n_seeds):
        federation = generate_federation(SyntheticSpec.with_equal_clusters(n_devices=100, samples_per_device=10,
                                                                           dim=2, seed=seed))
        result = run_algorithm1(federation, Alg1Config(rounds=settings.rounds, seed=seed))
        accuracies.append(selection_accuracy(result.chosen_devices, result.selection_rounds, federation.truth,
                                             target_device=0, burn_in=20))
    mean_accuracy = float(np.mean(accuracies))
    return mean_accuracy >= 0.9, f"post burn-in selections in the true cluster: {mean_accuracy:.1%}"


def check_determinism(settings: VerifySettings) -> Tuple[bool, str]:
    config_kwargs = dict(kind=DM_SWEEP, seed=settings.seed, n_seeds=settings.n_seeds,
                         algorithm1=Alg1Config(rounds=settings.rounds))
    with tempfile.TemporaryDirectory() as tmp:
        outputs = []
        for run_index, workers in enumerate((1, 1, max(2, settings.n_seeds * 5))):
            output_path = Path(tmp) / f"run_{run_index}"
            ExperimentController(ExperimentConfig(workers=workers, **config_kwargs), output_path=output_path).run()
            outputs.append(output_path)
        names = sorted(path.relative_to(outputs[0]) for path in outputs[0].rglob("*.csv"))
        identical = all(filecmp.cmp(outputs[0] / name, other / name, shallow=False)
                        for other in outputs[1:] for name in names)
    return identical, f"{len(names)} CSV files compared across two serial runs and one parallel run"


ACCEPTANCE_CHECKS: List[Tuple[int, str, Callable[[VerifySettings], Tuple[bool, str]]]] = [
    (1, "gradient matches finite differences", check_gradient_oracle),
    (2, "proximal step matches numeric minimizer", check_proximal_oracle),
    (3, "greedy tree splits match exhaustive search", check_tree_oracle),
    (4, "convergence and dimension effect", check_convergence),
    (5, "final MSE nondecreasing in noise", check_noise_monotonicity),
    (6, "candidate set size effect", check_candidate_count),
    (7, "comparable to cluster oracle sampling", check_oracle_comparability),
    (8, "well-specified IFCA comparison", check_ifca_well_specified),
    (9, "misspecified IFCA comparison", check_ifca_misspecified),
    (10, "online variant convergence", check_online),
    (11, "agnostic trees vs local and oracle", check_tree_agnostic),
    (12, "selection accuracy", check_selection_accuracy),
    (13, "byte-identical reruns", check_determinism),
]


def run_acceptance_suite(settings: Optional[VerifySettings] = None,
                         only: Optional[Sequence[int]] = None) -> List[CheckResult]:
    settings = settings or VerifySettings()
    results = []
    for number, name, check in ACCEPTANCE_CHECKS:
        if only is not None and number not in only:
            continue
        logger.info(f"Acceptance check {number}: {name}...")
        started = time.perf_counter()
        try:
            passed, detail = check(settings)
        except Exception as e:
            logger.error(f"Acceptance check {number} raised: {e}")
            passed, detail = False, f"error: {e}"
        result = CheckResult(number=number, name=name, passed=passed, detail=detail,
                             seconds=time.perf_counter() - started)
        if result.passed:
            logger.success(f"Check {number} passed ({result.seconds:.1f}s): {detail}")
        else:
            logger.warning(f"Check {number} FAILED ({result.seconds:.1f}s): {detail}")
        results.append(result)
    return results


def format_results_table(results: Sequence[CheckResult]) -> str:
    name_width = max([len(result.name) for result in results] + [len("check")])
    lines = [f"{'#':>3}  {'check':<{name_width}}  {'result':<6}  {'time':>7}  detail",
             f"{'-' * 3}  {'-' * name_width}  {'-' * 6}  {'-' * 7}  {'-' * 6}"]
    for result in results:
        lines.append(f"{result.number:>3}  {result.name:<{name_width}}  {'PASS' if result.passed else 'FAIL':<6}  "
                     f"{result.seconds:>6.1f}s  {result.detail}")
    passed = sum(result.passed for result in results)
    lines.append(f"\n{passed}/{len(results)} checks passed")
    return "\n".join(lines)
