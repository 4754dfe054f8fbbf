import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, is_dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

import persfl_simulator
from persfl_simulator.core_functions.experiments import (experiment_methods, noise_std_source, resolve_algorithm1,
                                                         resolve_algorithm2, resolve_ifca, resolve_synthetic_spec,
                                                         run_seeds, run_setting, sweep_label)
from persfl_simulator.core_functions.metrics import MetricTrace
from persfl_simulator.data_handler import save_traces_csv
from persfl_simulator.data_models.parameter_models import ExperimentConfig
from persfl_simulator.system.constants import DEFAULT_OUTPUT_DIR, ONLINE, OUTPUT_DIR_ENV_VAR, PER_SEED_DIRNAME

logger = logging.getLogger(__name__)

# which resolved config section drives each method
_METHOD_SECTIONS = {
    "alg1": "algorithm1",
    "oracle": "algorithm1",
    "alg1_online": "algorithm1",
    "ifca": "ifca",
    "alg2": "algorithm2",
    "local_only": "algorithm2",
}


def resolve_output_path(output_path: Optional[Union[str, Path]] = None) -> Path:
    """Explicit path, else the PERSFL_OUTPUT_DIR environment variable, else ./results."""
    if output_path is not None:
        return Path(output_path)
    return Path(os.environ.get(OUTPUT_DIR_ENV_VAR) or DEFAULT_OUTPUT_DIR)


def to_jsonable(value: Any) -> Any:
    if is_dataclass(value):
        return to_jsonable(asdict(value))
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    return value


@dataclass(frozen=True)
class ExperimentOutput:
    kind: str
    # method -> one seed-averaged trace per sweep value, in config order
    traces: Dict[str, Tuple[MetricTrace, ...]]
    manifest: Dict[str, Any]
    files: Tuple[Path, ...]


class ExperimentController:
    """
    Runs one experiment kind across its sweep values and seeds, then writes the CSVs and the manifest.
    """

    def __init__(self, config: ExperimentConfig, output_path: Optional[Union[str, Path]] = None):
        self.config = config
        self.output_path = resolve_output_path(output_path if output_path is not None else config.output_path)
        self.seeds = run_seeds(config)
        self.methods = experiment_methods(config.kind)
        self.labels = [sweep_label(config, value) for value in config.sweep_values]
        # method -> [sweep value][seed]
        self._per_seed_traces: Optional[Dict[str, List[List[MetricTrace]]]] = None

    @property
    def per_seed_traces(self) -> Dict[str, List[List[MetricTrace]]]:
        if self._per_seed_traces is None:
            raise ValueError("Settings have not been run yet!")
        return self._per_seed_traces

    @property
    def averaged_traces(self) -> Dict[str, Tuple[MetricTrace, ...]]:
        return {method: tuple(MetricTrace.average(seed_traces, label=label)
                              for seed_traces, label in zip(self.per_seed_traces[method], self.labels))
                for method in self.methods}

    def run_all_settings(self):
        jobs = [(value, seed) for value in self.config.sweep_values for seed in self.seeds]
        logger.info(f"Running `{self.config.kind}`: {len(self.config.sweep_values)} sweep value(s) x "
                    f"{len(self.seeds)} seed(s), {self.config.workers} worker(s)")
        try:
            if self.config.workers == 1:
                results = [run_setting(self.config, value, seed) for value, seed in jobs]
            else:
                with ThreadPoolExecutor(max_workers=self.config.workers) as executor:
                    # map yields in submission order, whatever the completion order
                    results = list(executor.map(lambda job: run_setting(self.config, *job), jobs))
        except Exception as e:
            logger.error(f"Failed while running `{self.config.kind}`: {e}")
            raise

        n_seeds = len(self.seeds)
        self._per_seed_traces = {
            method: [[results[value_index * n_seeds + seed_index][method] for seed_index in range(n_seeds)]
                     for value_index in range(len(self.config.sweep_values))]
            for method in self.methods
        }

    def csv_filename(self, method: str) -> str:
        return f"{self.config.kind}_{method}.csv"

    def per_seed_csv_filename(self, method: str, seed: int) -> str:
        return f"{self.config.kind}_{method}_seed{seed}.csv"

    def manifest_filename(self) -> str:
        return f"{self.config.kind}_manifest.json"

    def save_traces(self) -> List[Path]:
        saved = []
        try:
            for method, traces in self.averaged_traces.items():
                saved.append(save_traces_csv(self.output_path / self.csv_filename(method), traces))
                for seed_index, seed in enumerate(self.seeds):
                    seed_traces = [MetricTrace(label=label, rounds=per_value[seed_index].rounds,
                                               values=per_value[seed_index].values)
                                   for per_value, label in zip(self.per_seed_traces[method], self.labels)]
                    saved.append(save_traces_csv(
                        self.output_path / PER_SEED_DIRNAME / self.per_seed_csv_filename(method, seed), seed_traces))
        except OSError as e:
            logger.error(f"Failed to save traces to {self.output_path}: {e}")
            raise
        return saved

    def build_manifest(self) -> Dict[str, Any]:
        """Every resolved parameter of the run; nothing that depends on timing or parallelism."""
        config = to_jsonable(self.config)
        config.pop("workers")
        config.pop("output_path")

        sections = sorted({_METHOD_SECTIONS[method] for method in self.methods})
        settings = []
        for value, label in zip(self.config.sweep_values, self.labels):
            synthetic = to_jsonable(resolve_synthetic_spec(self.config, value, self.seeds[0]))
            synthetic.pop("seed")
            resolved = {"algorithm1": resolve_algorithm1(self.config, value, self.seeds[0]),
                        "algorithm2": resolve_algorithm2(self.config, self.seeds[0]),
                        "ifca": resolve_ifca(self.config, self.seeds[0])}
            setting = {"label": label, "sweep_value": value, "synthetic": synthetic}
            for section in sections:
                setting[section] = to_jsonable(resolved[section])
                setting[section].pop("seed")
            settings.append(setting)

        manifest = {
            "kind": self.config.kind,
            "package_version": persfl_simulator.__version__,
            "sweep_parameter": self.config.sweep_parameter,
            "sweep_values": to_jsonable(self.config.sweep_values),
            "labels": self.labels,
            "seeds": self.seeds,
            "seed_usage": "each run seed drives the federation and every algorithm of that run",
            "noise_std_source": noise_std_source(self.config),
            "settings": settings,
            "config": config,
            "outputs": {method: self.csv_filename(method) for method in self.methods},
            "per_seed_outputs": {method: [f"{PER_SEED_DIRNAME}/{self.per_seed_csv_filename(method, seed)}"
                                          for seed in self.seeds]
                                 for method in self.methods},
        }
        if self.config.kind == ONLINE:
            manifest["online_batch_size"] = self.config.online_batch_size
        return manifest

    def save_manifest(self, manifest: Dict[str, Any]) -> Path:
        manifest_path = self.output_path / self.manifest_filename()
        try:
            self.output_path.mkdir(parents=True, exist_ok=True)
            manifest_path.write_text(json.dumps(manifest, indent=4, sort_keys=True), encoding="utf-8")
        except OSError as e:
            logger.error(f"Failed to save manifest to {manifest_path}: {e}")
            raise
        logger.debug(f"Saved manifest to {manifest_path}")
        return manifest_path

    def run(self, write: bool = True) -> ExperimentOutput:
        self.run_all_settings()
        manifest = self.build_manifest()
        files = []
        if write:
            files = self.save_traces()
            files.append(self.save_manifest(manifest))
            logger.success(f"Finished `{self.config.kind}`: wrote {len(files)} file(s) to {self.output_path}")
        return ExperimentOutput(kind=self.config.kind,
                                traces=self.averaged_traces,
                                manifest=manifest,
                                files=tuple(files))


def run_experiment(config: ExperimentConfig,
                   output_path: Optional[Union[str, Path]] = None,
                   write: bool = True) -> ExperimentOutput:
    return ExperimentController(config=config, output_path=output_path).run(write=write)
