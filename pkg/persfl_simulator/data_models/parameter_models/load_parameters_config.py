import json
from dataclasses import fields
from pathlib import Path
from typing import Any, Dict, List, Union

from persfl_simulator.system.exceptions import ConfigurationError
from .parameter_models import (Alg1Config, Alg2Config, ExperimentConfig, IfcaConfig, ModelConfig,
                               SyntheticSettings)

_SECTIONS = {
    "synthetic": SyntheticSettings,
    "algorithm1": Alg1Config,
    "algorithm2": Alg2Config,
    "ifca": IfcaConfig,
}


def _reject_unknown_keys(cls, data: Dict[str, Any], section: str):
    if not isinstance(data, dict):
        raise ConfigurationError(f"Section `{section}` must be a mapping, got {type(data).__name__}")
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigurationError(f"Unknown key(s) {unknown} in section `{section}`; allowed keys: {sorted(known)}")


def parse_experiment_config(data: Dict[str, Any]) -> ExperimentConfig:
    data = dict(data)
    _reject_unknown_keys(ExperimentConfig, data, "experiment")
    if "kind" not in data:
        raise ConfigurationError("Experiment config is missing the required key `kind`")

    for key, cls in _SECTIONS.items():
        if key not in data:
            continue
        section = dict(data[key]) if isinstance(data[key], dict) else data[key]
        _reject_unknown_keys(cls, section, key)
        if cls is Alg2Config and "model" in section:
            _reject_unknown_keys(ModelConfig, section["model"], "algorithm2.model")
            section["model"] = ModelConfig(**section["model"])
        try:
            data[key] = cls(**section)
        except TypeError as e:
            raise ConfigurationError(f"Invalid section `{key}`: {e}") from e
    try:
        return ExperimentConfig(**data)
    except TypeError as e:
        raise ConfigurationError(f"Invalid experiment `{data['kind']}`: {e}") from e


def load_experiment_configs(filename: Union[str, Path]) -> List[ExperimentConfig]:
    """Read a JSON file holding either one experiment or `{"experiments": [...]}`."""
    path = Path(filename)
    if not path.exists():
        raise ConfigurationError(f"Config file {path} does not exist")
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"Config file {path} is not valid JSON: {e}") from e

    if isinstance(data, dict) and "experiments" in data:
        if set(data) != {"experiments"} or not isinstance(data["experiments"], list):
            raise ConfigurationError("A batch config must hold only an `experiments` list")
        return [parse_experiment_config(entry) for entry in data["experiments"]]
    return [parse_experiment_config(data)]


if __name__ == "__main__":
    from pprint import pprint as print

    default_parameters_filename = Path(__file__).parent / "default_parameters.json"
    print(load_experiment_configs(default_parameters_filename))
