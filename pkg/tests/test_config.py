import json
from pathlib import Path

import pytest

from persfl_simulator.data_models.parameter_models import (ExperimentConfig, InitMode, ModelKind,
                                                           load_experiment_configs, parse_experiment_config)
from persfl_simulator.system.constants import DEFAULT_SWEEP_VALUES, EXPERIMENT_KINDS
from persfl_simulator.system.exceptions import ConfigurationError

DEFAULT_PARAMETERS = (Path(__file__).parents[1] / "persfl_simulator" / "data_models" / "parameter_models"
                      / "default_parameters.json")


def test_packaged_defaults_parse():
    (config,) = load_experiment_configs(DEFAULT_PARAMETERS)
    assert config.kind == "dm_sweep"
    assert config.algorithm1.eta == 0.05
    assert config.algorithm1.init is InitMode.ZERO
    assert config.algorithm2.model.kind is ModelKind.TREE
    assert config.algorithm2.model.max_depth == 3
    assert config.sweep_values == [0.2, 1, 2, 5, 10]


def test_every_kind_has_default_sweep_values():
    for kind in EXPERIMENT_KINDS:
        assert ExperimentConfig(kind=kind).sweep_values == DEFAULT_SWEEP_VALUES[kind]


def test_unknown_kind_names_the_valid_kinds():
    with pytest.raises(ConfigurationError) as error:
        ExperimentConfig(kind="fig9")
    assert all(kind in str(error.value) for kind in EXPERIMENT_KINDS)


@pytest.mark.parametrize("data", [
    {"kind": "dm_sweep", "rounds": 10},
    {"kind": "dm_sweep", "algorithm1": {"learning_rate": 0.1}},
    {"kind": "tree_agnostic", "algorithm2": {"model": {"depth": 3}}},
    {"algorithm1": {}},
])
def test_unknown_or_missing_keys_are_errors(data):
    with pytest.raises(ConfigurationError):
        parse_experiment_config(data)


@pytest.mark.parametrize("data", [
    {"kind": "dm_sweep", "sweep_values": []},
    {"kind": "dm_sweep", "sweep_values": [-1.0]},
    {"kind": "subset_sweep", "sweep_values": [5, 150]},
    {"kind": "subset_sweep", "sweep_values": [2.5]},
    {"kind": "dm_sweep", "algorithm1": {"eta": 0}},
    {"kind": "dm_sweep", "n_seeds": 0},
    {"kind": "ifca_compare", "ifca": {"k_assumed": 0}},
    {"kind": "dm_sweep", "n_seeds": "5"},
    {"kind": "dm_sweep", "workers": 2.0},
    {"kind": "dm_sweep", "algorithm1": {"eta": "0.1"}},
    {"kind": "dm_sweep", "synthetic": {"n_devices": 0}},
    {"kind": "dm_sweep", "synthetic": {"samples_per_device": 0}},
    {"kind": "dm_sweep", "synthetic": {"dim_ratio": -1}},
    {"kind": "noise_sweep", "synthetic": {"noise_std": -0.1}},
    {"kind": "dm_sweep", "synthetic": {"n_devices": 10, "cluster_sizes": [5, 4]}},
    {"kind": "dm_sweep", "synthetic": {"param_range": [5, -5]}},
])
def test_invalid_values_are_errors(data):
    with pytest.raises(ConfigurationError):
        parse_experiment_config(data)


def test_batch_file(tmp_path):
    path = tmp_path / "batch.json"
    path.write_text(json.dumps({"experiments": [
        {"kind": "noise_sweep", "sweep_values": [0.1, 0.2]},
        {"kind": "online", "online_batch_size": 5, "synthetic": {"n_devices": 20}},
    ]}))
    first, second = load_experiment_configs(path)
    assert first.sweep_parameter == "noise_std"
    assert second.online_batch_size == 5
    assert second.synthetic.n_devices == 20


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(ConfigurationError):
        load_experiment_configs(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(ConfigurationError):
        load_experiment_configs(broken)
