import json
import logging
from pathlib import Path
from typing import Union

import numpy as np

from persfl_simulator.data_models.federation import ClusterAssignment, Federation, LocalDataset, SyntheticSpec
from persfl_simulator.system.constants import MANIFEST_FILENAME
from persfl_simulator.system.exceptions import ConfigurationError

logger = logging.getLogger(__name__)


def load_federation(load_path: Union[str, Path]) -> Federation:
    """Read a federation directory written by `save_federation`."""
    load_path = Path(load_path)
    manifest_path = load_path / MANIFEST_FILENAME
    if not manifest_path.exists():
        raise ConfigurationError(f"No {MANIFEST_FILENAME} found in {load_path}")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        spec = SyntheticSpec(**manifest["spec"])
        truth = ClusterAssignment(device_to_cluster=manifest["device_to_cluster"],
                                  cluster_params=manifest["cluster_params"])
        device_files = manifest["device_files"]
    except (json.JSONDecodeError, KeyError, TypeError) as e:
        raise ConfigurationError(f"Malformed federation manifest {manifest_path}: {e}") from e

    datasets = []
    for filename in device_files:
        table = np.loadtxt(str(load_path / filename), delimiter=",", skiprows=1, ndmin=2)
        if not table.shape[1] == spec.dim + 1:
            raise ConfigurationError(f"{filename} has {table.shape[1]} columns, expected {spec.dim + 1}")
        datasets.append(LocalDataset(features=table[:, :-1], labels=table[:, -1]))

    logger.info(f"Loaded federation with {len(datasets)} devices from {load_path}")
    return Federation(datasets=tuple(datasets), truth=truth, spec=spec)
