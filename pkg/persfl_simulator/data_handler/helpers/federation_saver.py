import json
import logging
from dataclasses import asdict
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np

from persfl_simulator.data_models.federation import Federation
from persfl_simulator.system.constants import FEDERATION_FLOAT_FORMAT, FEDERATION_README_FILENAME, MANIFEST_FILENAME

logger = logging.getLogger(__name__)


def device_filename(device: int) -> str:
    return f"device_{device:03d}.csv"


def feature_header(dim: int) -> str:
    return ",".join([f"x{index}" for index in range(dim)] + ["y"])


class FederationSaver:
    def __init__(self, federation: Federation):
        self.federation = federation

    def save(self, save_path: Union[str, Path]) -> Path:
        save_path = Path(save_path)
        try:
            save_path.mkdir(parents=True, exist_ok=True)
            logger.info(f"Saving federation to {save_path}")

            self._save_data_readme(save_path)
            self._save_manifest(save_path)
            self._save_csv(save_path)

            logger.success(f"Saved {self.federation.n_devices} device datasets to {save_path}")
            return save_path
        except OSError as e:
            logger.error(f"Failed to save federation to disk: {e}")
            raise

    def manifest(self) -> Dict[str, Any]:
        spec = asdict(self.federation.spec)
        spec["cluster_sizes"] = list(spec["cluster_sizes"])
        spec["param_range"] = list(spec["param_range"])
        return {
            "spec": spec,
            "device_to_cluster": self.federation.truth.device_to_cluster.tolist(),
            "cluster_params": self.federation.truth.cluster_params.tolist(),
            "device_files": [device_filename(device) for device in range(self.federation.n_devices)],
        }

    def _save_manifest(self, save_path: Path):
        manifest_path = save_path / MANIFEST_FILENAME
        # json writes floats with repr, so cluster parameters survive exactly
        manifest_path.write_text(json.dumps(self.manifest(), indent=4, sort_keys=True), encoding="utf-8")
        logger.debug(f"Saved federation manifest to {manifest_path}")

    def _save_csv(self, save_path: Path):
        header = feature_header(self.federation.dim)
        for device, dataset in enumerate(self.federation.datasets):
            table = np.column_stack([dataset.features, dataset.labels])
            np.savetxt(str(save_path / device_filename(device)), table, delimiter=",",
                       fmt=FEDERATION_FLOAT_FORMAT, header=header, comments="")
        logger.debug(f"Saved {self.federation.n_devices} csv files to {save_path}")

    def _save_data_readme(self, save_path: Path):
        readme_path = save_path / FEDERATION_README_FILENAME
        readme_path.write_text(DATA_README_TEXT, encoding="utf-8")


def save_federation(federation: Federation, save_path: Union[str, Path]) -> Path:
    return FederationSaver(federation).save(save_path)


DATA_README_TEXT = """
# Synthetic federation
This folder holds one local dataset per device of a clustered linear-regression federation.

### `manifest.json`
The generating parameters (`spec`), the true cluster of every device (`device_to_cluster`),
the parameter vector shared by each cluster (`cluster_params`) and the list of device files.

### `device_XXX.csv`
One file per device. The header is `x0,...,x{d-1},y`; every row is one labeled sample.

To load it back in python:
```python
from persfl_simulator.data_handler import load_federation
federation = load_federation("path/to/this/folder")
print(federation)
```
"""
