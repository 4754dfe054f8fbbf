from dataclasses import dataclass
from typing import TYPE_CHECKING, Dict, List

import numpy as np

if TYPE_CHECKING:
    from .federation import Federation

STAT_COLUMNS = ("devices", "samples", "label_mean", "label_std", "feature_var", "true_param_norm")


def calculate_stats(features: np.ndarray, labels: np.ndarray) -> Dict[str, float]:
    if labels.size == 0:
        return {"samples": 0, "label_mean": np.nan, "label_std": np.nan, "feature_var": np.nan}
    return {"samples": int(labels.size),
            "label_mean": float(np.mean(labels)),
            "label_std": float(np.std(labels)),
            "feature_var": float(np.var(features))}


@dataclass
class FederationStats:
    """Per-cluster summary of a generated federation, pooled over each cluster's devices."""
    n_devices: int
    dim: int
    noise_std: float
    cluster_stats: Dict[int, Dict[str, float]]

    @classmethod
    def from_federation(cls, federation: "Federation") -> "FederationStats":
        cluster_stats = {}
        for cluster in range(federation.truth.n_clusters):
            pooled = federation.pooled_cluster_data(cluster)
            cluster_stats[cluster] = {
                "devices": len(federation.truth.members(cluster)),
                **calculate_stats(pooled.features, pooled.labels),
                "true_param_norm": float(np.linalg.norm(federation.truth.cluster_params[cluster])),
            }
        return cls(n_devices=federation.n_devices,
                   dim=federation.dim,
                   noise_std=federation.spec.noise_std,
                   cluster_stats=cluster_stats)

    def table_lines(self) -> List[str]:
        lines = ["cluster " + " ".join(f"{column:>15}" for column in STAT_COLUMNS)]
        for cluster, stats in self.cluster_stats.items():
            cells = [f"{stats[column]:>15d}" if isinstance(stats[column], int) else f"{stats[column]:>15.3f}"
                     for column in STAT_COLUMNS]
            lines.append(f"{cluster:>7} " + " ".join(cells))
        return lines

    def __str__(self):
        header = f"{self.n_devices} devices, d={self.dim}, noise std {self.noise_std:g}"
        return "\n".join([header, *self.table_lines()])
