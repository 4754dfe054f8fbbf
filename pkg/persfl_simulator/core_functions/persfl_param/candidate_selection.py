from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from persfl_simulator.data_models.federation import Federation
from persfl_simulator.system.exceptions import ConfigurationError


@dataclass(frozen=True)
class SelectionRecord:
    """Audit entry for one round: who was probed, what each probe earned, and who was adopted."""
    round: int
    candidates: Tuple[int, ...]
    rewards: Tuple[float, ...]
    chosen: int
    target_loss_after: float

    @property
    def best_reward(self) -> float:
        return max(self.rewards)

    @property
    def improved(self) -> bool:
        return self.best_reward >= 0


def validate_candidate_setup(federation: Federation, target_device: int, candidate_count: int):
    if federation.n_devices < 2:
        raise ConfigurationError(f"Peer selection needs at least 2 devices, got {federation.n_devices}")
    federation.validate_device(target_device)
    if not 1 <= candidate_count <= federation.n_devices - 1:
        raise ConfigurationError(
            f"candidate_count={candidate_count} must lie in [1, {federation.n_devices - 1}] "
            f"for a federation of {federation.n_devices} devices")


def sample_candidates(rng: np.random.Generator, n_devices: int, target_device: int, count: int) -> Tuple[int, ...]:
    """Distinct peers drawn uniformly from every device except the target, in ascending order."""
    peers = np.delete(np.arange(n_devices), target_device)
    return tuple(sorted(int(device) for device in rng.choice(peers, size=count, replace=False)))


def select_candidate(candidates: Sequence[int], target_losses: Sequence[float]) -> int:
    """Position of the candidate with the smallest target loss; ties go to the lowest device index."""
    order = np.lexsort((np.asarray(candidates), np.asarray(target_losses, dtype=float)))
    return int(order[0])
