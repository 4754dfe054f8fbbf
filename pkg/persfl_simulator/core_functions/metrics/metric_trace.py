from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np


@dataclass(frozen=True, eq=False)
class MetricTrace:
    """Metric values indexed by iteration number k for one experiment setting."""
    label: str
    rounds: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        rounds = np.array(self.rounds, dtype=int)
        values = np.array(self.values, dtype=float)
        if rounds.ndim != 1 or not rounds.shape == values.shape:
            raise ValueError(f"Trace `{self.label}`: rounds {rounds.shape} and values {values.shape} must be "
                             f"vectors of equal length")
        if np.any(np.diff(rounds) <= 0):
            raise ValueError(f"Trace `{self.label}`: rounds must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ValueError(f"Trace `{self.label}`: values must be finite")
        rounds.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "rounds", rounds)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_values(cls, label: str, values: Sequence[float]) -> "MetricTrace":
        return cls(label=label, rounds=np.arange(len(values)), values=np.asarray(values, dtype=float))

    @classmethod
    def average(cls, traces: Sequence["MetricTrace"], label: Optional[str] = None) -> "MetricTrace":
        """Pointwise mean of traces that share the same rounds (e.g. one per seed)."""
        traces = list(traces)
        if len(traces) == 0:
            raise ValueError("Cannot average an empty collection of traces")
        for trace in traces[1:]:
            if not np.array_equal(trace.rounds, traces[0].rounds):
                raise ValueError(f"Trace `{trace.label}` has different rounds than `{traces[0].label}`")
        return cls(label=label if label is not None else traces[0].label,
                   rounds=traces[0].rounds,
                   values=np.mean(np.vstack([trace.values for trace in traces]), axis=0))

    def scaled(self, factor: float, label: Optional[str] = None) -> "MetricTrace":
        return MetricTrace(label=label if label is not None else self.label,
                           rounds=self.rounds,
                           values=self.values * factor)

    @property
    def final_value(self) -> float:
        return float(self.values[-1])

    def __len__(self):
        return self.values.shape[0]
