import logging
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from persfl_simulator.core_functions.metrics import MetricTrace
from persfl_simulator.system.constants import CSV_FLOAT_FORMAT

logger = logging.getLogger(__name__)


def traces_to_table(traces: Sequence[MetricTrace]) -> np.ndarray:
    """Column 0 holds the iteration k, column j the values of the j-th trace."""
    traces = list(traces)
    if len(traces) == 0:
        raise ValueError("No traces to tabulate")
    for trace in traces[1:]:
        if not np.array_equal(trace.rounds, traces[0].rounds):
            raise ValueError(f"Trace `{trace.label}` does not share the rounds of `{traces[0].label}`")
    return np.column_stack([traces[0].rounds] + [trace.values for trace in traces])


def save_traces_csv(csv_path: Union[str, Path], traces: Sequence[MetricTrace]) -> Path:
    csv_path = Path(csv_path)
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    header = ",".join(["k"] + [trace.label for trace in traces])
    np.savetxt(str(csv_path), traces_to_table(traces), delimiter=",", fmt=CSV_FLOAT_FORMAT,
               header=header, comments="")
    logger.debug(f"Saved {len(traces)} traces to {csv_path}")
    return csv_path


def load_traces_csv(csv_path: Union[str, Path]) -> Sequence[MetricTrace]:
    csv_path = Path(csv_path)
    with open(csv_path, "r", encoding="utf-8") as f:
        labels = f.readline().strip().split(",")[1:]
    table = np.loadtxt(str(csv_path), delimiter=",", skiprows=1, ndmin=2)
    return [MetricTrace(label=label, rounds=table[:, 0].astype(int), values=table[:, column + 1])
            for column, label in enumerate(labels)]
