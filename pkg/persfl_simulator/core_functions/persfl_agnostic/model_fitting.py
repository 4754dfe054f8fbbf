from typing import Optional

import numpy as np

from persfl_simulator.core_functions.linmodel import weighted_least_squares
from persfl_simulator.core_functions.regtree import fit_tree_arrays
from persfl_simulator.data_models.federation import LocalDataset
from persfl_simulator.data_models.hypotheses import Hypothesis
from persfl_simulator.data_models.parameter_models import ModelConfig, ModelKind


def fit_hypothesis(features: np.ndarray,
                   labels: np.ndarray,
                   model: ModelConfig,
                   weights: Optional[np.ndarray] = None) -> Hypothesis:
    """Weighted fit of the configured model class; unweighted when `weights` is None."""
    if weights is None:
        weights = np.ones(np.shape(labels)[0])
    if model.kind is ModelKind.TREE:
        return fit_tree_arrays(features, labels, weights, max_depth=model.max_depth, min_leaf=model.min_leaf)
    return weighted_least_squares(features, labels, weights)


def hypothesis_loss(hypothesis: Hypothesis, data: LocalDataset) -> float:
    """Empirical squared loss (1/m) sum (y - h(x))^2 of any hypothesis."""
    residuals = data.labels - np.asarray(hypothesis.predict(data.features), dtype=float)
    return float(residuals @ residuals) / data.sample_size
