from typing import Protocol, Union, runtime_checkable

import numpy as np


@runtime_checkable
class Hypothesis(Protocol):
    """A deterministic predictor mapping a feature vector (or the rows of a matrix) to real labels."""

    def predict(self, features: np.ndarray) -> Union[float, np.ndarray]:
        ...
