from .linear_model import (loss_gradient, min_norm_least_squares, predict, proximal_least_squares,
                           ridge_least_squares, squared_loss, weighted_least_squares)

__all__ = [
    "loss_gradient",
    "min_norm_least_squares",
    "predict",
    "proximal_least_squares",
    "ridge_least_squares",
    "squared_loss",
    "weighted_least_squares",
]
