from .fit_tree import Split, find_best_split, fit_tree, fit_tree_arrays
from .tree_utilities import count_leaves, format_tree, predict_tree, tree_depth, weighted_sse

__all__ = [
    "Split",
    "count_leaves",
    "find_best_split",
    "fit_tree",
    "fit_tree_arrays",
    "format_tree",
    "predict_tree",
    "tree_depth",
    "weighted_sse",
]
