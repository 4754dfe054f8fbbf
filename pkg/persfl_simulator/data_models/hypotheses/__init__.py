from .hypothesis import Hypothesis
from .linear_params import LinearParams
from .tree_node import TreeNode, WeightedSample

__all__ = ["Hypothesis", "LinearParams", "TreeNode", "WeightedSample"]
