from typing import Union

import numpy as np

from persfl_simulator.data_models.hypotheses import TreeNode


def predict_tree(tree: TreeNode, features: np.ndarray) -> Union[float, np.ndarray]:
    return tree.predict(features)


def tree_depth(tree: TreeNode) -> int:
    if tree.is_leaf:
        return 0
    return 1 + max(tree_depth(tree.left), tree_depth(tree.right))


def count_leaves(tree: TreeNode) -> int:
    if tree.is_leaf:
        return 1
    return count_leaves(tree.left) + count_leaves(tree.right)


def weighted_sse(tree: TreeNode, features: np.ndarray, labels: np.ndarray, weights: np.ndarray = None) -> float:
    residuals = np.asarray(labels, dtype=float) - tree.predict(np.atleast_2d(features))
    weights = np.ones_like(residuals) if weights is None else np.asarray(weights, dtype=float)
    return float(np.sum(weights * residuals ** 2))


def format_tree(tree: TreeNode, indent: str = "    ") -> str:
    """Nested text form, one node per line, for debugging."""
    lines = []

    def _append(node: TreeNode, depth: int):
        prefix = indent * depth
        if node.is_leaf:
            lines.append(f"{prefix}leaf value={node.value:.6g}")
            return
        lines.append(f"{prefix}x[{node.split_feature}] < {node.split_threshold:.6g} (value={node.value:.6g})")
        _append(node.left, depth + 1)
        _append(node.right, depth + 1)

    _append(tree, 0)
    return "\n".join(lines)
