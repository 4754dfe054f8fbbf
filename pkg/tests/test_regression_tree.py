import numpy as np
import pytest

from persfl_simulator.core_functions.regtree import (count_leaves, find_best_split, fit_tree, fit_tree_arrays,
                                                     format_tree, tree_depth, weighted_sse)
from persfl_simulator.core_functions.verification import exhaustive_best_gain, greedy_splits_are_optimal
from persfl_simulator.data_models.hypotheses import TreeNode, WeightedSample
from persfl_simulator.system.exceptions import ConfigurationError


def test_step_function_is_split_at_the_midpoint():
    features = np.array([[-2.0], [-1.0], [1.0], [2.0]])
    labels = np.array([1.0, 1.0, 3.0, 3.0])
    tree = fit_tree_arrays(features, labels, max_depth=1)

    assert tree.split_feature == 0
    assert tree.split_threshold == pytest.approx(0.0)
    assert tree.left.value == pytest.approx(1.0)
    assert tree.right.value == pytest.approx(3.0)
    np.testing.assert_allclose(tree.predict(features), labels)


def test_split_sends_threshold_ties_to_the_right():
    tree = fit_tree_arrays(np.array([[0.0], [1.0]]), np.array([0.0, 10.0]), max_depth=1)
    assert tree.predict(np.array([0.5])) == pytest.approx(10.0)
    assert tree.predict(np.array([0.4999])) == pytest.approx(0.0)


def test_depth_zero_gives_the_weighted_mean():
    tree = fit_tree_arrays(np.array([[0.0], [1.0]]), np.array([1.0, 4.0]), weights=np.array([2.0, 1.0]), max_depth=0)
    assert tree.is_leaf
    assert tree.value == pytest.approx(2.0)


def test_constant_labels_are_never_split(rng):
    tree = fit_tree_arrays(rng.standard_normal((10, 3)), np.full(10, 7.0), max_depth=3)
    assert tree.is_leaf
    assert tree.value == pytest.approx(7.0)


def test_min_leaf_is_respected(rng):
    features = rng.standard_normal((11, 2))
    tree = fit_tree_arrays(features, rng.standard_normal(11), max_depth=3, min_leaf=3)

    def leaf_sizes(node, rows):
        if node.is_leaf:
            return [rows.sum()]
        left = rows & (features[:, node.split_feature] < node.split_threshold)
        return leaf_sizes(node.left, left) + leaf_sizes(node.right, rows & ~left)

    assert min(leaf_sizes(tree, np.ones(11, dtype=bool))) >= 3


def test_equal_gain_prefers_the_lowest_feature():
    features = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
    split = find_best_split(features, np.array([0.0, 0.0, 5.0, 5.0]), np.ones(4))
    assert split.feature == 0
    assert split.threshold == pytest.approx(1.5)


def test_greedy_splits_match_exhaustive_search(rng):
    for _ in range(30):
        count = int(rng.integers(2, 13))
        features = np.round(rng.uniform(-1, 1, (count, 2)), 1)
        labels = rng.standard_normal(count)
        weights = rng.uniform(0.5, 2.0, count)
        tree = fit_tree_arrays(features, labels, weights, max_depth=2)
        assert greedy_splits_are_optimal(tree, features, labels, weights, max_depth=2)


def test_root_gain_equals_exhaustive_best(rng):
    features = np.round(rng.uniform(-1, 1, (12, 2)), 1)
    labels = rng.standard_normal(12)
    weights = np.ones(12)
    split = find_best_split(features, labels, weights)
    assert split.gain == pytest.approx(exhaustive_best_gain(features, labels, weights), rel=1e-9)


def test_doubling_all_weights_changes_nothing(rng):
    features, labels = rng.standard_normal((15, 3)), rng.standard_normal(15)
    weights = rng.uniform(0.5, 1.5, 15)
    once = fit_tree_arrays(features, labels, weights, max_depth=3)
    twice = fit_tree_arrays(features, labels, 2.0 * weights, max_depth=3)
    assert format_tree(once) == format_tree(twice)
    queries = rng.standard_normal((40, 3))
    assert np.array_equal(once.predict(queries), twice.predict(queries))


def test_weighted_samples_interface_matches_arrays(rng):
    features, labels = rng.standard_normal((8, 2)), rng.standard_normal(8)
    weights = rng.uniform(0.5, 1.5, 8)
    samples = [WeightedSample(features=x, label=y, weight=w) for x, y, w in zip(features, labels, weights)]
    assert format_tree(fit_tree(samples, max_depth=2)) == format_tree(fit_tree_arrays(features, labels, weights, 2))


def test_tree_helpers(rng):
    features, labels = rng.standard_normal((30, 2)), rng.standard_normal(30)
    tree = fit_tree_arrays(features, labels, max_depth=3)
    assert tree_depth(tree) <= 3
    assert 2 <= count_leaves(tree) <= 8
    assert weighted_sse(tree, features, labels) <= float(np.sum((labels - labels.mean()) ** 2))
    assert format_tree(tree).count("leaf") == count_leaves(tree)
    # one row gives a scalar, a matrix gives a vector
    assert tree.predict(features[0]) == pytest.approx(tree.predict(features)[0])


def test_invalid_inputs_are_rejected():
    with pytest.raises(ValueError):
        fit_tree_arrays(np.zeros((0, 1)), np.zeros(0))
    with pytest.raises(ValueError):
        fit_tree_arrays(np.zeros((2, 1)), np.zeros(2), weights=np.array([1.0, 0.0]))
    with pytest.raises(ConfigurationError):
        fit_tree_arrays(np.zeros((2, 1)), np.zeros(2), max_depth=-1)
    with pytest.raises(ValueError):
        TreeNode(value=0.0, split_feature=0, split_threshold=0.0)


def test_adjacent_float_values_still_split_both_ways():
    features = np.array([[1.0], [np.nextafter(1.0, 2.0)]])
    tree = fit_tree_arrays(features, np.array([0.0, 10.0]), max_depth=1)

    assert not tree.is_leaf
    assert tree.left.value == 0.0
    assert tree.right.value == 10.0
    np.testing.assert_array_equal(tree.predict(features), [0.0, 10.0])


def _same_structure(a: TreeNode, b: TreeNode) -> bool:
    if a.is_leaf or b.is_leaf:
        return a.is_leaf and b.is_leaf and a.value == pytest.approx(b.value, rel=1e-9, abs=1e-12)
    return (a.split_feature == b.split_feature
            and a.split_threshold == b.split_threshold
            and _same_structure(a.left, b.left)
            and _same_structure(a.right, b.right))


def test_integer_weight_equals_replicated_samples(rng):
    for _ in range(20):
        count = int(rng.integers(3, 10))
        features = np.round(rng.uniform(-1, 1, (count, 2)), 2)
        labels = rng.standard_normal(count)
        multiplicity = rng.integers(1, 4, count)

        weighted = fit_tree_arrays(features, labels, multiplicity.astype(float), max_depth=2)
        replicated = fit_tree_arrays(np.repeat(features, multiplicity, axis=0), np.repeat(labels, multiplicity),
                                     max_depth=2)
        assert _same_structure(weighted, replicated)


def test_weighted_sse_does_not_grow_with_depth(rng):
    features, labels = rng.standard_normal((40, 3)), rng.standard_normal(40)
    weights = rng.uniform(0.5, 2.0, 40)
    errors = [weighted_sse(fit_tree_arrays(features, labels, weights, max_depth=depth), features, labels, weights)
              for depth in range(6)]
    assert all(deeper <= shallower * (1 + 1e-9) for shallower, deeper in zip(errors, errors[1:]))
