"""Tests for fitted trees: routing, prediction and accuracy."""

from typing import TYPE_CHECKING

import numpy as np
import pytest

from src.rolltree.models.dataset import BinaryDataset, NodeSubset
from src.rolltree.models.tree import (
    DecisionTree,
    TreeNode,
    evaluate_accuracy,
    majority_label,
    predict,
)

if TYPE_CHECKING:
    from _pytest.logging import LogCaptureFixture


@pytest.fixture
def toy_tree() -> DecisionTree:
    """Depth-2 tree on the toy columns; it misroutes only the fourth row."""
    nodes = (
        TreeNode(id=0, depth=0, class_counts=(1, 3), label=1, split_feature=0, left=1, right=2),
        TreeNode(id=1, depth=1, class_counts=(0, 1), label=1),
        TreeNode(id=2, depth=1, class_counts=(1, 2), label=1, split_feature=2, left=3, right=4),
        TreeNode(id=3, depth=2, class_counts=(0, 1), label=1),
        TreeNode(id=4, depth=2, class_counts=(1, 1), label=0),
    )
    return DecisionTree(nodes=nodes, class_names=("A", "B"), feature_names=("x1", "x2", "x3"))


def test_tree_shape(toy_tree: DecisionTree) -> None:
    """Depth, leaf count and leaf order."""
    assert toy_tree.depth == 2
    assert toy_tree.n_leaves == 3
    assert [leaf.id for leaf in toy_tree.leaves()] == [1, 3, 4]


def test_predict_routes_zero_left(toy_tree: DecisionTree) -> None:
    """Feature value 0 goes left, 1 goes right."""
    assert predict(toy_tree, [0, 0, 0]) == 1
    assert predict(toy_tree, [1, 0, 0]) == 1
    assert toy_tree.predict([1, 0, 1]) == 0


def test_predict_rejects_wrong_length(toy_tree: DecisionTree) -> None:
    """Vectors must have one entry per feature."""
    with pytest.raises(ValueError):
        predict(toy_tree, [1, 0])


def test_apply_matches_single_routing(toy_tree: DecisionTree) -> None:
    """Vectorized routing agrees with node-by-node routing."""
    X = np.array([[a, b, c] for a in (0, 1) for b in (0, 1) for c in (0, 1)])
    leaves = toy_tree.apply(X)
    assert leaves.tolist() == [toy_tree.leaf_for(x).id for x in X]
    assert toy_tree.predict_many(X).tolist() == [predict(toy_tree, x) for x in X]


def test_apply_rejects_wrong_width(toy_tree: DecisionTree) -> None:
    """Matrices must have p columns."""
    with pytest.raises(ValueError):
        toy_tree.apply(np.zeros((2, 4), dtype=int))


def test_evaluate_accuracy(toy_tree: DecisionTree, toy_binary: BinaryDataset) -> None:
    """Accuracy over all rows and over a subset."""
    assert evaluate_accuracy(toy_tree, toy_binary) == 0.75
    assert evaluate_accuracy(toy_tree, toy_binary, NodeSubset(np.array([0, 2]))) == 1.0
    assert evaluate_accuracy(toy_tree, toy_binary, NodeSubset(np.array([3]))) == 0.0


def test_evaluate_accuracy_empty_subset(
    toy_tree: DecisionTree, toy_binary: BinaryDataset, caplog: "LogCaptureFixture"
) -> None:
    """An empty subset scores 1.0 with a warning."""
    assert evaluate_accuracy(toy_tree, toy_binary, NodeSubset(np.array([], dtype=np.int64))) == 1.0
    assert "empty subset" in caplog.text


def test_single_leaf_tree(toy_binary: BinaryDataset) -> None:
    """A lone leaf predicts its label everywhere."""
    tree = DecisionTree(
        nodes=(TreeNode(id=0, depth=0, class_counts=(1, 3), label=1),),
        class_names=("A", "B"),
        feature_names=("x1", "x2", "x3"),
    )
    assert tree.depth == 0
    assert evaluate_accuracy(tree, toy_binary) == 0.75


def test_tree_validation() -> None:
    """Ids must match positions and internal nodes need two children."""
    with pytest.raises(ValueError):
        DecisionTree(nodes=(), class_names=("A",), feature_names=("f",))
    with pytest.raises(ValueError):
        DecisionTree(
            nodes=(TreeNode(id=1, depth=0, class_counts=(1,), label=0),),
            class_names=("A",),
            feature_names=("f",),
        )
    with pytest.raises(ValueError):
        DecisionTree(
            nodes=(TreeNode(id=0, depth=0, class_counts=(1,), label=0, split_feature=0, left=1),),
            class_names=("A",),
            feature_names=("f",),
        )


def test_predict_records_requires_schema(toy_tree: DecisionTree) -> None:
    """Raw records need the fit-time binarization."""
    import pandas as pd

    with pytest.raises(ValueError):
        toy_tree.predict_records(pd.DataFrame({"x1": ["1"]}))


def test_majority_label_ties_to_lowest() -> None:
    """Ties go to the lowest class id."""
    assert majority_label([2, 5, 5]) == 1
    assert majority_label([3, 3]) == 0
