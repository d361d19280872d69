"""Fitted decision trees: routing, prediction and accuracy."""

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, List, Optional, Sequence, Tuple

import numpy as np
from sklearn.metrics import accuracy_score

from src.rolltree.models.dataset import BinaryDataset, NodeSubset
from src.rolltree.schemas.binarization import BinarizationSchema

if TYPE_CHECKING:
    import pandas as pd

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TreeNode:
    """One node of a fitted tree.

    Internal nodes carry ``split_feature`` and both children; datapoints with
    ``x[split_feature] == 0`` flow to ``left``. Every node keeps its training
    class counts and majority label.
    """

    id: int
    depth: int
    class_counts: Tuple[int, ...]
    label: int
    split_feature: Optional[int] = None
    left: Optional[int] = None
    right: Optional[int] = None

    @property
    def is_leaf(self) -> bool:
        """Whether the node has no children."""
        return self.split_feature is None


def majority_label(class_counts: Sequence[int]) -> int:
    """Argmax of the class counts, lowest class id on ties."""
    return int(np.argmax(np.asarray(class_counts)))


@dataclass(frozen=True, eq=False)
class DecisionTree:
    """An immutable fitted tree stored as a node arena rooted at id 0.

    Attributes:
        nodes: Nodes indexed by id.
        class_names: Class names ordered by id.
        feature_names: Binary feature names ordered by index.
        schema: Binarization used at fit time, for scoring raw records.
    """

    nodes: Tuple[TreeNode, ...]
    class_names: Tuple[str, ...]
    feature_names: Tuple[str, ...]
    schema: Optional[BinarizationSchema] = None

    def __post_init__(self) -> None:
        if not self.nodes:
            raise ValueError("A tree needs at least one node")
        for position, node in enumerate(self.nodes):
            if node.id != position:
                raise ValueError(f"Node at position {position} has id {node.id}")
            if not node.is_leaf and (node.left is None or node.right is None):
                raise ValueError(f"Internal node {node.id} needs two children")

    @property
    def root(self) -> TreeNode:
        """The root node."""
        return self.nodes[0]

    @property
    def n_features(self) -> int:
        """Width of the binary feature vectors the tree routes."""
        return len(self.feature_names)

    @property
    def depth(self) -> int:
        """Depth of the deepest leaf."""
        return max(node.depth for node in self.nodes)

    @property
    def n_leaves(self) -> int:
        """Number of leaves."""
        return sum(1 for node in self.nodes if node.is_leaf)

    def leaves(self) -> List[TreeNode]:
        """Leaves in id order."""
        return [node for node in self.nodes if node.is_leaf]

    def leaf_for(self, x: np.ndarray) -> TreeNode:
        """Leaf reached by a binary feature vector."""
        node = self.root
        while not node.is_leaf:
            node = self.nodes[node.right if x[node.split_feature] else node.left]
        return node

    def predict(self, x: Sequence[int]) -> int:
        """Class id of a single binary feature vector."""
        return predict(self, x)

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf id reached by every row of ``X``."""
        X = np.asarray(X)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ValueError(f"Expected rows of length {self.n_features}, got shape {X.shape}")
        current = np.zeros(X.shape[0], dtype=np.int64)
        rows = np.arange(X.shape[0])
        split = np.array([-1 if n.is_leaf else n.split_feature for n in self.nodes])
        left = np.array([-1 if n.is_leaf else n.left for n in self.nodes])
        right = np.array([-1 if n.is_leaf else n.right for n in self.nodes])

        active = split[current] >= 0
        while active.any():
            idx = rows[active]
            bits = X[idx, split[current[idx]]]
            current[idx] = np.where(bits == 1, right[current[idx]], left[current[idx]])
            active = split[current] >= 0
        return current

    def predict_many(self, X: np.ndarray) -> np.ndarray:
        """Class ids for every row of a binary matrix."""
        labels = np.array([node.label for node in self.nodes], dtype=np.int64)
        return labels[self.apply(X)]

    def predict_records(self, frame: "pd.DataFrame") -> List[str]:
        """Class names for raw records, binarized through the stored schema.

        Raises:
            ValueError: If the tree was fitted without a schema.
        """
        if self.schema is None:
            raise ValueError("Tree has no binarization schema; score binary vectors instead")
        from src.rolltree.services.data import apply_schema

        X = apply_schema(frame, self.schema)
        return [self.class_names[c] for c in self.predict_many(X)]


def predict(tree: DecisionTree, x: Sequence[int]) -> int:
    """Route a binary feature vector from the root to a leaf.

    Args:
        tree: The fitted tree.
        x: Binary feature vector of length p.

    Returns:
        int: Label of the leaf reached.
    """
    x = np.asarray(x)
    if x.shape != (tree.n_features,):
        raise ValueError(f"Expected a feature vector of length {tree.n_features}, got {x.shape}")
    return tree.leaf_for(x).label


def evaluate_accuracy(
    tree: DecisionTree, ds: BinaryDataset, subset: Optional[NodeSubset] = None
) -> float:
    """Fraction of subset datapoints the tree labels correctly.

    Args:
        tree: The fitted tree.
        ds: The dataset.
        subset: Datapoints to score. Defaults to all of them.

    Returns:
        float: Accuracy in [0, 1]; 1.0 for an empty subset.
    """
    indices = subset.indices if subset is not None else np.arange(ds.n)
    if indices.size == 0:
        logger.warning("Accuracy requested on an empty subset; reporting 1.0")
        return 1.0
    predicted = tree.predict_many(ds.X[indices])
    return float(accuracy_score(ds.y[indices], predicted))
