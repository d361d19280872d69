"""In-memory dataset types.

``RawDataset`` wraps a parsed table before binarization; ``BinaryDataset`` is
the bit-valued universe every solver works on. Node subsets and fold
assignments index into a ``BinaryDataset`` and never copy it.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.rolltree.schemas.binarization import BinarizationSchema
from src.rolltree.utils.bitset import full_mask, pack_rows


@dataclass(frozen=True, eq=False)
class RawDataset:
    """A parsed table of named values prior to binarization.

    Attributes:
        frame: One row per record; feature columns hold floats (numeric) or
            strings (categorical), the label column holds strings.
        label_column: Name of the class label column.
        numeric_columns: Feature columns whose values all parse as numbers.
    """

    frame: pd.DataFrame
    label_column: str
    numeric_columns: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.label_column not in self.frame.columns:
            raise ValueError(f"Label column '{self.label_column}' not in table")

    @property
    def n_rows(self) -> int:
        """Number of records."""
        return int(len(self.frame))

    @property
    def feature_columns(self) -> List[str]:
        """All columns except the label, in table order."""
        return [c for c in self.frame.columns if c != self.label_column]


@dataclass(frozen=True, eq=False)
class BinaryDataset:
    """Bit-valued feature matrix with integer class labels.

    Attributes:
        X: n x p matrix with entries in {0, 1}.
        y: Length-n vector of class ids in [0, |C|).
        class_names: Class names ordered by id.
        feature_names: Binary column names ordered by index.
        schema: Binarization that produced the matrix, when known.
    """

    X: np.ndarray
    y: np.ndarray
    class_names: Tuple[str, ...]
    feature_names: Tuple[str, ...]
    schema: Optional[BinarizationSchema] = None

    def __post_init__(self) -> None:
        X = np.ascontiguousarray(self.X, dtype=np.uint8)
        y = np.ascontiguousarray(self.y, dtype=np.int64)
        if X.ndim != 2:
            raise ValueError("X must be a 2-dimensional matrix")
        n, p = X.shape
        if n < 1 or p < 1:
            raise ValueError(f"Dataset needs n >= 1 and p >= 1, got {n} x {p}")
        if X.max(initial=0) > 1:
            raise ValueError("X entries must be 0 or 1")
        if y.shape != (n,):
            raise ValueError(f"y must have length {n}, got shape {y.shape}")
        if len(self.class_names) < 1 or y.min() < 0 or y.max() >= len(self.class_names):
            raise ValueError("Labels must lie in [0, |C|)")
        missing = np.flatnonzero(np.bincount(y, minlength=len(self.class_names)) == 0)
        if missing.size:
            names = [self.class_names[c] for c in missing]
            raise ValueError(f"Every class must appear in y; no datapoints for {names}")
        if len(self.feature_names) != p:
            raise ValueError(f"Expected {p} feature names, got {len(self.feature_names)}")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "class_names", tuple(self.class_names))
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @classmethod
    def from_arrays(
        cls,
        X: np.ndarray,
        y: Sequence[int],
        class_names: Optional[Sequence[str]] = None,
        feature_names: Optional[Sequence[str]] = None,
    ) -> "BinaryDataset":
        """Build a dataset from plain arrays with generated names."""
        X = np.asarray(X)
        y = np.asarray(y)
        if class_names is None:
            class_names = [str(c) for c in range(int(y.max()) + 1)]
        if feature_names is None:
            feature_names = [f"x{j}" for j in range(X.shape[1])]
        return cls(X=X, y=y, class_names=tuple(class_names), feature_names=tuple(feature_names))

    @property
    def n(self) -> int:
        """Datapoint count."""
        return int(self.X.shape[0])

    @property
    def p(self) -> int:
        """Feature count."""
        return int(self.X.shape[1])

    @property
    def n_classes(self) -> int:
        """Number of classes |C|."""
        return len(self.class_names)

    @cached_property
    def column_bits(self) -> np.ndarray:
        """Packed bitset of every column, shape (p, words)."""
        return pack_rows(self.X.T)

    @cached_property
    def class_bits(self) -> np.ndarray:
        """Packed membership bitset of every class, shape (|C|, words)."""
        onehot = self.y[None, :] == np.arange(self.n_classes)[:, None]
        return pack_rows(onehot)

    @cached_property
    def valid_bits(self) -> np.ndarray:
        """Bitset with every datapoint set."""
        return full_mask(self.n)

    def literal_bits(self, feature: int, value: int) -> np.ndarray:
        """Bitset of the datapoints with ``x_feature == value``."""
        if value:
            return self.column_bits[feature]
        return ~self.column_bits[feature] & self.valid_bits

    def class_counts(self, indices: np.ndarray) -> np.ndarray:
        """Per-class datapoint counts over ``indices``."""
        return np.bincount(self.y[indices], minlength=self.n_classes)


@dataclass(frozen=True, eq=False)
class NodeSubset:
    """Datapoints reaching one node of a growing tree.

    Attributes:
        indices: Strictly increasing datapoint ids.
        depth: Level of the node.
    """

    indices: np.ndarray
    depth: int = 0

    def __post_init__(self) -> None:
        indices = np.asarray(self.indices, dtype=np.int64).reshape(-1)
        if indices.size > 1 and np.any(np.diff(indices) <= 0):
            raise ValueError("Subset indices must be strictly increasing")
        if indices.size and indices[0] < 0:
            raise ValueError("Subset indices must be non-negative")
        object.__setattr__(self, "indices", indices)

    @classmethod
    def full(cls, ds: BinaryDataset, depth: int = 0) -> "NodeSubset":
        """Subset holding every datapoint of ``ds``."""
        return cls(indices=np.arange(ds.n, dtype=np.int64), depth=depth)

    def __len__(self) -> int:
        return int(self.indices.size)

    def check_bounds(self, ds: BinaryDataset) -> None:
        """Raise unless every index is a datapoint of ``ds``."""
        if self.indices.size and self.indices[-1] >= ds.n:
            raise ValueError(f"Subset index {self.indices[-1]} out of range for n={ds.n}")


@dataclass(frozen=True, eq=False)
class FoldAssignment:
    """Cross-validation fold of every datapoint.

    Attributes:
        fold_of: Fold id in [0, k) per datapoint.
        k: Number of folds.
        seed: RNG seed the assignment was drawn with.
    """

    fold_of: np.ndarray
    k: int
    seed: int

    def test_subset(self, fold: int) -> NodeSubset:
        """Datapoints held out in ``fold``."""
        return NodeSubset(np.flatnonzero(self.fold_of == fold))

    def train_subset(self, fold: int) -> NodeSubset:
        """Datapoints used for fitting when ``fold`` is held out."""
        return NodeSubset(np.flatnonzero(self.fold_of != fold))

    def fold_sizes(self) -> np.ndarray:
        """Number of datapoints in each fold."""
        return np.bincount(self.fold_of, minlength=self.k)
