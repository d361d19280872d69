"""Leaf-rule counts and precomputed leaf cost tables."""

from dataclasses import dataclass
from enum import Enum

import numpy as np


class LossKind(str, Enum):
    """Loss functions available to the solvers."""

    MISCLASSIFICATION = "misclassification"
    GINI = "gini"


@dataclass(frozen=True, eq=False)
class RuleCounts:
    """Datapoints of a node satisfying one leaf decision rule.

    Attributes:
        total: Number of datapoints satisfying the rule.
        per_class: Per-class counts, length |C|.
    """

    total: int
    per_class: np.ndarray


@dataclass(frozen=True, eq=False)
class LeafCostTable:
    """Precomputed loss components for every 2-literal leaf rule of a node.

    ``cost[j, k, r, s]`` is the loss of the datapoints with ``x_j = r`` and
    ``x_k = s``, normalized by ``norm_n``.

    Attributes:
        cost: Array of shape (p, p, 2, 2).
        n_root: Datapoints with x_j = 0, shape (p,).
        n_pair0: Datapoints with x_j = 0 and x_k = 0, shape (p, p).
        n_pair1: Datapoints with x_j = 1 and x_l = 1, shape (p, p).
        size: Number of datapoints in the node subset.
        norm_n: Normalization denominator.
        loss_kind: Loss the costs were computed with.
    """

    cost: np.ndarray
    n_root: np.ndarray
    n_pair0: np.ndarray
    n_pair1: np.ndarray
    size: int
    norm_n: int
    loss_kind: LossKind

    @property
    def p(self) -> int:
        """Feature count."""
        return int(self.cost.shape[0])
