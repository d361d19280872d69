"""Leaf-rule counting and leaf loss components.

Every cost that a solver compares goes through ``leaf_costs_from_counts`` so
that the cost-table path and the brute-force oracles produce bit-identical
reals from identical integer counts.
"""

import logging
from typing import Optional

import numpy as np

from src.rolltree.models.cost_table import LeafCostTable, LossKind, RuleCounts
from src.rolltree.models.dataset import BinaryDataset, NodeSubset
from src.rolltree.utils.bitset import pack_indices, popcount

logger = logging.getLogger(__name__)


def leaf_costs_from_counts(
    totals: np.ndarray, per_class: np.ndarray, norm_n: int, loss_kind: LossKind
) -> np.ndarray:
    """Vectorized leaf loss over any number of leaf rules.

    Args:
        totals: Datapoints per rule, shape ``(...)``.
        per_class: Per-class counts per rule, shape ``(..., |C|)``.
        norm_n: Normalization denominator.
        loss_kind: Loss to evaluate.

    Returns:
        np.ndarray: Float costs with the shape of ``totals``. Empty rules cost 0.
    """
    totals = np.asarray(totals, dtype=np.int64)
    per_class = np.asarray(per_class, dtype=np.int64)

    if loss_kind == LossKind.MISCLASSIFICATION:
        return (totals - per_class.max(axis=-1)) / norm_n

    safe_totals = np.where(totals > 0, totals, 1)
    purity = np.zeros(totals.shape, dtype=np.float64)
    for c in range(per_class.shape[-1]):
        share = per_class[..., c] / safe_totals
        purity = purity + share * share
    costs = (totals / norm_n) * (1.0 - purity)
    costs = np.maximum(costs, 0.0)
    return np.where(totals > 0, costs, 0.0)


def leaf_cost(counts: RuleCounts, norm_n: int, loss_kind: LossKind) -> float:
    """Loss component of one leaf decision rule.

    Args:
        counts: Datapoints satisfying the rule.
        norm_n: Normalization denominator, at least 1.
        loss_kind: Misclassification or Gini impurity.

    Returns:
        float: The normalized loss contribution of the leaf.
    """
    if norm_n < 1:
        raise ValueError(f"norm_n must be >= 1, got {norm_n}")
    cost = leaf_costs_from_counts(
        np.asarray(counts.total), np.asarray(counts.per_class), norm_n, loss_kind
    )
    return float(cost)


def node_errors(class_counts: np.ndarray) -> int:
    """Datapoints misclassified by the majority label of a node."""
    class_counts = np.asarray(class_counts, dtype=np.int64)
    if class_counts.sum() == 0:
        return 0
    return int(class_counts.sum() - class_counts.max())


def rule_counts(
    ds: BinaryDataset, subset: NodeSubset, j: int, k: int, r: int, s: int
) -> RuleCounts:
    """Count the subset datapoints with ``x_j = r`` and ``x_k = s``.

    Args:
        ds: The dataset.
        subset: Datapoints of the node.
        j: First feature.
        k: Second feature.
        r: Required value of ``x_j``.
        s: Required value of ``x_k``.

    Returns:
        RuleCounts: Total and per-class counts. A contradictory rule on a
            single feature yields zero counts.
    """
    if not (0 <= j < ds.p and 0 <= k < ds.p):
        raise ValueError(f"Feature ids must lie in [0, {ds.p}), got ({j}, {k})")
    subset.check_bounds(ds)

    mask = pack_indices(subset.indices, ds.n) & ds.literal_bits(j, r) & ds.literal_bits(k, s)
    per_class = np.array(
        [popcount(mask & ds.class_bits[c]) for c in range(ds.n_classes)], dtype=np.int64
    )
    return RuleCounts(total=int(per_class.sum()), per_class=per_class)


def build_cost_table(
    ds: BinaryDataset,
    subset: NodeSubset,
    loss_kind: LossKind,
    norm_n: Optional[int] = None,
) -> LeafCostTable:
    """Precompute the costs of every 2-literal leaf rule over a node subset.

    Pair counts come from per-class Gram matrices of the subset's columns, so
    one pass fills all ``4 * p**2`` rules. An empty subset yields an all-zero
    table.

    Args:
        ds: The dataset.
        subset: Datapoints of the node.
        loss_kind: Loss to tabulate.
        norm_n: Normalization denominator. Defaults to the subset size.

    Returns:
        LeafCostTable: Costs and the counts used by the size constraints.
    """
    subset.check_bounds(ds)
    size = len(subset)
    if norm_n is None:
        norm_n = max(size, 1)
    if norm_n < 1:
        raise ValueError(f"norm_n must be >= 1, got {norm_n}")

    p = ds.p
    X_sub = ds.X[subset.indices].astype(np.float64)
    y_sub = ds.y[subset.indices]

    # per_class[j, k, r, s, c]
    per_class = np.zeros((p, p, 2, 2, ds.n_classes), dtype=np.int64)
    for c in range(ds.n_classes):
        X_c = X_sub[y_sub == c]
        m_c = X_c.shape[0]
        if m_c == 0:
            continue
        ones = np.rint(X_c.sum(axis=0)).astype(np.int64)
        both = np.rint(X_c.T @ X_c).astype(np.int64)
        per_class[:, :, 1, 1, c] = both
        per_class[:, :, 1, 0, c] = ones[:, None] - both
        per_class[:, :, 0, 1, c] = ones[None, :] - both
        per_class[:, :, 0, 0, c] = m_c - ones[:, None] - ones[None, :] + both

    totals = per_class.sum(axis=-1)
    cost = leaf_costs_from_counts(totals, per_class, norm_n, loss_kind)

    n_ones = np.rint(X_sub.sum(axis=0)).astype(np.int64)
    table = LeafCostTable(
        cost=cost,
        n_root=size - n_ones,
        n_pair0=totals[:, :, 0, 0].copy(),
        n_pair1=totals[:, :, 1, 1].copy(),
        size=size,
        norm_n=int(norm_n),
        loss_kind=loss_kind,
    )
    logger.debug(f"Built {loss_kind.value} cost table for {size} datapoints over {p} features")
    return table
