"""Exact 3-depth tree solver and its enumeration oracle.

For a fixed root feature the two halves of the subset are independent 2-depth
problems, so the 3-depth optimum is an argmin over root features of two
``solve_oct2`` calls on cost tables built over the halves.
"""

import itertools
import logging
from typing import Optional

import numpy as np

from src.rolltree.config import ORACLE_MAX_P
from src.rolltree.exceptions import OracleLimitError
from src.rolltree.models.cost_table import LossKind
from src.rolltree.models.dataset import BinaryDataset, NodeSubset
from src.rolltree.schemas.fit import Oct2Config
from src.rolltree.schemas.solution import Oct3Solution
from src.rolltree.services.loss import build_cost_table, leaf_costs_from_counts
from src.rolltree.services.oct2 import solve_oct2

logger = logging.getLogger(__name__)


def solve_oct3(
    ds: BinaryDataset,
    subset: NodeSubset,
    loss_kind: LossKind,
    cfg: Optional[Oct2Config] = None,
    norm_n: Optional[int] = None,
) -> Optional[Oct3Solution]:
    """Solve the 3-depth tree problem by root-feature decomposition.

    Size constraints apply level by level: both children of the root and the
    four depth-2 nodes need ``n_int`` datapoints, the eight leaves ``n_leaf``.

    Args:
        ds: The dataset.
        subset: Datapoints of the node.
        loss_kind: Loss to minimize.
        cfg: Minimum node-size constraints.
        norm_n: Normalization denominator shared by both halves. Defaults to
            the subset size.

    Returns:
        Optional[Oct3Solution]: The optimum with the lexicographically
            smallest 7-tuple among ties, or None when infeasible.
    """
    cfg = cfg or Oct2Config()
    subset.check_bounds(ds)
    norm_n = norm_n if norm_n is not None else max(len(subset), 1)
    x_sub = ds.X[subset.indices]

    best: Optional[Oct3Solution] = None
    for i in range(ds.p):
        goes_right = x_sub[:, i] == 1
        left_half = NodeSubset(subset.indices[~goes_right])
        right_half = NodeSubset(subset.indices[goes_right])
        if min(len(left_half), len(right_half)) < cfg.n_int:
            continue

        left_sol = solve_oct2(build_cost_table(ds, left_half, loss_kind, norm_n), cfg)
        if left_sol is None:
            continue
        right_sol = solve_oct2(build_cost_table(ds, right_half, loss_kind, norm_n), cfg)
        if right_sol is None:
            continue

        objective = left_sol.objective + right_sol.objective
        if best is None or objective < best.objective:
            best = Oct3Solution(
                root_feature=i,
                level2_features=(left_sol.root_feature, right_sol.root_feature),
                level3_features=(
                    left_sol.left_feature,
                    left_sol.right_feature,
                    right_sol.left_feature,
                    right_sol.right_feature,
                ),
                objective=float(objective),
                leaf_costs=left_sol.leaf_costs + right_sol.leaf_costs,
            )

    if best is None:
        logger.debug(f"No feasible 3-depth tree for {len(subset)} datapoints")
    return best


def brute_force_oct3(
    ds: BinaryDataset,
    subset: NodeSubset,
    loss_kind: LossKind,
    cfg: Optional[Oct2Config] = None,
    norm_n: Optional[int] = None,
) -> Optional[Oct3Solution]:
    """Enumerate every feature 7-tuple and route datapoints directly.

    Args:
        ds: The dataset.
        subset: Datapoints of the node.
        loss_kind: Loss to minimize.
        cfg: Minimum node-size constraints. Defaults to none.
        norm_n: Normalization denominator. Defaults to the subset size.

    Returns:
        Optional[Oct3Solution]: First minimum in (i, j_L, j_R, k_1..k_4) order.

    Raises:
        OracleLimitError: If ``p`` exceeds ``ROLLTREE_ORACLE_MAX_P``.
    """
    if ds.p > ORACLE_MAX_P:
        raise OracleLimitError(
            f"Enumeration oracle supports p <= {ORACLE_MAX_P}, got p={ds.p}"
        )
    cfg = cfg or Oct2Config()
    subset.check_bounds(ds)
    size = len(subset)
    norm_n = norm_n if norm_n is not None else max(size, 1)
    X_sub = ds.X[subset.indices].astype(np.int64)
    y_sub = ds.y[subset.indices]
    rows = np.arange(size)
    n_classes = ds.n_classes

    best: Optional[Oct3Solution] = None
    for i, j_left, j_right, *level3 in itertools.product(range(ds.p), repeat=7):
        x_i = X_sub[:, i]
        x_j = np.where(x_i == 1, X_sub[:, j_right], X_sub[:, j_left])
        node = 2 * x_i + x_j
        k_cols = np.asarray(level3)[node]
        leaf = 2 * node + X_sub[rows, k_cols]

        n_right = int(x_i.sum())
        if min(size - n_right, n_right) < cfg.n_int:
            continue
        if np.bincount(node, minlength=4).min() < cfg.n_int:
            continue
        counts = np.bincount(leaf * n_classes + y_sub, minlength=8 * n_classes)
        counts = counts.reshape(8, n_classes)
        totals = counts.sum(axis=1)
        if totals.min() < cfg.n_leaf:
            continue

        c = leaf_costs_from_counts(totals, counts, norm_n, loss_kind)
        objective = ((c[0] + c[1]) + (c[2] + c[3])) + ((c[4] + c[5]) + (c[6] + c[7]))
        if best is None or objective < best.objective:
            best = Oct3Solution(
                root_feature=i,
                level2_features=(j_left, j_right),
                level3_features=tuple(level3),
                objective=float(objective),
                leaf_costs=tuple(float(v) for v in c),
            )
    return best
