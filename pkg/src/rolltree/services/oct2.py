"""Exact 2-depth tree solver, its brute-force oracle and the TU check.

Constraints (1b)-(1d) tie both child splits to the root feature, so once the
leaf costs are tabulated the program decouples per root feature: the best
left and right children are independent argmins. The LP relaxation of the
program has an integral optimum, which makes this decomposition exact without
an external solver.
"""

import logging
from typing import Optional

import numpy as np

from src.rolltree.models.constraint_matrix import ConstraintMatrix
from src.rolltree.models.cost_table import LeafCostTable, LossKind
from src.rolltree.models.dataset import BinaryDataset, NodeSubset
from src.rolltree.schemas.fit import Oct2Config
from src.rolltree.schemas.solution import Oct2Solution, StumpSolution, TuCheckResult
from src.rolltree.services.loss import leaf_costs_from_counts

logger = logging.getLogger(__name__)


def solve_oct2(table: LeafCostTable, cfg: Optional[Oct2Config] = None) -> Optional[Oct2Solution]:
    """Solve the 2-depth tree problem over a precomputed cost table.

    Args:
        table: Leaf costs and counts of the node subset.
        cfg: Minimum node-size constraints.

    Returns:
        Optional[Oct2Solution]: The optimal (j, k, l) with the lexicographically
            smallest triple among ties, or None when no root feature passes
            the size filters.
    """
    cfg = cfg or Oct2Config()
    p = table.p
    n_root = table.n_root
    n_one = table.size - n_root

    root_ok = np.minimum(n_root, n_one) >= cfg.n_int
    left_ok = np.minimum(table.n_pair0, n_root[:, None] - table.n_pair0) >= cfg.n_leaf
    right_ok = np.minimum(table.n_pair1, n_one[:, None] - table.n_pair1) >= cfg.n_leaf

    cost = table.cost
    left = np.where(left_ok, cost[:, :, 0, 0] + cost[:, :, 0, 1], np.inf)
    right = np.where(right_ok, cost[:, :, 1, 0] + cost[:, :, 1, 1], np.inf)

    rows = np.arange(p)
    best_k = np.argmin(left, axis=1)
    best_l = np.argmin(right, axis=1)
    totals = left[rows, best_k] + right[rows, best_l]
    totals = np.where(root_ok, totals, np.inf)

    if not np.isfinite(totals).any():
        logger.debug(f"No feasible 2-depth tree for {table.size} datapoints")
        return None

    j = int(np.argmin(totals))
    k = int(best_k[j])
    l = int(best_l[j])
    return Oct2Solution(
        root_feature=j,
        left_feature=k,
        right_feature=l,
        objective=float(totals[j]),
        leaf_costs=(
            float(cost[j, k, 0, 0]),
            float(cost[j, k, 0, 1]),
            float(cost[j, l, 1, 0]),
            float(cost[j, l, 1, 1]),
        ),
    )


def brute_force_oct2(
    ds: BinaryDataset,
    subset: NodeSubset,
    loss_kind: LossKind,
    cfg: Optional[Oct2Config] = None,
    norm_n: Optional[int] = None,
) -> Optional[Oct2Solution]:
    """Enumerate every (j, k, l) triple and route datapoints directly.

    Independent of the cost-table code path; used as an oracle.

    Args:
        ds: The dataset.
        subset: Datapoints of the node.
        loss_kind: Loss to minimize.
        cfg: Minimum node-size constraints.
        norm_n: Normalization denominator. Defaults to the subset size.

    Returns:
        Optional[Oct2Solution]: First minimum in (j, k, l) order, or None.
    """
    cfg = cfg or Oct2Config()
    subset.check_bounds(ds)
    size = len(subset)
    norm_n = norm_n if norm_n is not None else max(size, 1)
    X_sub = ds.X[subset.indices].astype(np.int64)
    y_sub = ds.y[subset.indices]
    n_classes = ds.n_classes

    best: Optional[Oct2Solution] = None
    for j in range(ds.p):
        x_j = X_sub[:, j]
        n_zero = int(size - x_j.sum())
        if min(n_zero, size - n_zero) < cfg.n_int:
            continue
        for k in range(ds.p):
            for l in range(ds.p):
                leaf = 2 * x_j + np.where(x_j == 1, X_sub[:, l], X_sub[:, k])
                counts = np.bincount(leaf * n_classes + y_sub, minlength=4 * n_classes)
                counts = counts.reshape(4, n_classes)
                totals = counts.sum(axis=1)
                if min(totals[0], totals[1]) < cfg.n_leaf or min(totals[2], totals[3]) < cfg.n_leaf:
                    continue
                costs = leaf_costs_from_counts(totals, counts, norm_n, loss_kind)
                objective = (costs[0] + costs[1]) + (costs[2] + costs[3])
                if best is None or objective < best.objective:
                    best = Oct2Solution(
                        root_feature=j,
                        left_feature=k,
                        right_feature=l,
                        objective=float(objective),
                        leaf_costs=tuple(float(c) for c in costs),
                    )
    return best


def solve_stump(
    ds: BinaryDataset,
    subset: NodeSubset,
    loss_kind: LossKind,
    cfg: Optional[Oct2Config] = None,
    norm_n: Optional[int] = None,
) -> Optional[StumpSolution]:
    """Best single split of a node by summed child leaf costs.

    Args:
        ds: The dataset.
        subset: Datapoints of the node.
        loss_kind: Loss to minimize.
        cfg: Size constraints; the node needs ``n_int`` per side and each
            child leaf ``n_leaf``.
        norm_n: Normalization denominator. Defaults to the subset size.

    Returns:
        Optional[StumpSolution]: Smallest feature id among the minima, or None.
    """
    cfg = cfg or Oct2Config()
    subset.check_bounds(ds)
    size = len(subset)
    norm_n = norm_n if norm_n is not None else max(size, 1)

    X_sub = ds.X[subset.indices].astype(np.float64)
    y_sub = ds.y[subset.indices]
    onehot = (y_sub[:, None] == np.arange(ds.n_classes)[None, :]).astype(np.float64)

    ones = np.rint(X_sub.T @ onehot).astype(np.int64)
    class_totals = np.bincount(y_sub, minlength=ds.n_classes).astype(np.int64)
    per_class = np.stack([class_totals[None, :] - ones, ones], axis=1)
    totals = per_class.sum(axis=-1)

    smallest_side = totals.min(axis=1)
    feasible = (smallest_side >= cfg.n_int) & (smallest_side >= cfg.n_leaf)
    costs = leaf_costs_from_counts(totals, per_class, norm_n, loss_kind)
    objectives = np.where(feasible, costs[:, 0] + costs[:, 1], np.inf)

    if not np.isfinite(objectives).any():
        return None
    j = int(np.argmin(objectives))
    return StumpSolution(
        feature=j,
        objective=float(objectives[j]),
        leaf_costs=(float(costs[j, 0]), float(costs[j, 1])),
    )


def build_constraint_matrix(p: int) -> ConstraintMatrix:
    """Constraint matrix of rows (1b), (1c), (1d, j) over the z variables.

    Args:
        p: Feature count.

    Returns:
        ConstraintMatrix: ``p + 2`` rows and ``2 * p**2`` columns.
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")

    rows = ("(1b)", "(1c)") + tuple(f"(1d,{j})" for j in range(p))
    cols = tuple(f"z1[{j},{k}]" for j in range(p) for k in range(p)) + tuple(
        f"z2[{j},{l}]" for j in range(p) for l in range(p)
    )
    entries = np.zeros((p + 2, 2 * p * p), dtype=np.int8)

    split = p * p
    for j in range(p):
        block = slice(j * p, (j + 1) * p)
        entries[0, block] = 1
        entries[2 + j, block] = 1

        block = slice(split + j * p, split + (j + 1) * p)
        entries[1, block] = 1
        entries[2 + j, block] = -1

    return ConstraintMatrix(rows=rows, cols=cols, entries=entries)


def check_tu_dantzig(p: int) -> TuCheckResult:
    """Check the sufficient conditions for total unimodularity.

    Entries must lie in {-1, 0, 1}, every column must hold at most two
    nonzeros, and with rows split into M1 = {(1b)} and M2 = the rest every
    two-nonzero column must have equal sums over M1 and M2.

    Args:
        p: Feature count.

    Returns:
        TuCheckResult: ``holds`` with the partition as witness, or the first
            violating column.
    """
    matrix = build_constraint_matrix(p)
    entries = matrix.entries.astype(np.int64)
    m1 = [0]
    m2 = list(range(1, len(matrix.rows)))
    witness = {
        "m1_rows": [matrix.rows[i] for i in m1],
        "m2_rows": [matrix.rows[i] for i in m2],
    }

    if not np.isin(entries, (-1, 0, 1)).all():
        col = int(np.flatnonzero(~np.isin(entries, (-1, 0, 1)).all(axis=0))[0])
        return TuCheckResult(
            holds=False, violating_column=matrix.cols[col], reason="entry outside {-1,0,1}", **witness
        )

    nonzeros = (entries != 0).sum(axis=0)
    if (nonzeros > 2).any():
        col = int(np.flatnonzero(nonzeros > 2)[0])
        return TuCheckResult(
            holds=False, violating_column=matrix.cols[col], reason="more than two nonzeros", **witness
        )

    unbalanced = (nonzeros == 2) & (entries[m1].sum(axis=0) != entries[m2].sum(axis=0))
    if unbalanced.any():
        col = int(np.flatnonzero(unbalanced)[0])
        return TuCheckResult(
            holds=False, violating_column=matrix.cols[col], reason="unequal partition sums", **witness
        )

    return TuCheckResult(holds=True, **witness)
