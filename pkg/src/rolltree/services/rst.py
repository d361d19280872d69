"""Rolling-subtree tree growing.

A frontier of nodes with misclassified datapoints is processed lowest depth
first. Each node solves a lookahead subproblem (single split, exact 2-depth or
exact 3-depth tree) on its own datapoints, replaces its current subtree with
the solution, and sends its impure children back to the frontier where later
subproblems may overwrite their splits.
"""

import heapq
import logging
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.rolltree.models.cost_table import LossKind
from src.rolltree.models.dataset import BinaryDataset, NodeSubset
from src.rolltree.models.tree import DecisionTree, TreeNode, majority_label
from src.rolltree.schemas.fit import FitConfig, Oct2Config, Strategy
from src.rolltree.services.loss import build_cost_table, node_errors
from src.rolltree.services.oct2 import solve_oct2, solve_stump
from src.rolltree.services.oct3 import solve_oct3

logger = logging.getLogger(__name__)

# name -> (lookahead, loss, strategy)
METHODS: Dict[str, Tuple[int, LossKind, Strategy]] = {
    "cart-m": (1, LossKind.MISCLASSIFICATION, Strategy.FIXED),
    "cart-g": (1, LossKind.GINI, Strategy.FIXED),
    "rst-m": (2, LossKind.MISCLASSIFICATION, Strategy.FIXED),
    "rst-g": (2, LossKind.GINI, Strategy.FIXED),
    "rst3-m": (3, LossKind.MISCLASSIFICATION, Strategy.FIXED),
    "rst3-g": (3, LossKind.GINI, Strategy.FIXED),
    "hybrid": (2, LossKind.GINI, Strategy.HYBRID),
}


def method_config(name: str, d_max: int, oct2_cfg: Optional[Oct2Config] = None) -> FitConfig:
    """Fit configuration of a named method.

    Args:
        name: One of ``METHODS``.
        d_max: Maximum depth.
        oct2_cfg: Size constraints.

    Returns:
        FitConfig: The configuration.
    """
    key = name.strip().lower()
    if key not in METHODS:
        raise ValueError(f"Unknown method '{name}'. Choose from: {', '.join(METHODS)}")
    lookahead, loss_kind, strategy = METHODS[key]
    return FitConfig(
        d_max=d_max,
        lookahead=lookahead,
        loss_kind=loss_kind,
        strategy=strategy,
        oct2_cfg=oct2_cfg or Oct2Config(),
    )


@dataclass
class _Plan:
    """Split structure proposed by a subproblem. ``None`` children are leaves."""

    feature: int
    left: Optional["_Plan"] = None
    right: Optional["_Plan"] = None


@dataclass
class _Node:
    id: int
    depth: int
    indices: np.ndarray
    class_counts: np.ndarray
    split_feature: Optional[int] = None
    left: Optional[int] = None
    right: Optional[int] = None
    # Set on empty leaves, which take their parent's majority label
    label: Optional[int] = None


@dataclass
class _FitStats:
    precompute_seconds: float = 0.0
    solve_seconds: float = 0.0
    subproblems: int = 0
    premature_terminations: int = 0
    infeasible: int = 0
    rolls: List[int] = field(default_factory=list)


class RollingSubtreeBuilder:
    """Grow one tree by rolling lookahead.

    Attributes:
        ds: The dataset.
        cfg: Fit configuration.
        loss_kind: Loss optimized by every subproblem.
        lookahead: Subproblem depth, capped by ``d_max``.
        stats: Timings and counters of the last ``fit``.
    """

    def __init__(
        self, ds: BinaryDataset, cfg: FitConfig, subset: Optional[NodeSubset] = None
    ) -> None:
        """Initialize the builder.

        Args:
            ds: The dataset.
            cfg: Fit configuration.
            subset: Training datapoints. Defaults to all of them.
        """
        self.ds = ds
        self.cfg = cfg
        self.subset = subset if subset is not None else NodeSubset.full(ds)
        self.subset.check_bounds(ds)
        if len(self.subset) == 0:
            raise ValueError("Cannot fit a tree on an empty subset")
        self.loss_kind = cfg.effective_loss()
        self.lookahead = min(cfg.lookahead, cfg.d_max)
        self.stats = _FitStats()
        self._nodes: List[_Node] = []

    @property
    def precompute_seconds(self) -> float:
        """Wall time spent building cost tables."""
        return self.stats.precompute_seconds

    @property
    def solve_seconds(self) -> float:
        """Wall time spent in the subproblem solvers."""
        return self.stats.solve_seconds

    def fit(self) -> DecisionTree:
        """Run the rolling loop and return the committed tree.

        Returns:
            DecisionTree: Tree of depth at most ``d_max``.
        """
        self.stats = _FitStats()
        self._nodes = []
        root = self._new_node(self.subset.indices, depth=0)

        frontier: List[Tuple[int, int]] = []
        if node_errors(root.class_counts) > 0:
            heapq.heappush(frontier, (root.depth, root.id))

        offset = self.lookahead - 1
        current_depth = offset
        while frontier and current_depth < self.cfg.d_max:
            _, node_id = heapq.heappop(frontier)
            node = self._nodes[node_id]
            for child_id in self._process(node):
                child = self._nodes[child_id]
                heapq.heappush(frontier, (child.depth, child.id))
            if frontier:
                current_depth = offset + frontier[0][0]

        tree = self._export()
        logger.info(
            f"Fitted {self.loss_kind.value} tree (lookahead {self.lookahead}, d_max "
            f"{self.cfg.d_max}): depth {tree.depth}, {tree.n_leaves} leaves, "
            f"{self.stats.subproblems} subproblems"
        )
        return tree

    def _new_node(self, indices: np.ndarray, depth: int) -> _Node:
        counts = np.bincount(self.ds.y[indices], minlength=self.ds.n_classes)
        node = _Node(id=len(self._nodes), depth=depth, indices=indices, class_counts=counts)
        self._nodes.append(node)
        return node

    def _solve(self, node: _Node) -> Optional[_Plan]:
        subset = NodeSubset(node.indices, node.depth)
        norm_n = len(subset)
        oct2_cfg = self.cfg.oct2_cfg
        self.stats.subproblems += 1

        if self.lookahead == 1:
            start = time.perf_counter()
            stump = solve_stump(self.ds, subset, self.loss_kind, oct2_cfg, norm_n)
            self.stats.solve_seconds += time.perf_counter() - start
            return None if stump is None else _Plan(stump.feature)

        if self.lookahead == 2:
            start = time.perf_counter()
            table = build_cost_table(self.ds, subset, self.loss_kind, norm_n)
            built = time.perf_counter()
            sol2 = solve_oct2(table, oct2_cfg)
            self.stats.precompute_seconds += built - start
            self.stats.solve_seconds += time.perf_counter() - built
            if sol2 is None:
                return None
            return _Plan(sol2.root_feature, _Plan(sol2.left_feature), _Plan(sol2.right_feature))

        start = time.perf_counter()
        sol3 = solve_oct3(self.ds, subset, self.loss_kind, oct2_cfg, norm_n)
        self.stats.solve_seconds += time.perf_counter() - start
        if sol3 is None:
            return None
        k = sol3.level3_features
        return _Plan(
            sol3.root_feature,
            _Plan(sol3.level2_features[0], _Plan(k[0]), _Plan(k[1])),
            _Plan(sol3.level2_features[1], _Plan(k[2]), _Plan(k[3])),
        )

    def _process(self, node: _Node) -> List[int]:
        """Solve and install the subproblem at ``node``; return children to enqueue."""
        plan = self._solve(node)
        baseline = node_errors(node.class_counts)

        if plan is None:
            self.stats.infeasible += 1
            logger.debug(f"Node {node.id}: no feasible subtree, closing")
            self._close(node)
            return []

        if self.loss_kind == LossKind.MISCLASSIFICATION:
            plan_errors = self._plan_errors(node.indices, plan)
            if plan_errors >= baseline and not self.cfg.oct2_cfg.allow_no_improvement:
                self.stats.premature_terminations += 1
                if node.id == 0:
                    logger.warning(
                        f"Premature termination at root: no subtree improves on "
                        f"{baseline} misclassified datapoints"
                    )
                else:
                    logger.debug(f"Node {node.id}: premature termination at depth {node.depth}")
                self._close(node)
                return []

            # Training misclassification never increases across rolls
            if node.split_feature is not None and plan_errors > self._subtree_errors(node):
                logger.debug(
                    f"Node {node.id}: keeping its subtree ({self._subtree_errors(node)} errors) "
                    f"over a {plan_errors}-error plan"
                )
                return self._impure_children(node)

        self._install(node, plan)
        self.stats.rolls.append(node.id)
        logger.debug(f"Node {node.id} at depth {node.depth}: split on {node.split_feature}")
        return self._impure_children(node)

    def _impure_children(self, node: _Node) -> List[int]:
        if node.split_feature is None:
            return []
        return [c for c in (node.left, node.right) if self._subtree_errors(self._nodes[c]) > 0]

    def _plan_errors(self, indices: np.ndarray, plan: Optional[_Plan]) -> int:
        if plan is None or indices.size == 0:
            counts = np.bincount(self.ds.y[indices], minlength=self.ds.n_classes)
            return node_errors(counts)
        goes_right = self.ds.X[indices, plan.feature] == 1
        return self._plan_errors(indices[~goes_right], plan.left) + self._plan_errors(
            indices[goes_right], plan.right
        )

    def _subtree_errors(self, node: _Node) -> int:
        if node.split_feature is None:
            return node_errors(node.class_counts)
        return self._subtree_errors(self._nodes[node.left]) + self._subtree_errors(
            self._nodes[node.right]
        )

    def _close(self, node: _Node) -> None:
        """Stop rolling at ``node``; keep its current split only if it helps."""
        if node.split_feature is None:
            return
        if self._subtree_errors(node) >= node_errors(node.class_counts):
            node.split_feature = node.left = node.right = None

    def _install(self, node: _Node, plan: Optional[_Plan]) -> None:
        """Replace the subtree under ``node`` with ``plan``.

        A side that receives no datapoints becomes a leaf with zero counts
        labeled with the majority class of ``node``.
        """
        node.split_feature = node.left = node.right = None
        if plan is None or node.indices.size == 0:
            return

        goes_right = self.ds.X[node.indices, plan.feature] == 1
        node.split_feature = plan.feature
        for side, indices, subplan in (
            ("left", node.indices[~goes_right], plan.left),
            ("right", node.indices[goes_right], plan.right),
        ):
            child = self._new_node(indices, node.depth + 1)
            setattr(node, side, child.id)
            if indices.size == 0:
                child.label = majority_label(node.class_counts)
            else:
                self._install(child, subplan)

    def _export(self) -> DecisionTree:
        """Renumber the reachable arena breadth-first into a DecisionTree."""
        order: List[_Node] = []
        queue = [self._nodes[0]]
        while queue:
            node = queue.pop(0)
            order.append(node)
            if node.split_feature is not None:
                queue.append(self._nodes[node.left])
                queue.append(self._nodes[node.right])

        new_id = {node.id: position for position, node in enumerate(order)}
        nodes = []
        for node in order:
            internal = node.split_feature is not None
            nodes.append(
                TreeNode(
                    id=new_id[node.id],
                    depth=node.depth,
                    class_counts=tuple(int(c) for c in node.class_counts),
                    label=node.label if node.label is not None else majority_label(node.class_counts),
                    split_feature=node.split_feature,
                    left=new_id[node.left] if internal else None,
                    right=new_id[node.right] if internal else None,
                )
            )
        return DecisionTree(
            nodes=tuple(nodes),
            class_names=self.ds.class_names,
            feature_names=self.ds.feature_names,
            schema=self.ds.schema,
        )


def rst_fit(
    ds: BinaryDataset, cfg: FitConfig, subset: Optional[NodeSubset] = None
) -> DecisionTree:
    """Fit a tree by rolling lookahead.

    Args:
        ds: The dataset.
        cfg: Fit configuration.
        subset: Training datapoints. Defaults to all of them.

    Returns:
        DecisionTree: The fitted tree.
    """
    return RollingSubtreeBuilder(ds, cfg, subset).fit()


def hybrid_fit(
    ds: BinaryDataset,
    d_max: int,
    oct2_cfg: Optional[Oct2Config] = None,
    subset: Optional[NodeSubset] = None,
) -> DecisionTree:
    """Misclassification loss up to depth 5, Gini beyond, lookahead 2."""
    cfg = FitConfig(
        d_max=d_max,
        lookahead=2,
        strategy=Strategy.HYBRID,
        oct2_cfg=oct2_cfg or Oct2Config(),
    )
    return rst_fit(ds, cfg, subset)
